"""Independent reference for the side-heated square cavity.

Explicit time marching of the non-dimensional vorticity / stream-function /
temperature equations to steady state; shares no code with the package.
Unit cavity, hot wall T = 1 at x = 0, cold wall T = 0 at x = 1, adiabatic
top and bottom, lengths scaled by the side and times by side**2 / alpha::

    w_t + u w_x + v w_y = Pr lap(w) + Ra Pr T_x
    T_t + u T_x + v T_y = lap(T)
    lap(psi) = -w,   u = psi_y,   v = -psi_x

The Poisson problem is solved exactly each step with a type-I sine
transform; wall vorticity from Thom's formula.

Run as a script to print the mean hot-wall Nusselt numbers that the test
suite freezes.
"""
import numpy as np
from scipy.fft import dstn, idstn
from scipy.integrate import trapezoid


def hot_wall_nusselt(rayleigh, prandtl=0.71, n=64, t_end=1.5, tol=1e-9):
    h = 1.0 / n
    T = np.zeros((n + 1, n + 1))  # [j, i]
    T[:, 0] = 1.0
    w = np.zeros_like(T)
    psi = np.zeros_like(T)
    k = np.arange(1, n)
    lam = (2.0 * np.cos(np.pi * k / n) - 2.0) / h**2
    denom = lam[:, None] + lam[None, :]
    dt = 0.2 * h**2 / max(1.0, prandtl)
    steps = int(np.ceil(t_end / dt))
    I = slice(1, -1)
    for step in range(steps):
        psi[I, I] = idstn(dstn(-w[I, I], type=1) / denom, type=1)
        # Thom wall vorticity
        w[0, :] = -2.0 * psi[1, :] / h**2
        w[-1, :] = -2.0 * psi[-2, :] / h**2
        w[:, 0] = -2.0 * psi[:, 1] / h**2
        w[:, -1] = -2.0 * psi[:, -2] / h**2
        u = (psi[2:, 1:-1] - psi[:-2, 1:-1]) / (2 * h)
        v = -(psi[1:-1, 2:] - psi[1:-1, :-2]) / (2 * h)

        def rhs(f, diff):
            fx = (f[1:-1, 2:] - f[1:-1, :-2]) / (2 * h)
            fy = (f[2:, 1:-1] - f[:-2, 1:-1]) / (2 * h)
            lap = (f[1:-1, 2:] + f[1:-1, :-2] + f[2:, 1:-1] + f[:-2, 1:-1] - 4 * f[1:-1, 1:-1]) / h**2
            return -(u * fx + v * fy) + diff * lap

        Tx = (T[1:-1, 2:] - T[1:-1, :-2]) / (2 * h)
        dw = rhs(w, prandtl) + rayleigh * prandtl * Tx
        dT = rhs(T, 1.0)
        w[I, I] += dt * dw
        T[I, I] += dt * dT
        # adiabatic top and bottom: second-order mirror
        T[0, I] = (4 * T[1, I] - T[2, I]) / 3.0
        T[-1, I] = (4 * T[-2, I] - T[-3, I]) / 3.0
        if step % 500 == 0 and step > 0 and np.max(np.abs(dT)) < tol:
            break
    grad = -(-3 * T[:, 0] + 4 * T[:, 1] - T[:, 2]) / (2 * h)
    y = np.linspace(0.0, 1.0, n + 1)
    return float(trapezoid(grad, y))


if __name__ == "__main__":
    for Ra in (1e3, 1e4):
        print(Ra, hot_wall_nusselt(Ra))
