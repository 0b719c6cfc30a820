"""Boussinesq natural convection in a closed cavity: steady Newton solve.

Equations, with ``u = dpsi/dy``, ``v = -dpsi/dx`` and gravity ``(g_x, g_y)``::

    lap(psi) + omega = 0
    u . grad(omega) = nu lap(omega) + beta (g_x dT/dy - g_y dT/dx)
    u . grad(T)     = alpha lap(T)

Properties are frozen at the film temperature.  With the
``temperature-dependent-mu`` mode the viscous term becomes the exact curl of
``div(2 mu(T) S) / rho`` for a spatially varying viscosity, with ``mu(T)``
lagged by one Newton iteration.
"""
from __future__ import annotations

import logging
import math
import time
import warnings

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.integrate import trapezoid

from ..dimensionless import RA_TURBULENT, OperatingPoint, classify_thermal_regime, rayleigh
from ..errors import ConvergenceError, RegimeError, ValidationError
from ..fluids.properties import FluidSpec, evaluate, film_temperature
from .discretization import Discretization
from .geometry import BenchmarkCavity, SensorGeometry
from .mesh import build_mesh
from .solution import Solution, SolverConfig

log = logging.getLogger(__name__)

_TINY = 1e-300


class Problem:
    """One fluid in one geometry on one grid: residual, Jacobian and helpers."""

    def __init__(self, geometry, fluid: FluidSpec, config: SolverConfig):
        self.geometry = geometry
        self.fluid_spec = fluid
        self.config = config
        self.mesh = mesh = build_mesh(geometry, config.nx, config.ny, config.ambient_temperature)
        self.disc = d = Discretization(mesh)
        lo, hi = fluid.validity
        for T in (mesh.T_ambient, mesh.T_heater):
            if not lo <= T <= hi:
                raise ValidationError(
                    f"{fluid.name}: temperature {T:g} K outside the validity range [{lo:g}, {hi:g}] K"
                )
        self.state = state = evaluate(fluid, film_temperature(mesh.T_heater, mesh.T_ambient))
        self.alpha = state.diffusivity
        self.nu = state.kinematic_viscosity
        self.beta = state.expansion
        self.gx, self.gy = geometry.gravity_components
        self.variable_mu = config.properties == "temperature-dependent-mu"

        nF = d.nF
        self.P_T = sp.coo_matrix((np.ones(nF), (d.fluid_in_T, np.arange(nF))), shape=(d.nT, nF)).tocsr()
        self._static = {
            "psi": -d.Lap_psi - d.omegaP,
            "T": -self.alpha * d.Lap_T,
            "buoy": -self.beta * (self.gx * d.Dy_TF - self.gy * d.Dx_TF),
        }
        self._cached_visc = None
        mass = np.zeros(d.n)
        mass[d.slices["omega"]] = 1.0
        mass[d.slices["T"]] = 1.0
        self.mass = mass

    # -- characteristic scales ----------------------------------------------
    @property
    def characteristic_length(self):
        if isinstance(self.geometry, BenchmarkCavity):
            return self.geometry.side
        return self.geometry.heater_width

    def rayleigh(self, length=None):
        pt = OperatingPoint(
            self.state,
            length=length or self.characteristic_length,
            delta_T=abs(self.mesh.delta_T),
            gravity=self.geometry.gravity,
        )
        return rayleigh(pt)

    def time_constant_estimate(self):
        """Decay time of the slowest diffusive mode of the cavity."""
        D = min(self.alpha, self.nu)
        m = self.mesh
        return 1.0 / (math.pi**2 * D * (1.0 / m.width**2 + 1.0 / m.height**2))

    # -- viscous operator ----------------------------------------------------
    def nu_field(self, x):
        if not self.variable_mu:
            return None
        lo, hi = self.fluid_spec.validity
        T = np.clip(self.disc.full(x, "T"), lo, hi)
        return self.fluid_spec.viscosity(T) / self.state.density

    def viscous(self, nu_full):
        """Affine operator for the viscous vorticity term at fluid rows."""
        d = self.disc
        if nu_full is None:
            if self._cached_visc is None:
                self._cached_visc = self.nu * d.Lap_omega
            return self._cached_visc
        m = self.mesh
        dx, dy = m.dx, m.dy
        n = nu_full
        F = d.fluid
        nP = n.ravel()[F]

        def at(a):
            return a.ravel()[F]

        nx_ = np.zeros_like(n)
        ny_ = np.zeros_like(n)
        nxx = np.zeros_like(n)
        nyy = np.zeros_like(n)
        nxy = np.zeros_like(n)
        nx_[:, 1:-1] = (n[:, 2:] - n[:, :-2]) / (2 * dx)
        ny_[1:-1, :] = (n[2:, :] - n[:-2, :]) / (2 * dy)
        nxx[:, 1:-1] = (n[:, 2:] - 2 * n[:, 1:-1] + n[:, :-2]) / dx**2
        nyy[1:-1, :] = (n[2:, :] - 2 * n[1:-1, :] + n[:-2, :]) / dy**2
        nxy[1:-1, 1:-1] = (n[2:, 2:] - n[2:, :-2] - n[:-2, 2:] + n[:-2, :-2]) / (4 * dx * dy)
        return (
            nP * d.Lap_omega
            + (2 * at(nx_)) * d.Dx_omega
            + (2 * at(ny_)) * d.Dy_omega
            + (at(nxx) - at(nyy)) * (d.Dyy_psi - d.Dxx_psi)
            - (4 * at(nxy)) * d.Dxy_psi
        )

    def linear_part(self, nu_full=None):
        d = self.disc
        omega = -self.viscous(nu_full) + self._static["buoy"]
        blocks = [self._static["psi"], omega, self._static["T"]]
        if d.has_island:
            blocks.append(d.island_constraint)
        M = sp.vstack([b.M for b in blocks]).tocsr()
        c = np.concatenate([b.c for b in blocks])
        return M, c

    # -- advection -----------------------------------------------------------
    def advection(self, x):
        d = self.disc
        u, v = d.Dy_psi(x), -d.Dx_psi(x)
        adv_omega = u * d.Dx_omega(x) + v * d.Dy_omega(x)
        adv_T = self.P_T @ (u * d.Dx_TF(x) + v * d.Dy_TF(x))
        out = np.zeros(d.n)
        out[d.slices["omega"]] = adv_omega
        out[d.slices["T"]] = adv_T
        return out

    def advection_jacobian(self, x):
        d = self.disc
        u, v = d.Dy_psi(x), -d.Dx_psi(x)
        wx, wy = d.Dx_omega(x), d.Dy_omega(x)
        tx, ty = d.Dx_TF(x), d.Dy_TF(x)
        diag = sp.diags
        J_omega = (
            diag(wx) @ d.Dy_psi.M - diag(wy) @ d.Dx_psi.M + diag(u) @ d.Dx_omega.M + diag(v) @ d.Dy_omega.M
        )
        J_T = self.P_T @ (diag(tx) @ d.Dy_psi.M - diag(ty) @ d.Dx_psi.M + diag(u) @ d.Dx_TF.M + diag(v) @ d.Dy_TF.M)
        blocks = [sp.csr_matrix((d.nF, d.n)), J_omega, J_T]
        if d.has_island:
            blocks.append(sp.csr_matrix((1, d.n)))
        return sp.vstack(blocks).tocsr()

    # -- residual ------------------------------------------------------------
    def residual(self, x, nu_full=None):
        M, c = self.linear_part(nu_full)
        return M @ x + c + self.advection(x)

    def relative_residuals(self, x, F):
        d, m = self.disc, self.mesh
        s = 2.0 / m.dx**2 + 2.0 / m.dy**2
        sl = d.slices
        psi, omega = x[sl["psi"]], x[sl["omega"]]
        out = {
            "psi": _norm(F[sl["psi"]]) / (s * max(_norm(psi), _norm(omega) / s, _TINY)),
            "omega": _norm(F[sl["omega"]]) / max(self.nu * s * _norm(omega), _norm(self._static["buoy"](x)), _TINY),
            "T": _norm(F[sl["T"]]) / (self.alpha * s * max(abs(m.delta_T), _TINY)),
        }
        if d.has_island:
            ic = d.island_constraint
            scale = np.abs(ic.M).multiply(np.abs(x)).sum()
            out["island"] = abs(F[-1]) / max(scale, _TINY)
        return out

    # -- Newton --------------------------------------------------------------
    def newton(self, x, history):
        cfg = self.config
        d = self.disc
        relax = np.ones(d.n)
        relax[d.slices["omega"]] = cfg.relaxation_vorticity
        relax[d.slices["psi"]] = cfg.relaxation_vorticity
        relax[d.slices["T"]] = cfg.relaxation_energy
        for it in range(cfg.max_iterations + 1):
            nu_full = self.nu_field(x)
            M, c = self.linear_part(nu_full)
            F = M @ x + c + self.advection(x)
            rel = self.relative_residuals(x, F)
            r = max(rel.values())
            history.append(r)
            log.debug("newton it=%d residual=%.3e %s", it, r, rel)
            if not math.isfinite(r):
                return x, False
            if r < cfg.tolerance:
                return x, True
            if it == cfg.max_iterations:
                break
            J = (M + self.advection_jacobian(x)).tocsc()
            step = spla.spsolve(J, -F)
            if not np.all(np.isfinite(step)):
                return x, False
            x = x + relax * step
        return x, False

    def build_solution(self, x, history, iterations, converged, wall_time, t=None):
        d = self.disc
        u, v = d.velocities(x)
        return Solution(
            mesh=self.mesh,
            geometry=self.geometry,
            fluid=self.state,
            config=self.config,
            T=d.full(x, "T"),
            u=u,
            v=v,
            psi=d.full(x, "psi"),
            omega=d.wall_vorticity(x),
            residuals=tuple(history),
            iterations=iterations,
            converged=converged,
            wall_time=wall_time,
            time=t,
            psi_island=float(x[d.island]) if d.has_island else 0.0,
            metadata={"fluid": self.fluid_spec.name, "config_hash": self.config.digest()},
        )


def _norm(a):
    return float(np.max(np.abs(a))) if a.size else 0.0


def check_regime(problem: Problem):
    Ra = problem.rayleigh()
    if classify_thermal_regime(Ra) != "laminar_or_conductive":
        msg = (
            f"Ra = {Ra:.4g} (length {problem.characteristic_length:g} m) exceeds {RA_TURBULENT:g}; "
            "the laminar solver does not apply"
        )
        if not problem.config.allow_turbulent:
            raise RegimeError(msg + " (set allow_turbulent to proceed)")
        warnings.warn(msg, RuntimeWarning, stacklevel=3)
    return Ra


def solve_steady(geometry, fluid: FluidSpec, config: SolverConfig | None = None) -> Solution:
    """Steady laminar solution by Newton iteration on the coupled system.

    Falls back to continuation in gravity when Newton from rest fails.
    Raises :class:`ConvergenceError` carrying the residual history otherwise.
    """
    config = config or SolverConfig()
    start = time.perf_counter()
    problem = Problem(geometry, fluid, config)
    check_regime(problem)
    history: list[float] = []
    x0 = problem.disc.initial_state(problem.mesh.T_ambient)
    x, ok = problem.newton(x0, history)
    if not ok and geometry.gravity > 0:
        log.info("Newton from rest failed; continuing in gravity")
        x = x0
        for frac in (0.05, 0.2, 0.5, 1.0):
            sub = Problem(geometry.replace(gravity=geometry.gravity * frac), fluid, config)
            x, ok = sub.newton(x, history)
            if not ok:
                break
    if not ok:
        raise ConvergenceError(
            f"steady solve did not converge within {config.max_iterations} Newton iterations "
            f"(last relative residual {history[-1]:.3e}, tolerance {config.tolerance:.1e})",
            history,
        )
    return problem.build_solution(x, history, len(history) - 1, True, time.perf_counter() - start)


def benchmark_fluid(prandtl: float) -> FluidSpec:
    """Unit-property fluid for the non-dimensional heated-cavity benchmark."""
    from ..fluids.properties import PropertyModel

    one = PropertyModel.constant(1.0)
    return FluidSpec(
        name=f"benchmark-Pr{prandtl:g}",
        phase="liquid",
        density=one,
        viscosity=PropertyModel.constant(prandtl),
        conductivity=one,
        specific_heat=one,
        expansion=one,
        validity=(0.5, 3.0),
        source="non-dimensional benchmark fluid",
    )


def benchmark_case(rayleigh_number: float, prandtl: float = 0.71):
    """Geometry and fluid so that the side-heated unit cavity runs at the given Ra and Pr."""
    # alpha = 1, nu = Pr, beta = dT = L = 1  =>  Ra = g / (nu alpha) = g / Pr
    geometry = BenchmarkCavity(side=1.0, hot_temperature=2.0, cold_temperature=1.0, gravity=rayleigh_number * prandtl)
    return geometry, benchmark_fluid(prandtl)


def wall_nusselt(solution: Solution, wall: str = "hot") -> float:
    """Mean Nusselt number on a side wall of a :class:`BenchmarkCavity` solution.

    Uses the second-order one-sided wall gradient and the trapezoid rule.
    """
    m = solution.mesh
    T = solution.T
    dT = m.T_heater - m.T_ambient
    if wall == "hot":
        grad = -(-3 * T[:, 0] + 4 * T[:, 1] - T[:, 2]) / (2 * m.dx)
    elif wall == "cold":
        grad = -(3 * T[:, -1] - 4 * T[:, -2] + T[:, -3]) / (2 * m.dx)
    else:
        raise ValueError(f"wall must be 'hot' or 'cold', got {wall!r}")
    local = grad * m.width / dT
    return float(trapezoid(local, m.y) / m.height)


def conduction_solution(geometry, fluid: FluidSpec, config: SolverConfig | None = None) -> Solution:
    """Same grid and boundary conditions with buoyancy switched off."""
    return solve_steady(geometry.replace(gravity=0.0), fluid, config)


__all__ = [
    "Problem",
    "SensorGeometry",
    "benchmark_case",
    "benchmark_fluid",
    "conduction_solution",
    "solve_steady",
    "wall_nusselt",
]
