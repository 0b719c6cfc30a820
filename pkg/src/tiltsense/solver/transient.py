"""Time-accurate response to a heater step.

At ``t = 0`` the fluid is at rest at the ambient temperature and the heater
jumps to its set temperature.  Each step is backward Euler for diffusion,
buoyancy and the wall vorticity coupling, with advection taken explicitly from
the previous step, so the matrix is constant and factorized once::

    (I/dt + L) x[n+1] = x[n]/dt - c - N(x[n])

The stream-function rows carry no time derivative and are solved together
with the rest.  Explicit central advection is stable when both the Courant
number and the cell Peclet-type bound hold; see :func:`max_stable_dt`.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import CFLError, ConvergenceError
from ..fluids.properties import FluidSpec
from .geometry import SensorGeometry
from .mesh import detector_temperatures
from .solution import Solution, SolverConfig
from .steady import Problem, check_regime

log = logging.getLogger(__name__)

STEPS_PER_TIME_CONSTANT = 40
TIME_CONSTANTS = 10.0


@dataclass(frozen=True, eq=False)
class TransientResult:
    """Detector history of a step response plus field snapshots.

    ``delta_T`` is ``T_right - T_left``; all arrays share the ``times`` axis
    and start with the rest state at ``t = 0``.  For geometries without
    detectors the detector arrays are NaN.
    """

    times: np.ndarray
    delta_T: np.ndarray
    T_left: np.ndarray
    T_right: np.ndarray
    snapshots: tuple
    final: Solution
    dt: float
    time_constant_estimate: float

    def series(self):
        return list(zip(self.times.tolist(), self.delta_T.tolist()))


def max_stable_dt(problem: Problem, x, safety: float) -> float:
    """Largest step for explicit central advection at the velocities in ``x``.

    Two limits apply: the Courant limit ``dt * (|u|/dx + |v|/dy) <= 1`` and
    ``dt <= 2 D / |u|**2`` with ``D`` the smaller of the two diffusivities.
    """
    d, m = problem.disc, problem.mesh
    u, v = d.Dy_psi(x), -d.Dx_psi(x)
    if u.size == 0:
        return math.inf
    courant = float(np.max(np.abs(u) / m.dx + np.abs(v) / m.dy))
    speed2 = float(np.max(u * u + v * v))
    D = min(problem.alpha, problem.nu)
    limits = [math.inf]
    if courant > 0:
        limits.append(1.0 / courant)
    if speed2 > 0:
        limits.append(2.0 * D / speed2)
    return safety * min(limits)


def _step_matrix(problem: Problem, x, dt):
    M, c = problem.linear_part(problem.nu_field(x))
    A = (sp.diags(problem.mass / dt) + M).tocsc()
    return spla.splu(A), c


def _detectors(problem, T):
    if not isinstance(problem.geometry, SensorGeometry):
        return math.nan, math.nan
    return detector_temperatures(problem.mesh, problem.geometry, T)


def solve_transient(geometry, fluid: FluidSpec, config: SolverConfig | None = None) -> TransientResult:
    """Step response from the isothermal rest state.

    ``config.dt`` and ``config.end_time`` default to ``tau/40`` and ``10 tau``
    with ``tau`` the slowest diffusive decay time of the cavity.  An explicit
    ``dt`` that breaks the advective stability limit raises
    :class:`~tiltsense.errors.CFLError`; the automatic one is reduced instead.
    ``config.snapshot_every`` keeps every k-th field (0 keeps only the last).
    """
    config = config or SolverConfig()
    start = time.perf_counter()
    problem = Problem(geometry, fluid, config)
    check_regime(problem)
    tau = problem.time_constant_estimate()
    auto_dt = config.dt is None
    dt = tau / STEPS_PER_TIME_CONSTANT if auto_dt else config.dt
    end = TIME_CONSTANTS * tau if config.end_time is None else config.end_time
    if dt > end:
        dt = end

    x = problem.disc.initial_state(problem.mesh.T_ambient)
    T_rest = problem.disc.full(x, "T")
    left, right = _detectors(problem, T_rest)
    times, lefts, rights = [0.0], [left], [right]
    snapshots = []
    lu, c = _step_matrix(problem, x, dt)
    mass = problem.mass
    t, n = 0.0, 0
    while t < end * (1 - 1e-12):
        h = min(dt, end - t)
        dt_max = max_stable_dt(problem, x, config.cfl_safety)
        if h > dt_max:
            if not auto_dt:
                raise CFLError(h, dt_max)
            dt = h = 0.9 * dt_max
            log.info("reducing automatic time step to %.4g s", dt)
            lu, c = _step_matrix(problem, x, dt)
        elif h != dt or problem.variable_mu:
            lu, c = _step_matrix(problem, x, h)
        x = lu.solve(mass * x / h - c - problem.advection(x))
        if not np.all(np.isfinite(x)):
            raise ConvergenceError(f"transient solution became non-finite at t = {t + h:.4g} s", [])
        if not auto_dt:
            # the step just taken must also be stable for the flow it produced
            dt_after = max_stable_dt(problem, x, config.cfl_safety)
            if h > dt_after:
                raise CFLError(h, dt_after)
        t += h
        n += 1
        T = problem.disc.full(x, "T")
        left, right = _detectors(problem, T)
        times.append(t)
        lefts.append(left)
        rights.append(right)
        if config.snapshot_every and n % config.snapshot_every == 0:
            snapshots.append(problem.build_solution(x, (), n, True, time.perf_counter() - start, t))

    final = problem.build_solution(x, (), n, True, time.perf_counter() - start, t)
    if not snapshots or snapshots[-1].time != t:
        snapshots.append(final)
    lefts, rights = np.array(lefts), np.array(rights)
    return TransientResult(
        times=np.array(times),
        delta_T=rights - lefts,
        T_left=lefts,
        T_right=rights,
        snapshots=tuple(snapshots),
        final=final,
        dt=dt,
        time_constant_estimate=tau,
    )
