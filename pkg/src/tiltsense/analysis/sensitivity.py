"""Detector signal, tilt sweeps and the proportionality probes.

Sign convention: ``delta_T = T(+d) - T(-d)`` with gravity
``(g sin(theta), -g cos(theta))``.  A positive tilt pushes the warm plume
towards ``-x``, so the fitted slope ``S`` is negative in this frame.  Ratios
and log-log slopes use ``|S|``.
"""
from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..dimensionless import OperatingPoint, a_factor, rayleigh
from ..errors import FitError, TiltSenseError, ValidationError
from ..fluids.properties import FluidSpec, evaluate, film_temperature
from ..solver.mesh import detector_temperatures
from ..solver.solution import SolverConfig
from ..solver.steady import solve_steady

log = logging.getLogger(__name__)

DEFAULT_PROBE_ANGLES = tuple(math.radians(a) for a in (-30.0, 0.0, 30.0))
LOW_RAYLEIGH = 100.0


def detector_delta_T(solution, geometry=None) -> float:
    """``T(+d) - T(-d)``, each detector averaged over its strip footprint."""
    geometry = geometry or solution.geometry
    left, right = detector_temperatures(solution.mesh, geometry, solution.T)
    return right - left


@dataclass(frozen=True)
class SweepResult:
    """Detector ``delta_T`` against ``sin(theta)`` with its straight-line fit."""

    samples: tuple  # ((sin theta, delta_T K), ...) sorted by sin theta
    sensitivity: float  # K per unit sin theta
    intercept: float  # K
    r_squared: float
    angles: tuple = ()  # radians, same order as samples

    @property
    def full_scale(self):
        return max(abs(dt) for _, dt in self.samples)


def fit_sweep(samples, angles=()) -> SweepResult:
    """Least-squares line ``delta_T = S sin(theta) + b`` through ``(sin theta, delta_T)`` samples."""
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or len(data) < 3:
        raise FitError("a sweep fit needs at least 3 (sin theta, delta_T) samples")
    if not np.all(np.isfinite(data)):
        raise FitError("sweep samples must be finite")
    order = np.argsort(data[:, 0], kind="stable")
    data = data[order]
    s, y = data[:, 0], data[:, 1]
    ds = s - s.mean()
    sxx = float(np.dot(ds, ds))
    if np.ptp(s) == 0:
        raise FitError("a sweep fit needs at least two distinct angles")
    slope = float(np.dot(ds, y - y.mean()) / sxx)
    intercept = float(y.mean() - slope * s.mean())
    r_squared = _r_squared(y, slope * s + intercept)
    if len(angles):
        angles = tuple(float(np.asarray(angles, dtype=float)[k]) for k in order)
    return SweepResult(tuple(map(tuple, data.tolist())), slope, intercept, r_squared, tuple(angles))


def _r_squared(y, fit):
    ss_res = float(np.sum((y - fit) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot == 0:
        return 1.0 if ss_res == 0 else 0.0
    return min(max(1.0 - ss_res / ss_tot, 0.0), 1.0)


def tilt_sweep(geometry, fluid: FluidSpec, config: SolverConfig | None = None, angles=DEFAULT_PROBE_ANGLES,
               workers: int = 1) -> SweepResult:
    """One steady solve per angle (radians), then :func:`fit_sweep`.

    Solves are independent and may run on ``workers`` threads; the result
    does not depend on the worker count or on the order of ``angles``.
    """
    angles = [float(a) for a in angles]
    if len(angles) < 3:
        raise ValidationError(f"a tilt sweep needs at least 3 angles, got {len(angles)}")
    config = config or SolverConfig()

    def one(theta):
        try:
            sol = solve_steady(geometry.tilted(theta), fluid, config)
        except TiltSenseError as exc:
            exc.angle = theta
            if exc.args:
                exc.args = (f"tilt sweep failed at angle {math.degrees(theta):g} deg: {exc.args[0]}",) + exc.args[1:]
            raise
        return detector_delta_T(sol, geometry.tilted(theta))

    unique = sorted(set(angles))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = dict(zip(unique, pool.map(one, unique)))
    else:
        values = {a: one(a) for a in unique}
    samples = [(math.sin(a), values[a]) for a in angles]
    return fit_sweep(samples, angles)


@dataclass(frozen=True)
class RatioRow:
    fluid: str
    sensitivity: float
    ratio: float  # S / S_air
    a_factor: float
    a_ratio: float  # A / A_air


def sensitivity_ratio_table(fluids, geometry, config: SolverConfig | None = None,
                            angles=DEFAULT_PROBE_ANGLES, reference: str = "air", workers: int = 1):
    """Fitted sensitivity and A-factor of each fluid, both relative to ``reference``.

    All fluids share the geometry, so the heater rise ``T_h - T_0`` is matched.
    """
    config = config or SolverConfig()
    fluids = list(fluids)
    names = [f.name for f in fluids]
    if reference not in names:
        raise ValidationError(f"sensitivity ratios need {reference!r} in the fluid list, got {names}")
    T_film = film_temperature(geometry.heater_temperature, config.ambient_temperature)
    S, A = {}, {}
    for f in fluids:
        S[f.name] = tilt_sweep(geometry, f, config, angles, workers).sensitivity
        A[f.name] = a_factor(evaluate(f, T_film))
    S_ref, A_ref = S[reference], A[reference]
    return [RatioRow(n, S[n], S[n] / S_ref, A[n], A[n] / A_ref) for n in names]


@dataclass(frozen=True)
class ScalingResult:
    """Log-log slope of ``|S|`` against a swept quantity."""

    parameter: str
    multipliers: tuple
    values: tuple  # swept quantity (viscosity Pa s, or Ra)
    sensitivities: tuple
    slope: float
    prefactor: float


def loglog_slope(x, y):
    """Least-squares slope and prefactor of ``log|y|`` against ``log x``."""
    x, y = np.asarray(x, dtype=float), np.abs(np.asarray(y, dtype=float))
    if x.size < 2 or np.any(x <= 0) or np.any(y <= 0):
        raise FitError("log-log fit needs at least two positive points")
    lx, ly = np.log(x), np.log(y)
    dx = lx - lx.mean()
    sxx = float(np.dot(dx, dx))
    if np.ptp(lx) == 0:
        raise FitError("log-log fit needs a spread in the swept quantity; all values are equal")
    slope = float(np.dot(dx, ly - ly.mean()) / sxx)
    return slope, float(np.exp(ly.mean() - slope * lx.mean()))


def _check_multipliers(multipliers):
    m = [float(k) for k in multipliers]
    if len(m) < 2:
        raise ValidationError("a scaling probe needs at least two multipliers")
    if len(set(m)) < 2:
        raise ValidationError(f"degenerate multipliers {m}: no spread to fit a slope")
    return m


def viscosity_scaling_probe(fluid: FluidSpec, multipliers, geometry, config: SolverConfig | None = None,
                            angles=DEFAULT_PROBE_ANGLES) -> ScalingResult:
    """Slope of ``log|S|`` against ``log(mu)`` with every other property fixed."""
    config = config or SolverConfig()
    m = _check_multipliers(multipliers)
    if any(k <= 0 for k in m):
        raise ValidationError(f"viscosity multipliers must be > 0, got {m}")
    T_film = film_temperature(geometry.heater_temperature, config.ambient_temperature)
    mu, S = [], []
    for k in m:
        scaled = fluid.with_property("viscosity", fluid.viscosity.scaled(k))
        mu.append(scaled.viscosity(T_film))
        S.append(tilt_sweep(geometry, scaled, config, angles).sensitivity)
    slope, pre = loglog_slope(mu, S)
    return ScalingResult("viscosity", tuple(m), tuple(mu), tuple(S), slope, pre)


def rayleigh_scaling_probe(fluid: FluidSpec, multipliers, geometry, config: SolverConfig | None = None,
                           angles=DEFAULT_PROBE_ANGLES) -> ScalingResult:
    """Slope of ``log|S|`` against ``log(Ra)`` as gravity is scaled.

    Ra uses the heater width as length scale.  A zero multiplier is dropped
    with a warning since its logarithm is undefined.
    """
    config = config or SolverConfig()
    m = [float(k) for k in multipliers]
    if any(k < 0 for k in m):
        raise ValidationError(f"gravity multipliers must be >= 0, got {m}")
    if 0.0 in m:
        warnings.warn("gravity multiplier 0 excluded from the Rayleigh probe (log undefined)", RuntimeWarning,
                      stacklevel=2)
        m = [k for k in m if k > 0]
    m = _check_multipliers(m)
    state = evaluate(fluid, film_temperature(geometry.heater_temperature, config.ambient_temperature))
    dT = abs(geometry.heater_temperature - config.ambient_temperature)
    Ra, S = [], []
    for k in m:
        g = geometry.gravity * k
        ra = rayleigh(OperatingPoint(state, length=geometry.heater_width, delta_T=dT, gravity=g))
        if ra >= LOW_RAYLEIGH:
            raise ValidationError(f"Rayleigh probe needs Ra < {LOW_RAYLEIGH:g}; multiplier {k:g} gives Ra = {ra:.4g}")
        Ra.append(ra)
        S.append(tilt_sweep(geometry.replace(gravity=g), fluid, config, angles).sensitivity)
    slope, pre = loglog_slope(Ra, S)
    return ScalingResult("rayleigh", tuple(m), tuple(Ra), tuple(S), slope, pre)
