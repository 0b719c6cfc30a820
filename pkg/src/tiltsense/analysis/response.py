"""First-order fit of a step response."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit

from ..errors import FitError

STEP_FRACTION = 1.0 - np.exp(-1.0)  # 63.2 %


@dataclass(frozen=True)
class ResponseTimeResult:
    time_constant: float  # s
    response_time: float  # s, 63.2 % point of the fitted response
    r_squared: float
    amplitude: float  # K


def _first_order(t, a, tau):
    return a * -np.expm1(-t / tau)


def fit_first_order(series) -> ResponseTimeResult:
    """Least-squares fit of ``a (1 - exp(-t / tau))`` to ``(t, value)`` samples.

    The response time is the fitted ``tau``, i.e. the time to reach 63.2 % of
    the final amplitude.  Raises :class:`~tiltsense.errors.FitError` for
    fewer than 5 samples, a flat series, or a series that does not move
    towards a final value.
    """
    data = np.asarray(series, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or len(data) < 5:
        raise FitError("a first-order fit needs at least 5 (t, value) samples")
    if not np.all(np.isfinite(data)):
        raise FitError("response samples must be finite")
    data = data[np.argsort(data[:, 0], kind="stable")]
    t, y = data[:, 0], data[:, 1]
    if t[0] < 0:
        raise FitError("response times must start at or after the step (t >= 0)")
    tail = y[-max(1, len(y) // 10):].mean()
    scale = np.max(np.abs(y))
    if scale == 0 or abs(tail - y[0]) <= 1e-12 * scale:
        raise FitError("flat series: no step to fit")
    # the mean of each half must move towards the final value
    half = len(y) // 2
    if np.sign(y[half:].mean() - y[:half].mean()) != np.sign(tail - y[0]):
        raise FitError("series is not a step response towards its final value")

    crossing = np.flatnonzero(np.abs(y - y[0]) >= STEP_FRACTION * abs(tail - y[0]))
    tau0 = t[crossing[0]] if crossing.size and t[crossing[0]] > 0 else (t[-1] - t[0]) / 5
    try:
        (a, tau), _ = curve_fit(_first_order, t, y, p0=(tail, tau0), xtol=1e-15, ftol=1e-15, gtol=1e-15,
                                maxfev=10000)
    except RuntimeError as exc:
        raise FitError(f"first-order fit did not converge: {exc}") from exc
    if not tau > 0:
        raise FitError(f"fitted time constant is not positive ({tau:g} s)")
    resid = y - _first_order(t, a, tau)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = min(max(1.0 - float(np.sum(resid**2)) / ss_tot, 0.0), 1.0)
    return ResponseTimeResult(float(tau), float(tau), r2, float(a))
