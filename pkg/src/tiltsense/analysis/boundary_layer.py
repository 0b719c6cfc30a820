"""Thermal boundary-layer thickness: where 99% of the heater rise has been lost."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import GeometryError, ValidationError

DIRECTIONS = ("horizontal", "up", "down")
FRACTION = 0.99


@dataclass(frozen=True)
class BoundaryLayerResult:
    thickness: float  # m
    direction: str
    start: tuple  # (x, y) of the profile origin, m
    threshold: float  # K
    exceeds_cavity: bool
    available: float  # distance from start to the wall along the profile, m

    @property
    def flag(self):
        return "exceeds cavity" if self.exceeds_cavity else "inside cavity"


def profile_crossing(distance, T, T_source, T_ambient, fraction=FRACTION):
    """Distance at which ``T`` first falls to ``T_ambient + (1 - fraction)(T_source - T_ambient)``.

    Linear interpolation between samples.  Returns ``(distance, reached)``;
    when the threshold is never crossed the last distance is returned with
    ``reached`` False.
    """
    s, T = np.asarray(distance, dtype=float), np.asarray(T, dtype=float)
    if s.size < 2 or s.shape != T.shape:
        raise ValidationError("profile needs at least two matching distance/temperature samples")
    rise = T_source - T_ambient
    if rise == 0:
        raise ValidationError("heater and ambient temperatures are equal; no boundary layer")
    excess = (T - T_ambient) / rise - (1.0 - fraction)
    below = np.flatnonzero(excess <= 0)
    if below.size == 0:
        return float(s[-1]), False
    k = int(below[0])
    if k == 0:
        return float(s[0]), True
    t = excess[k - 1] / (excess[k - 1] - excess[k])
    return float(s[k - 1] + t * (s[k] - s[k - 1])), True


def boundary_layer_thickness(solution, geometry=None, direction: str = "horizontal") -> BoundaryLayerResult:
    """Boundary-layer thickness along a straight path out of the heater.

    ``horizontal`` starts at the heater's right edge and runs along the heater
    row to the side wall; ``up``/``down`` start at the heater centre and run to
    the top/bottom wall.  The walls sit at ambient temperature, so the
    threshold is always met by the wall node; when it is met only in the last
    cell, the layer is clipped by the wall and flagged ``exceeds_cavity``.
    """
    if direction not in DIRECTIONS:
        raise ValidationError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    m = solution.mesh
    if m.heater_row is None:
        raise GeometryError("boundary layer needs a sensor geometry with a heater strip")
    jh, (i0, i1) = m.heater_row, m.heater_cols
    x, y, T = m.x, m.y, solution.T
    if direction == "horizontal":
        s, prof, start = x[i1:] - x[i1], T[jh, i1:], (x[i1], y[jh])
    else:
        ic = (i0 + i1) // 2
        col = T[:, ic]
        if direction == "up":
            s, prof = y[jh:] - y[jh], col[jh:]
        else:
            s, prof = y[jh] - y[: jh + 1][::-1], col[: jh + 1][::-1]
        start = (x[ic], y[jh])
    threshold = m.T_ambient + (1.0 - FRACTION) * (m.T_heater - m.T_ambient)
    delta, reached = profile_crossing(s, prof, m.T_heater, m.T_ambient)
    clipped = (not reached) or delta > s[-2]
    return BoundaryLayerResult(
        thickness=delta,
        direction=direction,
        start=(float(start[0]), float(start[1])),
        threshold=float(threshold),
        exceeds_cavity=bool(clipped),
        available=float(s[-1]),
    )
