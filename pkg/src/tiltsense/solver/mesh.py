"""Uniform vertex grid and node classification.

Nodes sit at ``x_i = i*dx``, ``y_j = j*dy`` (``i = 0..nx``, ``j = 0..ny``); each
node owns the control volume ``[x_i - dx/2, x_i + dx/2] x [y_j - dy/2, y_j + dy/2]``
clipped to the cavity.  Arrays are indexed ``[j, i]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import GeometryError, ValidationError
from .geometry import BenchmarkCavity, SensorGeometry

FLUID, WALL, HEATER, ADIABATIC = 0, 1, 2, 3

# direction -> (di, dj)
DIRECTIONS = {"E": (1, 0), "W": (-1, 0), "N": (0, 1), "S": (0, -1)}


@dataclass(frozen=True, eq=False)
class Mesh:
    nx: int
    ny: int
    width: float
    height: float
    kind: np.ndarray  # int8 node class
    T_fixed: np.ndarray  # Dirichlet temperature, nan where T is unknown
    T_ambient: float
    T_heater: float
    heater_row: int | None = None
    heater_cols: tuple[int, int] | None = None

    @property
    def dx(self):
        return self.width / self.nx

    @property
    def dy(self):
        return self.height / self.ny

    @property
    def x(self):
        return np.linspace(0.0, self.width, self.nx + 1)

    @property
    def y(self):
        return np.linspace(0.0, self.height, self.ny + 1)

    @property
    def shape(self):
        return self.ny + 1, self.nx + 1

    @property
    def delta_T(self):
        return self.T_heater - self.T_ambient

    @property
    def source_mask(self):
        """Nodes held at the heater (or hot-wall) temperature."""
        return (self.kind != FLUID) & (self.kind != ADIABATIC) & (self.T_fixed == self.T_heater)

    @property
    def sink_mask(self):
        return (self.kind == WALL) & ~self.source_mask

    def face_length(self, j, i, direction):
        """Length of the face between node (j, i) and its neighbour in ``direction``."""
        if direction in ("E", "W"):
            return self.dy * (0.5 if j in (0, self.ny) else 1.0)
        return self.dx * (0.5 if i in (0, self.nx) else 1.0)


def _check_grid(nx, ny):
    if int(nx) != nx or int(ny) != ny or nx < 16 or ny < 16:
        raise ValidationError(f"grid must be at least 16 x 16 cells, got {nx} x {ny}")


def build_mesh(geometry, nx: int, ny: int, T_ambient: float | None = None) -> Mesh:
    _check_grid(nx, ny)
    shape = (ny + 1, nx + 1)
    kind = np.full(shape, FLUID, dtype=np.int8)
    T_fixed = np.full(shape, np.nan)

    if isinstance(geometry, BenchmarkCavity):
        kind[0, :] = kind[-1, :] = ADIABATIC
        kind[:, 0] = kind[:, -1] = WALL
        T_fixed[:, 0] = geometry.hot_temperature
        T_fixed[:, -1] = geometry.cold_temperature
        return Mesh(
            nx, ny, geometry.side, geometry.side, kind, T_fixed,
            T_ambient=geometry.cold_temperature, T_heater=geometry.hot_temperature,
        )

    if not isinstance(geometry, SensorGeometry):
        raise TypeError(f"unsupported geometry {type(geometry).__name__}")
    if T_ambient is None:
        raise ValidationError("sensor geometry needs an ambient temperature")
    W, H = geometry.cavity_width, geometry.cavity_height
    kind[0, :] = kind[-1, :] = kind[:, 0] = kind[:, -1] = WALL
    T_fixed[kind == WALL] = T_ambient

    dx = W / nx
    jh = int(round(0.5 * ny))
    x = np.linspace(0.0, W, nx + 1)
    off = np.abs(x - 0.5 * W)
    cols = np.flatnonzero(off <= 0.5 * geometry.heater_width + 1e-9 * W)
    if cols.size == 0:
        cols = np.flatnonzero(off <= 0.5 * dx + 1e-9 * W)
    i0, i1 = int(cols[0]), int(cols[-1])
    if i0 < 2 or i1 > nx - 2 or jh < 2 or jh > ny - 2:
        raise GeometryError("heater strip touches the cavity walls on this grid; refine the grid")
    kind[jh, i0 : i1 + 1] = HEATER
    T_fixed[jh, i0 : i1 + 1] = geometry.heater_temperature

    for sign in (-1, 1):
        a, b = detector_span(geometry, sign)
        if a <= x[i1] if sign > 0 else b >= x[i0]:
            raise GeometryError("detector footprint overlaps the heater on this grid")
    return Mesh(
        nx, ny, W, H, kind, T_fixed,
        T_ambient=float(T_ambient), T_heater=float(geometry.heater_temperature),
        heater_row=jh, heater_cols=(i0, i1),
    )


def detector_span(geometry: SensorGeometry, sign: int):
    c = 0.5 * geometry.cavity_width + sign * geometry.detector_offset
    return c - 0.5 * geometry.detector_width, c + 0.5 * geometry.detector_width


def strip_average(mesh: Mesh, field: np.ndarray, a: float, b: float, y: float) -> float:
    """Mean of the bilinear interpolant of ``field`` over ``[a, b]`` at height ``y``.

    At fixed ``y`` the interpolant is piecewise linear in ``x`` with breaks at
    the grid lines, so the trapezoid rule over those breaks is exact.
    """
    x, ys = mesh.x, mesh.y
    if not (0.0 <= a < b <= mesh.width) or not (0.0 <= y <= mesh.height):
        raise GeometryError(f"detector footprint [{a:g}, {b:g}] m at y={y:g} m lies outside the grid")
    j = min(int(np.searchsorted(ys, y, side="right")) - 1, mesh.ny - 1)
    t = (y - ys[j]) / (ys[j + 1] - ys[j])
    row = (1.0 - t) * field[j] + t * field[j + 1]
    pts = np.concatenate(([a], x[(x > a) & (x < b)], [b]))
    vals = np.interp(pts, x, row)
    return float(np.sum(0.5 * (vals[1:] + vals[:-1]) * np.diff(pts)) / (b - a))


def detector_temperatures(mesh: Mesh, geometry: SensorGeometry, T: np.ndarray):
    """Footprint-averaged temperatures of the (-d, +d) detector pair."""
    y = mesh.heater_row * mesh.dy
    return tuple(strip_average(mesh, T, *detector_span(geometry, s), y) for s in (-1, 1))
