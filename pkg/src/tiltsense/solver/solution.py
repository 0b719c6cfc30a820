"""Solver configuration and result containers."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import ConfigError
from ..fluids.properties import FluidState

PROPERTY_MODES = ("constant", "temperature-dependent-mu")


@dataclass(frozen=True)
class SolverConfig:
    nx: int = 32
    ny: int = 32
    ambient_temperature: float = 293.15
    tolerance: float = 1e-8
    max_iterations: int = 40
    # Newton update damping per block; 1.0 = full Newton step
    relaxation_vorticity: float = 1.0
    relaxation_energy: float = 1.0
    properties: str = "constant"
    dt: float | None = None
    end_time: float | None = None
    snapshot_every: int = 0
    cfl_safety: float = 0.4
    allow_turbulent: bool = False

    def __post_init__(self):
        if int(self.nx) != self.nx or int(self.ny) != self.ny or self.nx < 16 or self.ny < 16:
            raise ConfigError(f"grid must be at least 16 x 16 cells, got nx={self.nx}, ny={self.ny}")
        if not (self.tolerance > 0 and math.isfinite(self.tolerance)):
            raise ConfigError(f"tolerance must be > 0, got {self.tolerance!r}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be a positive integer, got {self.max_iterations!r}")
        for name in ("relaxation_vorticity", "relaxation_energy"):
            if not 0 < getattr(self, name) <= 1:
                raise ConfigError(f"{name} must lie in (0, 1], got {getattr(self, name)!r}")
        if self.properties not in PROPERTY_MODES:
            raise ConfigError(f"properties must be one of {PROPERTY_MODES}, got {self.properties!r}")
        if self.dt is not None and not self.dt > 0:
            raise ConfigError(f"dt must be > 0, got {self.dt!r}")
        if self.end_time is not None and not self.end_time > 0:
            raise ConfigError(f"end_time must be > 0, got {self.end_time!r}")
        if not 0 < self.cfl_safety <= 1:
            raise ConfigError(f"cfl_safety must lie in (0, 1], got {self.cfl_safety!r}")
        if not self.ambient_temperature > 0:
            raise ConfigError(f"ambient_temperature must be > 0 K, got {self.ambient_temperature!r}")

    def replace(self, **changes):
        from dataclasses import replace

        return replace(self, **changes)

    def digest(self):
        return config_hash(asdict(self))


def config_hash(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, default=repr, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Solution:
    """Converged (or transient snapshot) fields on the full node grid, indexed ``[j, i]``."""

    mesh: object
    geometry: object
    fluid: FluidState
    config: SolverConfig
    T: np.ndarray
    u: np.ndarray
    v: np.ndarray
    psi: np.ndarray
    omega: np.ndarray
    residuals: tuple = ()
    iterations: int = 0
    converged: bool = True
    wall_time: float = 0.0
    time: float | None = None
    psi_island: float = 0.0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("T", "u", "v", "psi", "omega"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def x(self):
        return self.mesh.x

    @property
    def y(self):
        return self.mesh.y

    @property
    def delta_T(self):
        return self.mesh.delta_T

    @property
    def final_residual(self):
        return self.residuals[-1] if self.residuals else math.nan

    def max_speed(self):
        return float(np.max(np.hypot(self.u, self.v)))
