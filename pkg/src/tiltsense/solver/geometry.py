"""Cavity geometries: the inclinometer cross-section and the side-heated benchmark box."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from ..dimensionless import STANDARD_GRAVITY
from ..errors import ValidationError

CAVITY_VOLUME = 5e-9  # m^3
CAVITY_WIDTH = 900e-6
HEATER_WIDTH = 70e-6
DETECTOR_OFFSET = 200e-6
DETECTOR_WIDTH = 7e-6
AMBIENT = 293.15
HEATER_RISE = 58.0


def gravity_vector(theta: float, g: float = STANDARD_GRAVITY) -> tuple[float, float]:
    """Gravity in the cavity frame; x is the sensitive axis, y the chip normal."""
    return g * math.sin(theta), -g * math.cos(theta)


@dataclass(frozen=True)
class SensorGeometry:
    """2D cross-section of the sensor: a closed W x H cavity, heater strip at its centre.

    ``cavity_height`` defaults to the value that makes
    ``cavity_width * cavity_height * cavity_depth`` equal the nominal 5 mm^3
    cavity volume, with the out-of-plane depth taken equal to the width.
    """

    cavity_width: float = CAVITY_WIDTH
    cavity_height: float | None = None
    cavity_depth: float | None = None
    heater_width: float = HEATER_WIDTH
    heater_temperature: float = AMBIENT + HEATER_RISE
    detector_offset: float = DETECTOR_OFFSET
    detector_width: float = DETECTOR_WIDTH
    tilt_angle: float = 0.0
    gravity: float = STANDARD_GRAVITY
    volume: float = field(default=CAVITY_VOLUME, repr=False)

    def __post_init__(self):
        W = self.cavity_width
        if not (W > 0 and math.isfinite(W)):
            raise ValidationError(f"cavity_width must be > 0, got {W!r}")
        depth = W if self.cavity_depth is None else self.cavity_depth
        if not depth > 0:
            raise ValidationError(f"cavity_depth must be > 0, got {depth!r}")
        object.__setattr__(self, "cavity_depth", float(depth))
        if self.cavity_height is None:
            if not self.volume > 0:
                raise ValidationError(f"volume must be > 0, got {self.volume!r}")
            object.__setattr__(self, "cavity_height", self.volume / (W * depth))
        H = self.cavity_height
        if not (H > 0 and math.isfinite(H)):
            raise ValidationError(f"cavity_height must be > 0, got {H!r}")
        if not 0 < self.heater_width < W:
            raise ValidationError(f"heater_width must lie in (0, cavity_width), got {self.heater_width!r}")
        d, wd = self.detector_offset, self.detector_width
        if not wd > 0:
            raise ValidationError(f"detector_width must be > 0, got {wd!r}")
        if not (d - wd / 2 > 0 and d + wd / 2 < W / 2):
            raise ValidationError(
                f"detectors at +/-{d:g} m with width {wd:g} m do not fit inside the cavity half-width {W / 2:g} m"
            )
        if not self.heater_width / 2 < d - wd / 2:
            raise ValidationError(f"heater_width {self.heater_width:g} m overlaps the detectors at +/-{d:g} m")
        if not (self.gravity >= 0 and math.isfinite(self.gravity)):
            raise ValidationError(f"gravity must be >= 0, got {self.gravity!r}")
        if not (self.heater_temperature > 0 and math.isfinite(self.tilt_angle)):
            raise ValidationError("heater_temperature must be > 0 and tilt_angle finite")

    @property
    def gravity_components(self):
        return gravity_vector(self.tilt_angle, self.gravity)

    def tilted(self, theta):
        return replace(self, tilt_angle=float(theta))

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class BenchmarkCavity:
    """Square cavity, hot left wall, cold right wall, adiabatic top and bottom."""

    side: float = 1.0
    hot_temperature: float = 2.0
    cold_temperature: float = 1.0
    gravity: float = STANDARD_GRAVITY
    tilt_angle: float = 0.0

    def __post_init__(self):
        if not self.side > 0:
            raise ValidationError(f"side must be > 0, got {self.side!r}")
        if not self.hot_temperature > self.cold_temperature > 0:
            raise ValidationError("need hot_temperature > cold_temperature > 0")
        if not self.gravity >= 0:
            raise ValidationError(f"gravity must be >= 0, got {self.gravity!r}")

    cavity_width = property(lambda self: self.side)
    cavity_height = property(lambda self: self.side)
    heater_temperature = property(lambda self: self.hot_temperature)

    @property
    def gravity_components(self):
        return gravity_vector(self.tilt_angle, self.gravity)

    def replace(self, **changes):
        return replace(self, **changes)
