"""Dimensionless groups, the A sensitivity factor, heat-flux laws and regime labels.

``surface_area`` is the heat-exchange area of the flux laws; it is never
confused with the sensor sensitivity, which lives in :mod:`tiltsense.analysis`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .fluids.properties import FluidState

RE_LAMINAR_MAX = 2000.0
RE_TURBULENT_MIN = 3000.0
RA_TURBULENT = 47000.0

STANDARD_GRAVITY = 9.81
HEATER_WIDTH = 70e-6  # default characteristic length [m]


@dataclass(frozen=True)
class OperatingPoint:
    fluid: FluidState
    length: float = HEATER_WIDTH
    delta_T: float = 0.0
    gravity: float = STANDARD_GRAVITY
    mean_speed: float | None = None
    convection_coefficient: float | None = None

    def __post_init__(self):
        if not (self.length > 0 and math.isfinite(self.length)):
            raise ValidationError(f"characteristic length must be > 0, got {self.length!r}")
        if not (self.gravity >= 0 and math.isfinite(self.gravity)):
            raise ValidationError(f"gravity must be >= 0, got {self.gravity!r}")
        if not math.isfinite(self.delta_T):
            raise ValidationError("delta_T must be finite")


def reynolds(point: OperatingPoint) -> float:
    if point.mean_speed is None:
        raise ValidationError("reynolds: the operating point has no mean_speed")
    f = point.fluid
    return f.density * point.mean_speed * point.length / f.viscosity


def nusselt(point: OperatingPoint) -> float:
    if point.convection_coefficient is None:
        raise ValidationError("nusselt: the operating point has no convection_coefficient")
    return point.convection_coefficient * point.length / point.fluid.conductivity


def prandtl(fluid: FluidState) -> float:
    return fluid.viscosity * fluid.specific_heat / fluid.conductivity


def grashof(point: OperatingPoint) -> float:
    f = point.fluid
    return f.density**2 * point.gravity * f.expansion * point.delta_T * point.length**3 / f.viscosity**2


def a_factor(fluid: FluidState) -> float:
    """rho^2 beta Cp / (mu lambda), in raw SI units; only ratios are meaningful."""
    return fluid.density**2 * fluid.expansion * fluid.specific_heat / (fluid.viscosity * fluid.conductivity)


def rayleigh(point: OperatingPoint) -> float:
    return point.gravity * point.length**3 * point.delta_T * a_factor(point.fluid)


def classify_velocity_regime(Re: float) -> str:
    if not Re >= 0:
        raise ValidationError(f"Reynolds number must be >= 0, got {Re!r}")
    if Re < RE_LAMINAR_MAX:
        return "laminar"
    if Re <= RE_TURBULENT_MIN:
        return "intermediate"
    return "turbulent"


def classify_thermal_regime(Ra: float) -> str:
    if not Ra >= 0:
        raise ValidationError(f"Rayleigh number must be >= 0, got {Ra!r}")
    return "laminar_or_conductive" if Ra <= RA_TURBULENT else "turbulent"


def conductive_flux(conductivity, boundary_layer, surface_area, T_wall, T_ref):
    """Heat flow [W] conducted across a layer of thickness ``boundary_layer``."""
    if not boundary_layer > 0:
        raise ValidationError(f"boundary-layer thickness must be > 0, got {boundary_layer!r}")
    if not surface_area > 0:
        raise ValidationError(f"surface area must be > 0, got {surface_area!r}")
    return conductivity / boundary_layer * surface_area * (T_wall - T_ref)


def convective_flux(h, surface_area, T_wall, T_ref):
    if not surface_area > 0:
        raise ValidationError(f"surface area must be > 0, got {surface_area!r}")
    return h * surface_area * (T_wall - T_ref)


@dataclass(frozen=True)
class DimensionlessReport:
    Re: float | None
    Nu: float | None
    Pr: float
    Gr: float
    Ra: float
    A: float
    regime_velocity: str
    regime_thermal: str

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def report(point: OperatingPoint) -> DimensionlessReport:
    Re = reynolds(point) if point.mean_speed is not None else None
    Nu = nusselt(point) if point.convection_coefficient is not None else None
    Ra = rayleigh(point)
    return DimensionlessReport(
        Re=Re,
        Nu=Nu,
        Pr=prandtl(point.fluid),
        Gr=grashof(point),
        Ra=Ra,
        A=a_factor(point.fluid),
        regime_velocity="undefined" if Re is None else classify_velocity_regime(abs(Re)),
        regime_thermal=classify_thermal_regime(abs(Ra)),
    )


DEVICE_AMBIENT = 293.15
DEVICE_HEATER_RISE = 58.0


def device_operating_point(spec, delta_T: float = DEVICE_HEATER_RISE, length: float = HEATER_WIDTH,
                           T_ambient: float = DEVICE_AMBIENT, gravity: float = STANDARD_GRAVITY) -> OperatingPoint:
    """Operating point of the inclinometer: properties at the film temperature of the heater rise."""
    from .fluids.properties import evaluate, film_temperature

    state = evaluate(spec, film_temperature(T_ambient + delta_T, T_ambient))
    return OperatingPoint(state, length=length, delta_T=delta_T, gravity=gravity)
