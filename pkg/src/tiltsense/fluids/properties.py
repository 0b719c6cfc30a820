"""Temperature-dependent thermophysical property models.

Every property of a fluid is a :class:`PropertyModel` of one of three kinds:

* ``constant``  -- a single value,
* ``power_law`` -- ``p(T) = p_ref * (T / T_ref) ** exponent``,
* ``table``     -- tabulated ``(T, value)`` pairs, interpolated linearly in
  ``log(value)`` against ``log(T)`` so that each segment is itself a power law.

Models never extrapolate; the owning :class:`FluidSpec` carries the validity
range and refuses temperatures outside it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

import numpy as np

from ..errors import PropertyRangeError, ValidationError

KINDS = ("constant", "power_law", "table")

# attribute name -> (human label, SI unit)
PROPERTIES = {
    "density": ("density", "kg/m^3"),
    "viscosity": ("dynamic viscosity", "Pa*s"),
    "conductivity": ("thermal conductivity", "W/(m*K)"),
    "specific_heat": ("specific heat", "J/(kg*K)"),
    "expansion": ("expansion coefficient", "1/K"),
}


@dataclass(frozen=True)
class PropertyModel:
    kind: str
    value: float | None = None
    p_ref: float | None = None
    T_ref: float | None = None
    exponent: float | None = None
    temperatures: tuple[float, ...] = ()
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown property kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "constant":
            _require_positive("value", self.value)
        elif self.kind == "power_law":
            _require_positive("p_ref", self.p_ref)
            _require_positive("T_ref", self.T_ref)
            if self.exponent is None or not math.isfinite(self.exponent):
                raise ValidationError("power_law model needs a finite exponent")
        else:
            T = tuple(float(t) for t in self.temperatures)
            v = tuple(float(x) for x in self.values)
            object.__setattr__(self, "temperatures", T)
            object.__setattr__(self, "values", v)
            if len(T) < 2 or len(T) != len(v):
                raise ValidationError("table model needs >= 2 (T, value) pairs of equal length")
            if any(b <= a for a, b in zip(T, T[1:])):
                raise ValidationError("table temperatures must be strictly increasing")
            if min(T) <= 0 or min(v) <= 0 or not all(map(math.isfinite, T + v)):
                raise ValidationError("table temperatures and values must be positive and finite")

    @classmethod
    def constant(cls, value):
        return cls("constant", value=float(value))

    @classmethod
    def power_law(cls, p_ref, T_ref, exponent):
        return cls("power_law", p_ref=float(p_ref), T_ref=float(T_ref), exponent=float(exponent))

    @classmethod
    def table(cls, temperatures, values):
        return cls("table", temperatures=tuple(temperatures), values=tuple(values))

    @property
    def span(self):
        """Temperature span the model itself can represent (tables only)."""
        if self.kind == "table":
            return self.temperatures[0], self.temperatures[-1]
        return 0.0, math.inf

    def __call__(self, T):
        scalar = np.ndim(T) == 0
        T = np.asarray(T, dtype=float)
        if self.kind == "constant":
            out = np.full_like(T, self.value)
        elif self.kind == "power_law":
            # exact at T_ref: (T_ref/T_ref)**x == 1.0
            out = self.p_ref * (T / self.T_ref) ** self.exponent
        else:
            lo, hi = self.span
            if np.any(T < lo) or np.any(T > hi):
                raise PropertyRangeError("table", float(np.min(T) if np.any(T < lo) else np.max(T)), lo, hi)
            out = np.exp(np.interp(np.log(T), np.log(self.temperatures), np.log(self.values)))
            # hit knots exactly despite the exp/log round trip
            knots = np.searchsorted(self.temperatures, T)
            exact = (knots < len(self.temperatures)) & (
                np.take(self.temperatures, np.minimum(knots, len(self.temperatures) - 1)) == T
            )
            if np.any(exact):
                out = np.where(exact, np.take(self.values, np.minimum(knots, len(self.values) - 1)), out)
        return float(out) if scalar else out

    def scaled(self, factor):
        """Same model with every value multiplied by ``factor``."""
        factor = float(factor)
        if self.kind == "constant":
            return replace(self, value=self.value * factor)
        if self.kind == "power_law":
            return replace(self, p_ref=self.p_ref * factor)
        return replace(self, values=tuple(v * factor for v in self.values))


def _require_positive(name, x):
    if x is None or not math.isfinite(x) or x <= 0:
        raise ValidationError(f"{name} must be positive and finite, got {x!r}")


@dataclass(frozen=True)
class FluidState:
    """Property values of one fluid at one temperature (SI units)."""

    T: float
    density: float
    viscosity: float
    conductivity: float
    specific_heat: float
    expansion: float

    def __post_init__(self):
        for name in PROPERTIES:
            _require_positive(name, getattr(self, name))

    @property
    def kinematic_viscosity(self):
        return self.viscosity / self.density

    @property
    def diffusivity(self):
        return self.conductivity / (self.density * self.specific_heat)

    def replace(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class FluidSpec:
    """A named fluid with one :class:`PropertyModel` per property.

    With ``ideal_gas`` set, the expansion coefficient must equal ``1/T``.
    """

    name: str
    phase: str
    density: PropertyModel
    viscosity: PropertyModel
    conductivity: PropertyModel
    specific_heat: PropertyModel
    expansion: PropertyModel
    validity: tuple[float, float]
    source: str = ""
    ideal_gas: bool = False
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.phase not in ("gas", "liquid"):
            raise ValidationError(f"{self.name}: phase must be 'gas' or 'liquid', got {self.phase!r}")
        if self.ideal_gas and self.phase != "gas":
            raise ValidationError(f"{self.name}: ideal_gas flag is only valid for phase 'gas'")
        lo, hi = (float(v) for v in self.validity)
        object.__setattr__(self, "validity", (lo, hi))
        if not (0 < lo < hi and math.isfinite(hi)):
            raise ValidationError(f"{self.name}: invalid validity range [{lo}, {hi}]")
        for prop in PROPERTIES:
            model = getattr(self, prop)
            if not isinstance(model, PropertyModel):
                raise ValidationError(f"{self.name}: {prop} must be a PropertyModel")
            a, b = model.span
            if a > lo or b < hi:
                raise ValidationError(
                    f"{self.name}: {prop} table covers [{a:g}, {b:g}] K, "
                    f"narrower than validity range [{lo:g}, {hi:g}] K"
                )
        if self.check:
            self._check_invariants()

    def _check_invariants(self):
        lo, hi = self.validity
        grid = np.append(np.arange(lo, hi, 1.0), hi)
        for prop in PROPERTIES:
            vals = getattr(self, prop)(grid)
            if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
                raise ValidationError(f"{self.name}: {prop} is not positive and finite on [{lo:g}, {hi:g}] K")
        if self.ideal_gas:
            err = np.max(np.abs(self.expansion(grid) * grid - 1.0))
            if err > 1e-9:
                raise ValidationError(f"{self.name}: ideal gas requires expansion = 1/T (max rel. error {err:.2e})")

    def with_property(self, prop, model):
        if prop not in PROPERTIES:
            raise ValidationError(f"unknown property {prop!r}")
        return replace(self, **{prop: model})

    def evaluate(self, T):
        return evaluate(self, T)


def evaluate(spec: FluidSpec, T: float) -> FluidState:
    """Evaluate all five properties of ``spec`` at temperature ``T`` [K]."""
    lo, hi = spec.validity
    T = float(T)
    values = {}
    for prop, (label, _) in PROPERTIES.items():
        if not lo <= T <= hi:
            raise PropertyRangeError(f"{spec.name} {label}", T, lo, hi)
        values[prop] = getattr(spec, prop)(T)
    return FluidState(T=T, **values)


def ideal_gas_expansion(T_ref: float) -> PropertyModel:
    """``beta = 1/T`` expressed as a power law."""
    return PropertyModel.power_law(1.0 / T_ref, T_ref, -1.0)


def film_temperature(T_heater, T_ambient):
    return 0.5 * (T_heater + T_ambient)


class PowerLawFit(NamedTuple):
    p_ref: float
    T_ref: float
    exponent: float
    residual: float

    def model(self):
        return PropertyModel.power_law(self.p_ref, self.T_ref, self.exponent)


def fit_power_law(samples: Sequence[tuple[float, float]]) -> PowerLawFit:
    """Least-squares fit of ``log(value)`` against ``log(T)``.

    ``T_ref`` is the first sample temperature and ``residual`` is the RMS of
    the log-space residuals.
    """
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or len(data) < 2:
        raise ValidationError("fit_power_law needs at least two (T, value) samples")
    if not np.all(np.isfinite(data)) or np.any(data <= 0):
        raise ValidationError("fit_power_law needs positive, finite temperatures and values")
    lt, lv = np.log(data[:, 0]), np.log(data[:, 1])
    dt = lt - lt.mean()
    sxx = np.dot(dt, dt)
    if sxx == 0:
        raise ValidationError("fit_power_law needs at least two distinct temperatures")
    x = np.dot(dt, lv - lv.mean()) / sxx
    intercept = lv.mean() - x * lt.mean()
    resid = lv - (intercept + x * lt)
    T_ref = float(data[0, 0])
    p_ref = float(np.exp(intercept + x * lt[0]))
    return PowerLawFit(p_ref, T_ref, float(x), float(np.sqrt(np.mean(resid**2))))
