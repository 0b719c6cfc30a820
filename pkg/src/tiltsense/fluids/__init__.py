"""Fluid property models and the shipped fluid database."""
from .database import (
    default_database_path,
    dump_fluid_database,
    get_fluid,
    load_fluid_database,
    shipped_fluids,
)
from .properties import (
    PROPERTIES,
    FluidSpec,
    FluidState,
    PowerLawFit,
    PropertyModel,
    evaluate,
    film_temperature,
    fit_power_law,
    ideal_gas_expansion,
)

__all__ = [
    "PROPERTIES",
    "FluidSpec",
    "FluidState",
    "PowerLawFit",
    "PropertyModel",
    "default_database_path",
    "dump_fluid_database",
    "evaluate",
    "film_temperature",
    "fit_power_law",
    "get_fluid",
    "ideal_gas_expansion",
    "load_fluid_database",
    "shipped_fluids",
]
