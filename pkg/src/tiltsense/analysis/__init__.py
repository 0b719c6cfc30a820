"""Measured quantities from solver output: detector signal, sweeps, scaling probes, layers, response."""
from .boundary_layer import BoundaryLayerResult, boundary_layer_thickness, profile_crossing
from .response import ResponseTimeResult, fit_first_order
from .sensitivity import (
    RatioRow,
    ScalingResult,
    SweepResult,
    detector_delta_T,
    fit_sweep,
    loglog_slope,
    rayleigh_scaling_probe,
    sensitivity_ratio_table,
    tilt_sweep,
    viscosity_scaling_probe,
)

__all__ = [
    "BoundaryLayerResult",
    "RatioRow",
    "ResponseTimeResult",
    "ScalingResult",
    "SweepResult",
    "boundary_layer_thickness",
    "detector_delta_T",
    "fit_first_order",
    "fit_sweep",
    "loglog_slope",
    "profile_crossing",
    "rayleigh_scaling_probe",
    "sensitivity_ratio_table",
    "tilt_sweep",
    "viscosity_scaling_probe",
]
