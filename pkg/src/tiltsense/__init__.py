"""Simulation and analysis of convective thermal inclinometers."""

__version__ = "0.1.0"
