"""2D Boussinesq natural-convection solver for the inclinometer cavity."""
from .diagnostics import EnergyBalance, energy_balance, fields_csv, write_fields_csv
from .geometry import BenchmarkCavity, SensorGeometry, gravity_vector
from .mesh import Mesh, build_mesh, detector_temperatures, strip_average
from .solution import Solution, SolverConfig
from .steady import benchmark_case, conduction_solution, solve_steady, wall_nusselt
from .transient import TransientResult, max_stable_dt, solve_transient

__all__ = [
    "BenchmarkCavity",
    "EnergyBalance",
    "Mesh",
    "SensorGeometry",
    "Solution",
    "SolverConfig",
    "TransientResult",
    "benchmark_case",
    "build_mesh",
    "conduction_solution",
    "detector_temperatures",
    "energy_balance",
    "fields_csv",
    "gravity_vector",
    "max_stable_dt",
    "solve_steady",
    "solve_transient",
    "strip_average",
    "wall_nusselt",
    "write_fields_csv",
]
