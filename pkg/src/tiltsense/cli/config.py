"""Run configuration: a TOML file in the same family as the fluid database.

Layout (every key optional)::

    experiment = "sweep"       # props | dimless | solve | sweep | transient | blayer | bench
    fluid = "air"              # or an inline [fluid] table in fluid-database record form
    output_dir = "results"
    seed = 0
    fluids_db = "my_fluids.toml"

    [geometry]                 # SensorGeometry fields; tilt in degrees
    cavity_width = 9e-4
    heater_temperature = 351.15
    tilt_deg = 30.0

    [solver]                   # SolverConfig fields
    nx = 32

    [sweep]
    angles_deg = [-30.0, 0.0, 30.0]

    [dimless]
    temperature = 300.0        # property evaluation temperature, K
    length = 7e-5
    delta_T = 58.0

    [blayer]
    direction = "horizontal"

    [bench]
    rayleigh = [1e3, 1e4]
    prandtl = 0.71
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import tomli
import tomli_w

from ..analysis.boundary_layer import DIRECTIONS
from ..errors import ConfigError, ParseError, ValidationError
from ..fluids.database import fluid_to_dict, get_fluid, parse_fluid_record, shipped_fluids
from ..fluids.properties import FluidSpec
from ..solver.geometry import SensorGeometry
from ..solver.solution import SolverConfig

EXPERIMENTS = ("props", "dimless", "solve", "sweep", "transient", "blayer", "bench")
DEFAULT_ANGLES_DEG = tuple(float(a) for a in np.linspace(-30.0, 30.0, 9))

_GEOMETRY_KEYS = {
    "cavity_width", "cavity_height", "cavity_depth", "heater_width", "heater_temperature",
    "detector_offset", "detector_width", "gravity", "volume",
}
_SOLVER_KEYS = {f.name for f in dataclasses.fields(SolverConfig)}
_SECTIONS = {
    "sweep": {"angles_deg"},
    "dimless": {"temperature", "length", "delta_T"},
    "blayer": {"direction"},
    "bench": {"rayleigh", "prandtl"},
}
_TOP = {"experiment", "fluid", "output_dir", "seed", "fluids_db", "geometry", "solver", *_SECTIONS}


@dataclass(frozen=True)
class RunConfig:
    experiment: str = "solve"
    fluid: str | FluidSpec = "air"
    geometry: SensorGeometry = field(default_factory=SensorGeometry)
    tilt_deg: float = 0.0
    solver: SolverConfig = field(default_factory=SolverConfig)
    output_dir: Path = Path("results")
    seed: int = 0
    fluids_db: Path | None = None
    angles_deg: tuple = DEFAULT_ANGLES_DEG
    property_temperature: float = 300.0
    length: float = 70e-6
    delta_T: float | None = None
    direction: str = "horizontal"
    bench_rayleigh: tuple = (1e3, 1e4)
    bench_prandtl: float = 0.71

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}")
        if not math.isfinite(self.tilt_deg):
            raise ConfigError("geometry.tilt_deg must be finite")
        if int(self.seed) != self.seed:
            raise ConfigError(f"seed must be an integer, got {self.seed!r}")
        if len(self.angles_deg) < 3 or not all(math.isfinite(a) for a in self.angles_deg):
            raise ConfigError("sweep.angles_deg needs at least 3 finite angles")
        if not self.property_temperature > 0:
            raise ConfigError(f"dimless.temperature must be > 0 K, got {self.property_temperature!r}")
        if not self.length > 0:
            raise ConfigError(f"dimless.length must be > 0 m, got {self.length!r}")
        if self.direction not in DIRECTIONS:
            raise ConfigError(f"blayer.direction must be one of {DIRECTIONS}, got {self.direction!r}")
        if not self.bench_rayleigh or any(not r > 0 for r in self.bench_rayleigh):
            raise ConfigError("bench.rayleigh must be a non-empty list of positive numbers")
        if not self.bench_prandtl > 0:
            raise ConfigError(f"bench.prandtl must be > 0, got {self.bench_prandtl!r}")
        object.__setattr__(self, "geometry", self.geometry.tilted(math.radians(self.tilt_deg)))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        object.__setattr__(self, "angles_deg", tuple(float(a) for a in self.angles_deg))
        object.__setattr__(self, "bench_rayleigh", tuple(float(r) for r in self.bench_rayleigh))

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    @property
    def fluid_name(self):
        return self.fluid.name if isinstance(self.fluid, FluidSpec) else self.fluid

    def fluid_spec(self) -> FluidSpec:
        if isinstance(self.fluid, FluidSpec):
            return self.fluid
        return get_fluid(self.fluid, shipped_fluids(self.fluids_db))

    def digest(self) -> str:
        from ..solver.solution import config_hash

        return config_hash(to_dict(self))


def _section(doc, name, allowed):
    sec = doc.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"[{name}] must be a table")
    unknown = set(sec) - allowed
    if unknown:
        raise ConfigError(f"[{name}]: unknown key(s) {sorted(unknown)}")
    return sec


def _build(name, ctor, kwargs):
    try:
        return ctor(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"[{name}]: {exc}") from None
    except ValidationError as exc:
        field_names = [k for k in kwargs if k in str(exc)]
        where = f"{name}.{field_names[0]}" if field_names else name
        raise ConfigError(f"{where}: {exc}") from None


def run_config_from_dict(doc: dict) -> RunConfig:
    unknown = set(doc) - _TOP
    if unknown:
        raise ConfigError(f"unknown top-level key(s) {sorted(unknown)}")
    kw = {}
    for key in ("experiment", "output_dir", "seed", "fluids_db"):
        if key in doc:
            kw[key] = doc[key]
    if "fluids_db" in kw:
        kw["fluids_db"] = Path(kw["fluids_db"])
    if "fluid" in doc:
        fl = doc["fluid"]
        if isinstance(fl, dict):
            kw["fluid"] = parse_fluid_record(fl, 0)
        elif isinstance(fl, str):
            kw["fluid"] = fl
        else:
            raise ConfigError("fluid must be a name or a [fluid] table")

    geo = dict(_section(doc, "geometry", _GEOMETRY_KEYS | {"tilt_deg"}))
    if "tilt_deg" in geo:
        kw["tilt_deg"] = float(geo.pop("tilt_deg"))
    kw["geometry"] = _build("geometry", SensorGeometry, geo)
    kw["solver"] = _build("solver", SolverConfig, dict(_section(doc, "solver", _SOLVER_KEYS)))

    sweep = _section(doc, "sweep", _SECTIONS["sweep"])
    if "angles_deg" in sweep:
        kw["angles_deg"] = tuple(sweep["angles_deg"])
    dim = _section(doc, "dimless", _SECTIONS["dimless"])
    for src, dst in (("temperature", "property_temperature"), ("length", "length"), ("delta_T", "delta_T")):
        if src in dim:
            kw[dst] = dim[src]
    bl = _section(doc, "blayer", _SECTIONS["blayer"])
    if "direction" in bl:
        kw["direction"] = bl["direction"]
    bench = _section(doc, "bench", _SECTIONS["bench"])
    if "rayleigh" in bench:
        r = bench["rayleigh"]
        kw["bench_rayleigh"] = tuple(r) if isinstance(r, list) else (r,)
    if "prandtl" in bench:
        kw["bench_prandtl"] = bench["prandtl"]
    try:
        return RunConfig(**kw)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def load_run_config(path) -> RunConfig:
    """Parse, validate and default-fill a run configuration file."""
    text = Path(path).read_text(encoding="utf-8")
    return loads_run_config(text, str(path))


def loads_run_config(text: str, where: str = "config") -> RunConfig:
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ParseError(f"{where}: {exc}") from None
    try:
        return run_config_from_dict(doc)
    except ValidationError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def to_dict(cfg: RunConfig) -> dict:
    g = cfg.geometry
    geometry = {k: getattr(g, k) for k in sorted(_GEOMETRY_KEYS)}
    geometry["tilt_deg"] = cfg.tilt_deg
    solver = {k: v for k, v in dataclasses.asdict(cfg.solver).items() if v is not None}
    doc = {
        "experiment": cfg.experiment,
        "fluid": fluid_to_dict(cfg.fluid) if isinstance(cfg.fluid, FluidSpec) else cfg.fluid,
        "output_dir": str(cfg.output_dir),
        "seed": int(cfg.seed),
        "geometry": geometry,
        "solver": solver,
        "sweep": {"angles_deg": list(cfg.angles_deg)},
        "dimless": {"temperature": cfg.property_temperature, "length": cfg.length},
        "blayer": {"direction": cfg.direction},
        "bench": {"rayleigh": list(cfg.bench_rayleigh), "prandtl": cfg.bench_prandtl},
    }
    if cfg.delta_T is not None:
        doc["dimless"]["delta_T"] = cfg.delta_T
    if cfg.fluids_db is not None:
        doc["fluids_db"] = str(cfg.fluids_db)
    return doc


def dump_run_config(cfg: RunConfig) -> str:
    return tomli_w.dumps(to_dict(cfg))
