"""Read and write the TOML fluid database.

Layout of one record::

    [[fluid]]
    name = "air"
    phase = "gas"            # gas | liquid
    ideal_gas = true         # optional, gases only; expansion defaults to 1/T
    validity_K = [250.0, 700.0]
    source = "citation"

    [fluid.viscosity]
    kind = "table"           # constant | power_law | table
    T = [250.0, 300.0]
    values = [1.596e-05, 1.846e-05]

Property blocks: ``density``, ``viscosity``, ``conductivity``,
``specific_heat``, ``expansion``.  Unknown keys are rejected.
"""
from __future__ import annotations

import functools
import os
import re
from importlib import resources
from pathlib import Path

import tomli
import tomli_w

from ..errors import ParseError, ValidationError
from .properties import PROPERTIES, FluidSpec, PropertyModel, ideal_gas_expansion

ENV_VAR = "TILTSENSE_FLUIDS"

_RECORD_KEYS = {"name", "phase", "ideal_gas", "validity_K", "source", *PROPERTIES}
_MODEL_KEYS = {
    "constant": {"kind", "value"},
    "power_law": {"kind", "p_ref", "T_ref", "exponent"},
    "table": {"kind", "T", "values"},
}


def _line_of(text, name):
    if not text or name is None:
        return None
    m = re.search(r'^\s*name\s*=\s*["\']' + re.escape(str(name)) + r'["\']', text, re.M)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _where(text, idx, name):
    line = _line_of(text, name)
    label = f"fluid #{idx + 1}" + (f" ({name})" if name else "")
    return f"{label}, line {line}" if line else label


def _number(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{path}: expected a number, got {value!r}")
    return float(value)


def _parse_model(block, path):
    if not isinstance(block, dict):
        raise ParseError(f"{path}: expected a table with a 'kind' key")
    kind = block.get("kind")
    if kind not in _MODEL_KEYS:
        raise ParseError(f"{path}.kind: expected one of {sorted(_MODEL_KEYS)}, got {kind!r}")
    unknown = set(block) - _MODEL_KEYS[kind]
    if unknown:
        raise ParseError(f"{path}: unknown key(s) {sorted(unknown)} for kind {kind!r}")
    missing = _MODEL_KEYS[kind] - set(block)
    if missing:
        raise ParseError(f"{path}: missing key(s) {sorted(missing)}")
    try:
        if kind == "constant":
            return PropertyModel.constant(_number(block["value"], f"{path}.value"))
        if kind == "power_law":
            return PropertyModel.power_law(
                _number(block["p_ref"], f"{path}.p_ref"),
                _number(block["T_ref"], f"{path}.T_ref"),
                _number(block["exponent"], f"{path}.exponent"),
            )
        T = [_number(t, f"{path}.T") for t in block["T"]]
        v = [_number(x, f"{path}.values") for x in block["values"]]
        return PropertyModel.table(T, v)
    except ParseError:
        raise
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from None


def parse_fluid_record(rec, idx=0, text=None) -> FluidSpec:
    name = rec.get("name") if isinstance(rec, dict) else None
    where = _where(text, idx, name)
    if not isinstance(rec, dict):
        raise ParseError(f"{where}: record must be a table")
    unknown = set(rec) - _RECORD_KEYS
    if unknown:
        raise ParseError(f"{where}: unknown key(s) {sorted(unknown)}")
    for key in ("name", "phase", "validity_K"):
        if key not in rec:
            raise ParseError(f"{where}: missing required key {key!r}")
    if not isinstance(name, str) or not name:
        raise ParseError(f"{where}: 'name' must be a non-empty string")
    validity = rec["validity_K"]
    if not isinstance(validity, list) or len(validity) != 2:
        raise ParseError(f"{where}.validity_K: expected [min, max]")
    validity = tuple(_number(v, f"{where}.validity_K") for v in validity)
    ideal = rec.get("ideal_gas", False)
    if not isinstance(ideal, bool):
        raise ParseError(f"{where}.ideal_gas: expected true or false")

    models = {}
    for prop in PROPERTIES:
        if prop in rec:
            models[prop] = _parse_model(rec[prop], f"{where}.{prop}")
        elif prop == "expansion" and ideal:
            models[prop] = ideal_gas_expansion(validity[0])
        else:
            raise ValidationError(f"{where}: fluid {name!r} is missing the {prop} property block")
    try:
        return FluidSpec(
            name=name,
            phase=rec["phase"],
            validity=validity,
            source=str(rec.get("source", "")),
            ideal_gas=ideal,
            **models,
        )
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def load_fluid_database(source) -> list[FluidSpec]:
    """Parse a fluid database from TOML text or a path to a TOML file."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and source.endswith(".toml")):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ParseError(f"fluid database: {exc}") from None
    extra = set(doc) - {"fluid"}
    if extra:
        raise ParseError(f"fluid database: unknown top-level key(s) {sorted(extra)}")
    records = doc.get("fluid", [])
    if not isinstance(records, list):
        raise ParseError("fluid database: 'fluid' must be an array of tables ([[fluid]])")
    fluids = [parse_fluid_record(rec, i, text) for i, rec in enumerate(records)]
    names = [f.name.lower() for f in fluids]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ValidationError(f"fluid database: duplicate fluid name(s) {dupes}")
    return fluids


def _model_to_dict(model: PropertyModel):
    if model.kind == "constant":
        return {"kind": "constant", "value": model.value}
    if model.kind == "power_law":
        return {"kind": "power_law", "p_ref": model.p_ref, "T_ref": model.T_ref, "exponent": model.exponent}
    return {"kind": "table", "T": list(model.temperatures), "values": list(model.values)}


def fluid_to_dict(fluid: FluidSpec) -> dict:
    rec = {
        "name": fluid.name,
        "phase": fluid.phase,
        "validity_K": list(fluid.validity),
        "source": fluid.source,
    }
    if fluid.ideal_gas:
        rec["ideal_gas"] = True
    for prop in PROPERTIES:
        rec[prop] = _model_to_dict(getattr(fluid, prop))
    return rec


def dump_fluid_database(fluids) -> str:
    """Serialize fluids to TOML; floats are written with shortest round-trip repr."""
    return tomli_w.dumps({"fluid": [fluid_to_dict(f) for f in fluids]})


def default_database_path() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(str(resources.files("tiltsense.fluids") / "data" / "fluids.toml"))


@functools.lru_cache(maxsize=8)
def _cached(path: str):
    return tuple(load_fluid_database(Path(path)))


def shipped_fluids(path=None) -> list[FluidSpec]:
    return list(_cached(str(path or default_database_path())))


def get_fluid(name: str, fluids=None) -> FluidSpec:
    fluids = shipped_fluids() if fluids is None else fluids
    for f in fluids:
        if f.name.lower() == name.lower():
            return f
    available = ", ".join(f.name for f in fluids)
    raise ValidationError(f"unknown fluid {name!r}; available: {available}")
