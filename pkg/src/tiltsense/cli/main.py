"""``tiltsense`` command line.

Exit codes: 0 success, 1 invalid input or configuration, 2 solver or fit
failure, 3 file-system error.  Angles on the command line are in degrees.
"""
from __future__ import annotations

import argparse
import logging
import math
import re
import sys
from pathlib import Path

import numpy as np

from .. import __version__
from ..analysis import boundary_layer_thickness, detector_delta_T, fit_first_order, tilt_sweep
from ..analysis.output import boundary_layer_text, header_line, response_csv, sweep_csv, sweep_svg
from ..dimensionless import OperatingPoint, report
from ..errors import ConvergenceError, FitError, TiltSenseError
from ..fluids.database import shipped_fluids
from ..fluids.properties import PROPERTIES, evaluate
from ..solver import benchmark_case, energy_balance, fields_csv, solve_steady, solve_transient, wall_nusselt
from .config import EXPERIMENTS, RunConfig, load_run_config

log = logging.getLogger("tiltsense")

# mean hot-wall Nusselt number of the side-heated square cavity, Pr = 0.71
BENCHMARK_NUSSELT = {1e3: 1.118, 1e4: 2.243, 1e5: 4.519}

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_IO = 0, 1, 2, 3


def parse_angles(text: str):
    """``"a:b:n"`` gives ``n`` evenly spaced angles from a to b; ``"a,b,c"`` lists them."""
    text = text.strip()
    try:
        if ":" in text:
            a, b, n = text.split(":")
            n = int(n)
            if n < 1:
                raise ValueError
            return tuple(float(v) for v in np.linspace(float(a), float(b), n))
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid angle list {text!r}; use start:stop:count or a,b,c") from None


def _parser():
    p = argparse.ArgumentParser(prog="tiltsense", description="Convective thermal inclinometer simulator.")
    p.add_argument("--version", action="version", version=f"tiltsense {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="run configuration (TOML)")
    common.add_argument("--fluids-db", type=Path, help="fluid database (TOML); default from $TILTSENSE_FLUIDS")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("-v", "--verbose", action="store_true")

    solve = argparse.ArgumentParser(add_help=False)
    solve.add_argument("--fluid")
    solve.add_argument("--nx", type=int)
    solve.add_argument("--ny", type=int)
    solve.add_argument("--dT", type=float, help="heater rise above ambient, K")
    solve.add_argument("--T0", type=float, help="ambient temperature, K")
    solve.add_argument("--tilt", type=float, help="tilt angle, degrees")
    solve.add_argument("--properties", choices=("constant", "temperature-dependent-mu"))
    solve.add_argument("--allow-turbulent", action="store_true")

    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("props", parents=[common], help="print fluid properties")
    sp.add_argument("fluid", nargs="?")
    sp.add_argument("--T", type=float, help="temperature, K (default 300)")

    sp = sub.add_parser("dimless", parents=[common], help="print dimensionless numbers")
    sp.add_argument("--fluid")
    sp.add_argument("--l", type=float, help="characteristic length, m")
    sp.add_argument("--dT", type=float, help="temperature difference, K")
    sp.add_argument("--g", type=float, help="gravity, m/s^2")
    sp.add_argument("--T", type=float, help="property temperature, K (default 300)")

    sub.add_parser("solve", parents=[common, solve], help="steady solve, writes field CSV")
    sp = sub.add_parser("sweep", parents=[common, solve], help="tilt sweep, writes CSV and SVG")
    sp.add_argument("--angles", type=parse_angles, help="degrees: start:stop:count or a,b,c")
    sp.add_argument("--workers", type=int, default=1)
    sp = sub.add_parser("transient", parents=[common, solve], help="heater step response")
    sp.add_argument("--dt", type=float, help="time step, s")
    sp.add_argument("--end", type=float, help="end time, s")
    sp = sub.add_parser("blayer", parents=[common, solve], help="thermal boundary-layer thickness")
    sp.add_argument("--direction", choices=("horizontal", "up", "down"))
    sp = sub.add_parser("bench", parents=[common], help="side-heated cavity benchmark")
    sp.add_argument("--Ra", type=float, action="append", help="Rayleigh number (repeatable)")
    sp.add_argument("--n", type=int, help="grid cells per side")
    return p


def _fix_negative_values(argv):
    """Let ``--angles -30:30:9`` through argparse, which would read the value as an option."""
    out, it = [], iter(argv)
    for a in it:
        if a in ("--angles", "--tilt", "--dT"):
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def build_run_config(args) -> RunConfig:
    cfg = load_run_config(args.config) if args.config else RunConfig()
    changes = {"experiment": args.command}
    if args.out is not None:
        changes["output_dir"] = args.out
    if args.fluids_db is not None:
        changes["fluids_db"] = args.fluids_db
    if getattr(args, "fluid", None):
        changes["fluid"] = args.fluid
    solver = {}
    for flag, key in (("nx", "nx"), ("ny", "ny"), ("T0", "ambient_temperature"), ("properties", "properties"),
                      ("dt", "dt"), ("end", "end_time")):
        v = getattr(args, flag, None)
        if v is not None:
            solver[key] = v
    if getattr(args, "n", None) is not None:
        solver["nx"] = solver["ny"] = args.n
    if getattr(args, "allow_turbulent", False):
        solver["allow_turbulent"] = True
    if solver:
        changes["solver"] = cfg.solver.replace(**solver)
    T0 = changes.get("solver", cfg.solver).ambient_temperature
    if getattr(args, "dT", None) is not None and args.command != "dimless":
        changes["geometry"] = cfg.geometry.replace(heater_temperature=T0 + args.dT)
    if getattr(args, "tilt", None) is not None:
        changes["tilt_deg"] = args.tilt
    if getattr(args, "angles", None) is not None:
        changes["angles_deg"] = args.angles
    if getattr(args, "T", None) is not None:
        changes["property_temperature"] = args.T
    if getattr(args, "l", None) is not None:
        changes["length"] = args.l
    if args.command == "dimless" and args.dT is not None:
        changes["delta_T"] = args.dT
    if getattr(args, "g", None) is not None:
        changes["geometry"] = changes.get("geometry", cfg.geometry).replace(gravity=args.g)
    if getattr(args, "direction", None):
        changes["direction"] = args.direction
    if getattr(args, "Ra", None):
        changes["bench_rayleigh"] = tuple(args.Ra)
    return cfg.replace(**changes)


def _safe(name):
    return re.sub(r"[^A-Za-z0-9._-]+", "_", name)


def _write(cfg: RunConfig, filename: str, text: str) -> Path:
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    path = out / filename
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    print(f"wrote {path}")
    return path


def _hash(cfg: RunConfig):
    return cfg.replace(output_dir=Path(".")).digest()


# -- subcommands --------------------------------------------------------------
def cmd_props(cfg, args):
    fluid = cfg.fluid_spec()
    T = cfg.property_temperature
    state = evaluate(fluid, T)
    print(f"{fluid.name} ({fluid.phase}) at T = {T:g} K")
    for prop, (label, unit) in sorted(PROPERTIES.items()):
        print(f"  {label:<32s} {getattr(state, prop):.6g} {unit}")
    return EXIT_OK


def cmd_dimless(cfg, args):
    fluid = cfg.fluid_spec()
    state = evaluate(fluid, cfg.property_temperature)
    dT = cfg.delta_T if cfg.delta_T is not None else cfg.geometry.heater_temperature - cfg.solver.ambient_temperature
    point = OperatingPoint(state, length=cfg.length, delta_T=dT, gravity=cfg.geometry.gravity)
    rep = report(point)
    print(f"{fluid.name} at T = {cfg.property_temperature:g} K, l = {cfg.length:g} m, dT = {dT:g} K, "
          f"g = {cfg.geometry.gravity:g} m/s^2")
    for k, v in rep.as_dict().items():
        print(f"  {k:<16s} {v if isinstance(v, str) or v is None else format(v, '.6g')}")
    return EXIT_OK


def cmd_solve(cfg, args):
    sol = solve_steady(cfg.geometry, cfg.fluid_spec(), cfg.solver)
    bal = energy_balance(sol)
    print(f"{cfg.fluid_name}: tilt {cfg.tilt_deg:g} deg, detector delta T = {detector_delta_T(sol):.6e} K")
    print(f"  Newton iterations {sol.iterations}, residual {sol.final_residual:.3e}, "
          f"heat balance imbalance {bal.imbalance:.2e}")
    _write(cfg, f"fields_{_safe(cfg.fluid_name)}.csv", fields_csv(sol).replace(
        f"config_hash={sol.metadata['config_hash']}", f"config_hash={_hash(cfg)}", 1))
    return EXIT_OK


def cmd_sweep(cfg, args):
    angles = [math.radians(a) for a in cfg.angles_deg]
    res = tilt_sweep(cfg.geometry, cfg.fluid_spec(), cfg.solver, angles, workers=getattr(args, "workers", 1))
    h = _hash(cfg)
    name = _safe(cfg.fluid_name)
    print(f"{cfg.fluid_name}: S = {res.sensitivity:.6e} K, intercept {res.intercept:.3e} K, R^2 = {res.r_squared:.6f}")
    _write(cfg, f"sweep_{name}.csv", sweep_csv(res, h, cfg.fluid_name))
    svg = sweep_svg({cfg.fluid_name: res}, h)
    _write(cfg, f"sweep_{name}.svg", _svg_with_header(svg, h))
    return EXIT_OK


def _svg_with_header(svg: str, h: str) -> str:
    body = re.sub(r"^<\?xml[^>]*\?>\s*", "", svg)
    comment = header_line(h).strip()[2:]
    return f"<!-- {comment} -->\n{body}"


def cmd_transient(cfg, args):
    cfg = cfg if cfg.tilt_deg else cfg.replace(tilt_deg=30.0)
    tr = solve_transient(cfg.geometry, cfg.fluid_spec(), cfg.solver)
    fit = fit_first_order(tr.series())
    print(f"{cfg.fluid_name}: tilt {cfg.tilt_deg:g} deg, dt = {tr.dt:.4g} s, {len(tr.times) - 1} steps")
    print(f"  tau = {fit.time_constant:.6e} s, amplitude {fit.amplitude:.6e} K, R^2 = {fit.r_squared:.5f}")
    _write(cfg, f"transient_{_safe(cfg.fluid_name)}.csv", response_csv(tr, fit, _hash(cfg), cfg.fluid_name))
    return EXIT_OK


def cmd_blayer(cfg, args):
    sol = solve_steady(cfg.geometry, cfg.fluid_spec(), cfg.solver)
    bl = boundary_layer_thickness(sol, cfg.geometry, cfg.direction)
    print(f"{cfg.fluid_name}: delta_th = {bl.thickness * 1e6:.1f} um ({bl.direction}), {bl.flag}; "
          f"{bl.available * 1e6:.1f} um to the wall")
    _write(cfg, f"blayer_{_safe(cfg.fluid_name)}.csv", boundary_layer_text(bl, _hash(cfg), cfg.fluid_name))
    return EXIT_OK


def cmd_bench(cfg, args):
    n = cfg.solver.nx
    print(f"side-heated cavity, Pr = {cfg.bench_prandtl:g}, {n} x {cfg.solver.ny} grid")
    print(f"  {'Ra':>10s} {'Nu':>10s} {'reference':>10s} {'rel.err':>9s}")
    for Ra in cfg.bench_rayleigh:
        geo, fluid = benchmark_case(Ra, cfg.bench_prandtl)
        sol = solve_steady(geo, fluid, cfg.solver)
        nu = wall_nusselt(sol, "hot")
        ref = BENCHMARK_NUSSELT.get(Ra) if cfg.bench_prandtl == 0.71 else None
        err = f"{abs(nu - ref) / ref:9.2%}" if ref else f"{'-':>9s}"
        print(f"  {Ra:10.3g} {nu:10.4f} {ref if ref else '-':>10} {err}")
    return EXIT_OK


COMMANDS = {
    "props": cmd_props,
    "dimless": cmd_dimless,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "transient": cmd_transient,
    "blayer": cmd_blayer,
    "bench": cmd_bench,
}
assert set(COMMANDS) == set(EXPERIMENTS)


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _parser()
    try:
        args = parser.parse_args(_fix_negative_values(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "props" and args.fluid is None and args.config is None:
            names = ", ".join(f.name for f in shipped_fluids(args.fluids_db))
            print(f"usage: tiltsense props <fluid> --T <K>; available fluids: {names}", file=sys.stderr)
            return EXIT_INPUT
        cfg = build_run_config(args)
        return COMMANDS[args.command](cfg, args)
    except (ConvergenceError, FitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except TiltSenseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def main():
    sys.exit(run())
