"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the verdict lines are printed
even when output capture is on.
"""
import dataclasses
import math
import time

import numpy as np
import pytest

from tiltsense.analysis import (
    boundary_layer_thickness,
    detector_delta_T,
    fit_first_order,
    fit_sweep,
    loglog_slope,
    rayleigh_scaling_probe,
    tilt_sweep,
    viscosity_scaling_probe,
)
from tiltsense.cli import run
from tiltsense.dimensionless import (
    RA_TURBULENT,
    OperatingPoint,
    classify_thermal_regime,
    device_operating_point,
    grashof,
    prandtl,
    rayleigh,
)
from tiltsense.fluids import FluidState, evaluate, get_fluid, shipped_fluids
from tiltsense.solver import SensorGeometry, SolverConfig, benchmark_case, solve_steady, solve_transient, wall_nusselt

from conftest import GASES, LIQUIDS

# side-heated cavity, Pr 0.71, 64 x 64 (oracles/heated_cavity_ftcs.py)
ORACLE_NU_64 = {1e3: 1.1187256712458649, 1e4: 2.256153620093148}
SWEEP_ANGLES = tuple(np.arcsin(np.linspace(-0.5, 0.5, 9)))


@pytest.fixture
def verdict(capsys):
    def report(criterion, ok, detail, elapsed, limit):
        ok = bool(ok) and elapsed < limit
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail} ({elapsed:.2f} s, limit {limit:g} s)")
        assert ok, f"criterion {criterion}: {detail}"

    return report


def test_01_dimensionless_identities(verdict):
    start = time.perf_counter()
    rng = np.random.default_rng(20240101)
    worst = 0.0
    for _ in range(1000):
        state = FluidState(T=float(rng.uniform(250, 450)), density=float(10 ** rng.uniform(-1, 3.5)),
                           viscosity=float(10 ** rng.uniform(-6, 0)), conductivity=float(10 ** rng.uniform(-2.5, 0)),
                           specific_heat=float(10 ** rng.uniform(2.5, 4)), expansion=float(10 ** rng.uniform(-4, -2)))
        p = OperatingPoint(state, length=float(10 ** rng.uniform(-6, -2)), delta_T=float(rng.uniform(0.1, 300)),
                           gravity=float(rng.uniform(0.1, 100)))
        Ra = rayleigh(p)
        worst = max(worst, abs(Ra - grashof(p) * prandtl(state)) / Ra)
    base = OperatingPoint(evaluate(get_fluid("air"), 300.0), length=9e-4, delta_T=100.0, gravity=9.81)
    Ra0 = rayleigh(base)
    k = 2.0
    scaled = {
        "l^3": (rayleigh(OperatingPoint(base.fluid, 2 * 9e-4, 100.0, 9.81)), k**3),
        "dT^1": (rayleigh(OperatingPoint(base.fluid, 9e-4, 200.0, 9.81)), k),
        "g^1": (rayleigh(OperatingPoint(base.fluid, 9e-4, 100.0, 19.62)), k),
        "mu^-2": (grashof(OperatingPoint(dataclasses.replace(base.fluid, viscosity=2 * base.fluid.viscosity), 9e-4, 100.0, 9.81)),
                  k**-2),
    }
    Gr0 = grashof(base)
    homog = max(abs(v / ((Gr0 if name == "mu^-2" else Ra0) * f) - 1) for name, (v, f) in scaled.items())
    verdict(1, worst < 1e-12 and homog < 1e-14,
            f"max |Ra - Gr Pr|/Ra = {worst:.1e} (< 1e-12), homogeneity error {homog:.1e}", time.perf_counter() - start,
            1.0)


def test_02_regime_gate(verdict):
    start = time.perf_counter()
    ras = {f.name: rayleigh(device_operating_point(f)) for f in shipped_fluids()}
    ok = all(classify_thermal_regime(r) == "laminar_or_conductive" for r in ras.values())
    verdict(2, ok, f"largest Ra {max(ras.values()):.3g} ({max(ras, key=ras.get)}) vs {RA_TURBULENT:g}",
            time.perf_counter() - start, 1.0)


def test_03_heated_cavity_benchmark(verdict):
    start = time.perf_counter()
    errs = {}
    for Ra, ref in ORACLE_NU_64.items():
        geo, fluid = benchmark_case(Ra)
        errs[Ra] = abs(wall_nusselt(solve_steady(geo, fluid, SolverConfig(nx=64, ny=64)), "hot") - ref) / ref
    detail = ", ".join(f"Ra {Ra:g}: {e:.2%}" for Ra, e in errs.items())
    verdict(3, max(errs.values()) < 0.02, f"Nu error vs reference {detail} (< 2%)", time.perf_counter() - start, 120)


def test_04_symmetry_and_antisymmetry(verdict):
    start = time.perf_counter()
    air, geo, cfg = get_fluid("air"), SensorGeometry(), SolverConfig()
    level = abs(detector_delta_T(solve_steady(geo, air, cfg)))
    rise = geo.heater_temperature - cfg.ambient_temperature
    odd = []
    for deg in (10.0, 30.0):
        a = detector_delta_T(solve_steady(geo.tilted(math.radians(deg)), air, cfg))
        b = detector_delta_T(solve_steady(geo.tilted(math.radians(-deg)), air, cfg))
        odd.append(abs(a + b) / abs(a))
    ok = level < 1e-6 * rise and max(odd) <= 2 * cfg.tolerance
    verdict(4, ok, f"|dT(0)| = {level:.1e} K (< {1e-6 * rise:.1e}), max |dT(t)+dT(-t)|/|dT(t)| = {max(odd):.1e} "
                   f"(<= {2 * cfg.tolerance:g})", time.perf_counter() - start, 120)


def test_05_linearity(verdict):
    start = time.perf_counter()
    r = tilt_sweep(SensorGeometry(), get_fluid("air"), SolverConfig(nx=32, ny=32), SWEEP_ANGLES)
    rel_b = abs(r.intercept) / r.full_scale
    verdict(5, r.r_squared > 0.99 and rel_b < 0.02,
            f"R^2 = {r.r_squared:.8f} (> 0.99), |intercept|/full scale = {rel_b:.1e} (< 2%)",
            time.perf_counter() - start, 300)


def test_06_rayleigh_proportionality(verdict):
    start = time.perf_counter()
    r = rayleigh_scaling_probe(get_fluid("air"), [0.5, 1.0, 2.0], SensorGeometry())
    verdict(6, abs(r.slope - 1.0) <= 0.05, f"log S / log Ra slope = {r.slope:.6f} at Ra <= {max(r.values):.2g} "
                                          f"(1 +/- 0.05)", time.perf_counter() - start, 300)


def test_07_viscosity_slope(verdict):
    start = time.perf_counter()
    r = viscosity_scaling_probe(get_fluid("SAE50"), [1.0, 2.0, 4.0], SensorGeometry())
    verdict(7, abs(r.slope + 1.0) <= 0.1, f"log S / log mu slope = {r.slope:.6f} (-1 +/- 0.1)",
            time.perf_counter() - start, 300)


def test_08_fluid_ordering(verdict):
    start = time.perf_counter()
    geo, cfg = SensorGeometry(), SolverConfig(nx=32, ny=32)
    S = {n: abs(tilt_sweep(geo, get_fluid(n), cfg).sensitivity) for n in GASES + LIQUIDS}
    he, n2, co2 = S["He"] / S["air"], S["N2"] / S["air"], S["CO2"] / S["air"]
    gases_ok = S["He"] < S["air"] and S["air"] < S["CO2"] and he < 0.2 and abs(n2 - 1) <= 0.15 and co2 > 1.5
    liquids_ok = min(S[n] for n in LIQUIDS) > max(S[n] for n in GASES)
    detail = ", ".join(f"{n} {S[n] / S['air']:.4g}" for n in GASES + LIQUIDS)
    verdict(8, gases_ok and liquids_ok, f"S/S_air: {detail}", time.perf_counter() - start, 900)


def test_09a_co2_boundary_layer(verdict):
    start = time.perf_counter()
    geo = SensorGeometry(heater_temperature=293.15 + 250.0)
    bl = boundary_layer_thickness(solve_steady(geo, get_fluid("CO2")), direction="horizontal")
    verdict("9a", abs(bl.thickness - 745e-6) <= 0.2 * 745e-6,
            f"CO2 dT 250 K: delta_th = {bl.thickness * 1e6:.1f} um, {bl.flag} ({bl.available * 1e6:.0f} um to the "
            f"side wall); target 745 um +/- 20%", time.perf_counter() - start, 300)


def test_09b_sae50_boundary_layer(verdict):
    start = time.perf_counter()
    geo = SensorGeometry(heater_temperature=293.15 + 140.0)
    bl = boundary_layer_thickness(solve_steady(geo, get_fluid("SAE50")), direction="horizontal")
    verdict("9b", bl.exceeds_cavity, f"SAE50 dT 140 K: delta_th = {bl.thickness * 1e6:.1f} um, {bl.flag}",
            time.perf_counter() - start, 300)


def test_10_response_times(verdict):
    start = time.perf_counter()
    geo = SensorGeometry(tilt_angle=math.radians(30.0))
    fits = {n: fit_first_order(solve_transient(geo, get_fluid(n), SolverConfig(nx=32, ny=32)).series())
            for n in GASES + LIQUIDS}
    tau = {n: f.time_constant for n, f in fits.items()}
    ok = (tau["He"] < tau["N2"] < tau["CO2"] and max(tau[n] for n in GASES) < min(tau[n] for n in LIQUIDS) / 10
          and min(f.r_squared for f in fits.values()) > 0.95)
    detail = ", ".join(f"{n} {tau[n] * 1e3:.3g} ms" for n in GASES + LIQUIDS)
    verdict(10, ok, f"tau: {detail}; min R^2 {min(f.r_squared for f in fits.values()):.3f} (> 0.95)",
            time.perf_counter() - start, 1200)


def test_11_fit_recovery(verdict):
    start = time.perf_counter()
    x = np.array([0.5, 1.0, 2.0, 4.0, 8.0])
    exponent, _ = loglog_slope(x, 3.0 * x**-1.0)
    s = np.sin(np.radians(np.linspace(-30, 30, 9)))
    slope = fit_sweep(list(zip(s, -0.0325 * s + 1e-4))).sensitivity
    t = np.linspace(0.0, 0.05, 201)
    fit = fit_first_order(list(zip(t, 0.8 * (1 - np.exp(-t / 0.005)))))
    errs = (abs(exponent + 1.0), abs(slope + 0.0325) / 0.0325, abs(fit.time_constant - 0.005) / 0.005)
    verdict(11, max(errs) < 1e-10 and fit.r_squared == pytest.approx(1.0, abs=1e-12),
            f"errors: exponent {errs[0]:.1e}, slope {errs[1]:.1e}, tau {errs[2]:.1e} (< 1e-10)",
            time.perf_counter() - start, 1.0)


def test_12_determinism(verdict, tmp_path, monkeypatch):
    start = time.perf_counter()
    monkeypatch.chdir(tmp_path)
    codes = [run(["sweep", "--fluid", "air", "--angles", "-30:30:9", "--out", d]) for d in ("first", "second")]
    same = (tmp_path / "first" / "sweep_air.csv").read_bytes() == (tmp_path / "second" / "sweep_air.csv").read_bytes()
    verdict(12, codes == [0, 0] and same, f"two sweep runs byte-identical: {same}", time.perf_counter() - start, 600)
