import math

import numpy as np
import pytest

from tiltsense.analysis import detector_delta_T, fit_first_order
from tiltsense.errors import CFLError
from tiltsense.fluids import get_fluid
from tiltsense.solver import SensorGeometry, SolverConfig, solve_steady, solve_transient


def test_rest_state_at_time_zero(air, tilted):
    r = solve_transient(tilted, air, SolverConfig(end_time=1e-4))
    assert r.times[0] == 0.0 and r.delta_T[0] == 0.0
    assert r.T_left[0] == pytest.approx(293.15)
    assert np.all(np.diff(r.times) > 0)
    assert r.times[-1] == pytest.approx(1e-4, rel=1e-12)


def test_level_step_stays_symmetric_and_warms_detectors(air, geometry):
    r = solve_transient(geometry, air, SolverConfig(end_time=2e-3))
    assert np.max(np.abs(r.delta_T)) < 1e-9
    assert np.all(np.diff(r.T_left) >= -1e-12)
    assert r.T_left[-1] > 293.15 + 1.0


def test_explicit_step_beyond_stability_limit_raises(air):
    geo = SensorGeometry(tilt_angle=math.radians(30), gravity=2000 * 9.81)
    with pytest.raises(CFLError, match="maximum admissible"):
        solve_transient(geo, air, SolverConfig(dt=1e-3, end_time=2e-2))


def test_automatic_step_shrinks_instead_of_raising(air):
    geo = SensorGeometry(tilt_angle=math.radians(30), gravity=2000 * 9.81)
    r = solve_transient(geo, air, SolverConfig(end_time=2e-3))
    assert r.dt < r.time_constant_estimate / 40
    assert np.all(np.isfinite(r.delta_T))


def test_snapshots_every_k_steps(air, tilted):
    r = solve_transient(tilted, air, SolverConfig(end_time=10 * 1e-5, dt=1e-5, snapshot_every=3))
    assert [s.time for s in r.snapshots] == pytest.approx([3e-5, 6e-5, 9e-5, 1e-4])
    assert r.snapshots[-1] is r.final


def test_air_step_response_settles_on_steady_state(air, tilted):
    r = solve_transient(tilted, air)
    steady = solve_steady(tilted, air)
    assert np.max(np.abs(r.final.T - steady.T)) < 2e-8 * 58.0
    assert r.delta_T[-1] == pytest.approx(detector_delta_T(steady), rel=1e-5)


@pytest.mark.slow
def test_viscous_liquid_settles_after_fifteen_time_constants(tilted):
    sae = get_fluid("SAE50")
    probe = solve_transient(tilted, sae, SolverConfig(end_time=1e-9))
    r = solve_transient(tilted, sae, SolverConfig(end_time=15 * probe.time_constant_estimate))
    steady = solve_steady(tilted, sae)
    assert np.max(np.abs(r.final.T - steady.T)) < 1e-7 * 58.0


def test_gas_responds_faster_than_oil(tilted):
    n2 = fit_first_order(solve_transient(tilted, get_fluid("N2")).series())
    oil = fit_first_order(solve_transient(tilted, get_fluid("SAE50")).series())
    assert n2.time_constant < oil.time_constant / 10
    assert n2.r_squared > 0.9 and oil.r_squared > 0.9
