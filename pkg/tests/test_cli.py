import math
import re

import pytest

from tiltsense.cli import RunConfig, dump_run_config, load_run_config, loads_run_config, run
from tiltsense.cli.main import parse_angles
from tiltsense.errors import ConfigError, ParseError
from tiltsense.solver import SensorGeometry, SolverConfig

# shipped air at 300 K: rho 1.1614, mu 1.846e-5, lambda 0.0263, Cp 1007, beta 1/300
AIR_RA_HAND = 9.81 * 9e-4**3 * 100.0 * 1.1614**2 * (1 / 300.0) * 1007.0 / (1.846e-5 * 0.0263)


@pytest.fixture
def in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _all_files(root):
    return sorted(p.relative_to(root) for p in root.rglob("*") if p.is_file())


def test_props_prints_positive_values(capsys):
    assert run(["props", "air", "--T", "300"]) == 0
    out = capsys.readouterr().out
    values = [float(m) for m in re.findall(r"\s(-?\d[\d.e+-]*) \S+$", out.split("\n", 1)[1], flags=re.M)]
    assert len(values) == 5 and all(v > 0 for v in values)
    assert "kg/m^3" in out and "W/(m*K)" in out


def test_dimless_matches_hand_oracle(capsys):
    assert run(["dimless", "--fluid", "air", "--l", "9e-4", "--dT", "100", "--g", "9.81"]) == 0
    out = capsys.readouterr().out
    Ra = float(re.search(r"^\s+Ra\s+(\S+)", out, flags=re.M).group(1))
    assert Ra == pytest.approx(AIR_RA_HAND, rel=1e-5)
    assert Ra == pytest.approx(6.85, rel=0.05)
    assert "laminar_or_conductive" in out


def test_sweep_writes_csv_and_svg(in_tmp, capsys):
    assert run(["sweep", "--fluid", "air", "--angles", "-30:30:9", "--out", "res"]) == 0
    lines = (in_tmp / "res" / "sweep_air.csv").read_text().splitlines()
    assert lines[0].startswith("# tiltsense ") and "config_hash=" in lines[0]
    rows = [ln for ln in lines[2:] if not ln.startswith("#")]
    assert len(rows) == 9
    assert float(rows[0].split(",")[0]) == pytest.approx(-30.0)
    r2 = float(next(ln for ln in lines if ln.startswith("# r_squared=")).split("=")[1])
    assert r2 > 0.99
    svg = (in_tmp / "res" / "sweep_air.svg").read_text()
    assert svg.startswith("<!-- tiltsense ") and "<svg" in svg
    assert not re.search(r'href="(?!#)', svg)


def test_sweep_is_byte_identical(in_tmp):
    for d in ("a", "b"):
        assert run(["sweep", "--angles", "-30,0,30", "--out", d]) == 0
    for name in ("sweep_air.csv", "sweep_air.svg"):
        assert (in_tmp / "a" / name).read_bytes() == (in_tmp / "b" / name).read_bytes()


@pytest.mark.parametrize("argv, name", [
    (["solve", "--tilt", "-10"], "fields_air.csv"),
    (["transient", "--end", "1e-3"], "transient_air.csv"),
    (["blayer", "--fluid", "CO2"], "blayer_CO2.csv"),
])
def test_subcommands_write_only_inside_output_dir(in_tmp, argv, name):
    assert run(argv + ["--out", "out"]) == 0
    files = _all_files(in_tmp)
    assert files == [(in_tmp / "out" / name).relative_to(in_tmp)]
    assert (in_tmp / "out" / name).read_text().startswith("# tiltsense ")


def test_bench_prints_reference(capsys):
    assert run(["bench", "--Ra", "1e3", "--n", "24"]) == 0
    out = capsys.readouterr().out
    assert "1.118" in out and "%" in out


def test_parse_angles():
    assert parse_angles("-30:30:3") == (-30.0, 0.0, 30.0)
    assert parse_angles("1,2.5") == (1.0, 2.5)
    with pytest.raises(Exception):
        parse_angles("a:b")


def test_empty_config_gives_defaults(tmp_path):
    p = tmp_path / "empty.toml"
    p.write_text("")
    cfg = load_run_config(p)
    assert cfg == RunConfig()
    assert cfg.fluid == "air" and cfg.geometry == SensorGeometry() and cfg.solver.ambient_temperature == 293.15


def test_invalid_field_is_named():
    with pytest.raises(ConfigError, match="cavity_width"):
        loads_run_config("[geometry]\ncavity_width = -1.0\n")
    with pytest.raises(ConfigError, match="nx"):
        loads_run_config("[solver]\nnx = 4\n")
    with pytest.raises(ConfigError, match="unknown"):
        loads_run_config("[geometry]\nwidth = 1.0\n")


def test_malformed_config_reports_line(tmp_path, capsys):
    p = tmp_path / "bad.toml"
    p.write_text('experiment = "sweep"\nfluid = \n')
    with pytest.raises(ParseError, match="line 2"):
        load_run_config(p)
    assert run(["solve", "--config", str(p)]) == 1
    assert "line 2" in capsys.readouterr().err


def test_config_round_trip():
    cfg = loads_run_config(
        'experiment = "sweep"\nfluid = "CO2"\n[geometry]\ntilt_deg = 12.5\nheater_temperature = 360.0\n'
        '[solver]\nnx = 24\ntolerance = 1e-9\n[sweep]\nangles_deg = [-10.0, 0.0, 10.0]\n'
    )
    again = loads_run_config(dump_run_config(cfg))
    assert again == cfg
    assert again.geometry.tilt_angle == pytest.approx(math.radians(12.5))
    assert dump_run_config(again) == dump_run_config(cfg)


def test_inline_fluid_round_trip(tmp_path):
    from tiltsense.fluids import get_fluid

    cfg = RunConfig(fluid=get_fluid("N2"))
    again = loads_run_config(dump_run_config(cfg))
    assert again.fluid_spec() == cfg.fluid_spec()


def test_unknown_fluid_lists_available(capsys):
    assert run(["solve", "--fluid", "unobtainium"]) == 1
    err = capsys.readouterr().err
    assert "unobtainium" in err and "air" in err and "SAE50" in err
    assert run(["props"]) == 1
    assert "available fluids" in capsys.readouterr().err


def test_exit_codes(in_tmp, capsys):
    assert run(["solve", "--nx", "4"]) == 1
    assert run(["nonsense"]) == 1
    bad = in_tmp / "slow.toml"
    bad.write_text("[solver]\nmax_iterations = 1\ntolerance = 1e-30\n")
    assert run(["solve", "--config", str(bad), "--tilt", "30"]) == 2
    (in_tmp / "blocked").write_text("a file, not a directory")
    assert run(["solve", "--out", "blocked/sub"]) == 3
    assert run(["props", "air", "--fluids-db", str(in_tmp / "missing.toml")]) in (1, 3)


def test_explicit_time_step_beyond_limit_is_rejected(in_tmp, capsys):
    assert run(["transient", "--dt", "1e-3", "--end", "2e-2", "--out", "o", "--config", _fast_gravity(in_tmp)]) == 1
    assert "maximum admissible" in capsys.readouterr().err


def _fast_gravity(root):
    p = root / "g.toml"
    p.write_text(f"[geometry]\ngravity = {2000 * 9.81}\ntilt_deg = 30.0\n")
    return str(p)


def test_run_config_rejects_bad_values():
    with pytest.raises(ConfigError):
        RunConfig(experiment="dance")
    with pytest.raises(ConfigError):
        RunConfig(angles_deg=(0.0, 1.0))
    with pytest.raises(ConfigError):
        RunConfig(direction="sideways")
    assert RunConfig(tilt_deg=30).geometry.tilt_angle == pytest.approx(math.pi / 6)
    assert RunConfig(solver=SolverConfig(nx=20)).solver.nx == 20
