"""Scenario configs, runners, and the command-line front end."""
import json

import pytest

from semigrav.cli import main
from semigrav.report import emit
from semigrav.scenarios import (
    SCENARIO_NAMES,
    ScenarioConfigError,
    default_config,
    run_scenario,
    validate_config,
)

FAST_TRIALS = {"epr_collapse": 400, "page_geilker": 120}


def _small_config(name):
    """Packaged defaults shrunk where the full size is slow."""
    cfg = default_config(name)
    if name == "kg_wavepacket":
        cfg.update(n_max=12, profile_points=32, integration_points=32)
    elif name == "rindler_unruh":
        cfg.update(n_frequencies=6)
    elif name == "eds_fit":
        cfg.update(fit_tol=1e-3)
    return cfg


# ---- config validation -------------------------------------------------------

def test_scenario_name_list_is_sorted_and_complete():
    assert list(SCENARIO_NAMES) == sorted(SCENARIO_NAMES)
    assert len(SCENARIO_NAMES) == 8


@pytest.mark.parametrize("name", SCENARIO_NAMES)
def test_packaged_defaults_validate(name):
    cfg = validate_config(name, default_config(name))
    assert "seed" in cfg


@pytest.mark.parametrize("name", SCENARIO_NAMES)
def test_missing_field_is_reported_by_name(name):
    base = default_config(name)
    for key in base:
        broken = {k: v for k, v in base.items() if k != key}
        with pytest.raises(ScenarioConfigError, match=key):
            validate_config(name, broken)


@pytest.mark.parametrize("name", SCENARIO_NAMES)
def test_unknown_field_is_reported_by_name(name):
    broken = dict(default_config(name), not_a_real_field=1)
    with pytest.raises(ScenarioConfigError, match="not_a_real_field"):
        validate_config(name, broken)


@pytest.mark.parametrize("name", SCENARIO_NAMES)
def test_sign_flips_are_rejected(name):
    base = default_config(name)
    for key, value in base.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            continue
        if key == "seed" or value == 0:
            continue
        broken = dict(base, **{key: -abs(value)})
        with pytest.raises(ScenarioConfigError):
            validate_config(name, broken)


def test_unknown_scenario_and_bad_shapes():
    with pytest.raises(ScenarioConfigError, match="unknown scenario"):
        validate_config("warp_drive", {})
    with pytest.raises(ScenarioConfigError):
        validate_config("minkowski_vacuum", [1, 2, 3])
    cfg = default_config("eds_cosmology")
    with pytest.raises(ScenarioConfigError, match="t_grid"):
        validate_config("eds_cosmology", dict(cfg, t_grid=[2.0, 1.0]))
    cfg = default_config("minkowski_particle")
    with pytest.raises(ScenarioConfigError, match="mode_label"):
        validate_config("minkowski_particle", dict(cfg, mode_label=[1, 0]))
    with pytest.raises(ScenarioConfigError, match="mode_label"):
        validate_config("minkowski_particle", dict(cfg, mode_label=[9, 0, 0]))


# ---- runners -------------------------------------------------------------------

@pytest.mark.parametrize("name", SCENARIO_NAMES)
def test_every_scenario_passes_its_flags(name):
    report = run_scenario(name, config=_small_config(name),
                          trials=FAST_TRIALS.get(name))
    assert report.scenario == name
    assert report.flags, "every scenario must publish at least one flag"
    assert report.passed, f"failing flags: {report.flags}"
    assert report.tables
    for flag, value in report.flags.items():
        assert type(value) is bool, f"flag {flag} is {type(value)}"
    json.dumps(report.flags)  # flags must be JSON-clean


def test_run_scenario_is_deterministic():
    a = run_scenario("eds_cosmology")
    b = run_scenario("eds_cosmology")
    assert emit(a, "json") == emit(b, "json")


def test_seed_override_lands_in_report():
    report = run_scenario("minkowski_vacuum", seed=777)
    assert report.seed == 777


def test_trials_override_only_for_projection_scenarios():
    with pytest.raises(ScenarioConfigError, match="trial count"):
        run_scenario("eds_cosmology", trials=10)
    report = run_scenario("page_geilker", trials=25)
    stats = report.tables["statistics"]
    count_col = stats.columns.index("count")
    assert sum(row[count_col] for row in stats.rows) == 25


def test_eds_cosmology_honest_closed_form_flags():
    report = run_scenario("eds_cosmology")
    assert report.flags["t00_closed_form"]
    assert report.flags["off_diagonals_zero"]
    assert report.flags["finite_volume_obstruction_present"]


def test_rindler_quadrature_failure_degrades_to_flags(monkeypatch):
    import semigrav.scenarios as sc
    from semigrav.bogolubov import QuadratureError

    def boom(*a, **k):
        raise QuadratureError("synthetic")

    monkeypatch.setattr(sc, "bogolubov_coefficients", boom)
    report = run_scenario("rindler_unruh", config=_small_config("rindler_unruh"))
    assert not report.passed
    assert report.flags["thermal_within_1pct"] is False


# ---- CLI -----------------------------------------------------------------------

def test_cli_run_json_stdout(capsys):
    rc = main(["run", "minkowski_vacuum"])
    out = capsys.readouterr().out
    assert rc == 0
    payload = json.loads(out)
    assert sorted(payload.keys()) == ["flags", "scenario", "seed", "tables"]
    assert payload["scenario"] == "minkowski_vacuum"


def test_cli_run_writes_csv_with_siblings(tmp_path):
    dest = tmp_path / "mv.csv"
    rc = main(["run", "minkowski_vacuum", "--out", str(dest), "--format", "csv"])
    assert rc == 0
    text = dest.read_bytes().decode()
    header = text.split("\r\n")[0]
    assert header == "scenario,t,x1,x2,x3,mu,nu,value"
    assert (tmp_path / "mv.residuals.csv").exists()


def test_cli_run_with_config_and_seed(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(default_config("eds_cosmology")))
    rc = main(["run", "eds_cosmology", "--config", str(cfg_path), "--seed", "5"])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 5


def test_cli_trials_override(tmp_path, capsys):
    rc = main(["run", "page_geilker", "--trials", "30"])
    assert rc == 0
    capsys.readouterr()


def test_cli_scan_eds_volume(capsys):
    rc = main(["scan", "eds_cosmology", "--param", "V0",
               "--values", "18.85,188.5,1885.0"])
    out = capsys.readouterr().out
    assert rc == 0
    payload = json.loads(out)
    slope = payload["tables"]["scaling_slope"]["rows"][0][0]
    assert abs(slope + 2.0) < 1e-6


def test_cli_scan_box_volume(tmp_path, capsys):
    cfg = dict(default_config("minkowski_particle"), dimension=1, mode_label=[1])
    path = tmp_path / "cfg1d.json"
    path.write_text(json.dumps(cfg))
    rc = main(["scan", "minkowski_particle", "--param", "V",
               "--values", "10,20,40,80", "--config", str(path)])
    out = capsys.readouterr().out
    assert rc == 0
    payload = json.loads(out)
    slope = payload["tables"]["scaling_slope"]["rows"][0][0]
    assert abs(slope + 1.0) < 1e-6


def test_cli_error_paths_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(dict(default_config("minkowski_vacuum"), box_side=-1)))
    assert main(["run", "minkowski_vacuum", "--config", str(bad)]) == 2
    assert "box_side" in capsys.readouterr().err

    notjson = tmp_path / "nope.json"
    notjson.write_text("{")
    assert main(["run", "minkowski_vacuum", "--config", str(notjson)]) == 2
    capsys.readouterr()

    assert main(["run", "minkowski_vacuum", "--config", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()

    assert main(["run", "eds_cosmology", "--trials", "5"]) == 2
    assert "trial count" in capsys.readouterr().err

    assert main(["scan", "eds_cosmology", "--param", "V0", "--values", "1,2"]) == 2
    capsys.readouterr()

    assert main(["scan", "eds_cosmology", "--param", "V", "--values", "1,2,3"]) == 2
    capsys.readouterr()


def test_cli_unknown_scenario_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run", "warp_drive"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_cli_scan_param_volume_requires_dimension_one(tmp_path, capsys):
    cfg = dict(default_config("minkowski_particle"), dimension=3)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    rc = main(["scan", "minkowski_particle", "--param", "V",
               "--values", "10,20,40", "--config", str(path)])
    assert rc == 2
    assert "dimension" in capsys.readouterr().err
