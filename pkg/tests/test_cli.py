"""Command-line behavior: exit codes, printed output, session persistence."""
import json

import pytest

from voxelastic.cli import main

pytestmark = pytest.mark.usefixtures("in_tmp_path")


@pytest.fixture
def in_tmp_path(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("VOXELASTIC_SESSION", raising=False)
    return tmp_path


@pytest.fixture
def small_scenario(tmp_path):
    blocks = [
        {"x": x, "y": y, "z": z, "kind": "structural"}
        for x in range(4)
        for y in (1, 2)
        for z in (0, 1)
    ]
    blocks += [{"x": 0, "y": 0, "z": z, "kind": "structural"} for z in (0, 1)]
    doc = {
        "name": "mini",
        "world": {"ground_level": 0, "blocks": blocks},
        "properties": {"num_steps": 300},
        "config": {"record_every": 100},
        "runs": [{"name": "default", "mode": "stress", "seed": [0, 1, 0], "radius": 20}],
    }
    path = tmp_path / "mini.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def test_run_with_named_flags(small_scenario, capsys, tmp_path):
    code = main(
        [
            "run",
            "--mode",
            "stress",
            "--radius",
            "20",
            "--seed",
            "0,1,0",
            "--world",
            str(small_scenario),
            "--out",
            str(tmp_path / "out"),
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "deflection: (" in out
    assert "max von Mises:" in out and " Pa" in out
    assert (tmp_path / "out" / "mini_result.json").exists()
    assert (tmp_path / "out" / "mini_timeseries.csv").exists()
    csv = (tmp_path / "out" / "mini_timeseries.csv").read_text()
    assert csv.splitlines()[0] == "step,time,ux,uy,uz,von_mises"


def test_run_positional_compatibility(small_scenario, capsys):
    code = main(["run", "stress", "20", "--seed", "0,1,0", "--world", str(small_scenario)])
    assert code == 0
    assert "max von Mises:" in capsys.readouterr().out


def test_run_uses_scenario_preset_defaults(small_scenario, capsys):
    code = main(["run", "--world", str(small_scenario)])
    assert code == 0
    assert "deflection: (" in capsys.readouterr().out


def test_invalid_mode_is_usage_error(small_scenario, capsys):
    code = main(["run", "--mode", "elevation", "--radius", "5", "--seed", "0,1,0",
                 "--world", str(small_scenario)])
    assert code != 0
    assert "mode" in capsys.readouterr().err


def test_non_integer_radius_rejected(small_scenario):
    assert main(["run", "--mode", "stress", "--radius", "two", "--seed", "0,1,0",
                 "--world", str(small_scenario)]) != 0


def test_missing_world_is_usage_error(capsys):
    code = main(["run", "--mode", "stress", "--radius", "5", "--seed", "0,0,0"])
    assert code == 2
    assert "world" in capsys.readouterr().err


def test_properties_set_and_echo(capsys, tmp_path):
    session = tmp_path / "s.json"
    code = main(["properties", "ult_stress", "4000", "--session", str(session)])
    out = capsys.readouterr().out
    assert code == 0
    assert "ult_stress" in out and "4000" in out and "Pa" in out
    stored = json.loads(session.read_text())
    assert stored["properties"]["ult_stress"] == 4000.0


def test_properties_listing(capsys):
    assert main(["properties"]) == 0
    out = capsys.readouterr().out
    for name in ("youngs_modulus", "poisson", "ult_stress", "block_weight"):
        assert name in out


def test_properties_unknown_name_fails(capsys):
    assert main(["properties", "bounciness", "3"]) == 1
    assert "unknown property" in capsys.readouterr().err


def test_properties_out_of_range_fails(capsys):
    assert main(["properties", "poisson", "0.5"]) == 1
    assert "poisson" in capsys.readouterr().err


def test_properties_persist_into_runs(small_scenario, capsys, tmp_path):
    session = tmp_path / "s.json"
    assert main(["properties", "gravity_toggle", "0", "--session", str(session)]) == 0
    capsys.readouterr()
    code = main(["run", "--world", str(small_scenario), "--session", str(session)])
    out = capsys.readouterr().out
    assert code == 0
    assert "deflection: (0, 0, 0) m" in out  # nothing moves without gravity


def test_set_special_block_both_forms(capsys, tmp_path):
    session = tmp_path / "s.json"
    assert main(["set-special-block", "3,1,0", "--session", str(session)]) == 0
    assert json.loads(session.read_text())["special_block"] == [3, 1, 0]
    assert main(["set-special-block", "1", "2", "3", "--session", str(session)]) == 0
    assert json.loads(session.read_text())["special_block"] == [1, 2, 3]


def test_special_block_tracked_in_runs(small_scenario, capsys, tmp_path):
    session = tmp_path / "s.json"
    main(["set-special-block", "3,2,1", "--session", str(session)])
    capsys.readouterr()
    code = main(["run", "--world", str(small_scenario), "--session", str(session),
                 "--out", str(tmp_path)])
    assert code == 0
    doc = json.loads((tmp_path / "mini_result.json").read_text())
    idx = doc["particles"].index([3, 2, 1])
    assert doc["tracked_deflection"] == doc["displacements"][idx]


def test_reset_clears_last_result(small_scenario, tmp_path, capsys):
    session = tmp_path / "s.json"
    main(["run", "--world", str(small_scenario), "--session", str(session)])
    assert json.loads(session.read_text())["last_result"] is not None
    assert main(["reset", "--session", str(session)]) == 0
    assert json.loads(session.read_text())["last_result"] is None


def test_info_prints_version_and_properties(capsys):
    assert main(["info"]) == 0
    out = capsys.readouterr().out
    assert "voxelastic" in out
    assert "youngs_modulus" in out


def test_session_env_variable(small_scenario, tmp_path, monkeypatch, capsys):
    session = tmp_path / "env_session.json"
    monkeypatch.setenv("VOXELASTIC_SESSION", str(session))
    assert main(["properties", "ult_stress", "123.0"]) == 0
    assert json.loads(session.read_text())["properties"]["ult_stress"] == 123.0


def test_special_block_missing_from_structure_fails(small_scenario, tmp_path, capsys):
    session = tmp_path / "s.json"
    main(["set-special-block", "50,50,50", "--session", str(session)])
    capsys.readouterr()
    code = main(["run", "--world", str(small_scenario), "--session", str(session)])
    assert code == 1
    assert "special block" in capsys.readouterr().err
