import json

import pytest
import yaml

from relgl.cli import main, load_scenario, parse_ring, parse_ideal, ConfigError


def write_cfg(tmp_path, cfg):
    path = tmp_path / "scenario.yaml"
    path.write_text(yaml.safe_dump(cfg))
    return str(path)


def test_parse_ring_forms():
    assert parse_ring("zmod 6").size == 6
    assert parse_ring("triangular 2").size == 8
    assert parse_ring("local-f2").size == 8
    assert parse_ring({"kind": "zmod", "m": 9}).size == 9


def test_parse_ideal_forms():
    R = parse_ring("zmod 12")
    assert parse_ideal(R, 4).label() == "(4)"
    assert parse_ideal(R, [4, 6]).label() == "(4,6)"
    assert parse_ideal(R, "(2)").label() == "(2)"
    assert len(parse_ideal(R, "()")) == 1  # zero ideal


def test_load_scenario_collects_all_problems():
    with pytest.raises(ConfigError) as exc:
        load_scenario({"check": "bogus", "n": 1})
    msg = str(exc.value)
    assert "unknown or missing check" in msg
    assert "missing ring" in msg
    assert "bad n" in msg


def test_run_pass_exit_zero(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"check": "lemma1", "ring": "zmod 4", "n": 3,
                               "A": "(2)"})
    rc = main(["run", cfg])
    assert rc == 0
    out = capsys.readouterr().out
    assert "[PASS] lemma1" in out


def test_run_machine_format_golden(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"check": "lemma1", "ring": "zmod 4", "n": 3,
                               "A": "(2)"})
    rc = main(["--format", "machine", "--no-timing", "run", cfg])
    assert rc == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["claim"] == "lemma1"
    assert rep["verdict"] == "pass"
    assert rep["ideals"] == {"A": "(2)"}
    assert "wall_time_ms" not in rep
    # determinism: a second run emits the identical report
    main(["--format", "machine", "--no-timing", "run", cfg])
    assert json.loads(capsys.readouterr().out) == rep


def test_run_hypothesis_violated_exit_three(tmp_path):
    cfg = write_cfg(tmp_path, {"check": "theorem2", "ring": "triangular 2",
                               "n": 3, "A": "()", "B": "()"})
    assert main(["run", cfg]) == 3


def test_run_refused_cap_exit_four(tmp_path):
    cfg = write_cfg(tmp_path, {"check": "lemma1", "ring": "zmod 4", "n": 3,
                               "A": "(2)", "cap": 8})
    assert main(["run", cfg]) == 4


def test_run_config_error_exit_one(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"check": "lemma2", "ring": "zmod 4"})
    assert main(["run", cfg]) == 1
    err = capsys.readouterr().err
    assert "needs ideal A" in err and "needs ideal B" in err


def test_describe_ring(capsys):
    assert main(["describe-ring", "zmod 4"]) == 0
    out = capsys.readouterr().out
    assert "size=4" in out and "commutative=True" in out


def test_ideal_ops(capsys):
    assert main(["ideal-ops", "zmod 8"]) == 0
    out = capsys.readouterr().out
    assert "4 ideals" in out
    assert "(B:A)=" in out


def test_z_group_check(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"check": "z-group", "ring": "zmod 4", "n": 3,
                               "A": "()"})
    rc = main(["--format", "machine", "run", cfg])
    assert rc == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["details"]["order"] == 2
