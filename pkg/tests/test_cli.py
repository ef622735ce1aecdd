import json

import numpy as np
import pytest

import thetastrata.cli as cli
from thetastrata.theta import block_diag, point_to_json, random_siegel_point, validate_siegel


@pytest.fixture
def tau4_file(tmp_path):
    path = tmp_path / "tau4.json"
    path.write_text(json.dumps(point_to_json(validate_siegel(1j * np.eye(4)))))
    return str(path)


def run_json(capsys, argv, expect_code=0):
    code = cli.run(argv)
    out = capsys.readouterr().out
    assert code == expect_code
    return json.loads(out)


def test_chars_even_genus_one(capsys):
    assert run_json(capsys, ["chars", "--genus", "1", "--parity", "even"]) == ["0|0", "0|1", "1|0"]


def test_chars_split_tuple(capsys):
    out = run_json(capsys, ["chars", "--genus", "4", "--split", "1"])
    assert len(out) == 28


def test_chars_bad_genus_is_domain_error(capsys):
    assert cli.run(["chars", "--genus", "0"]) == 1
    assert "error" in capsys.readouterr().err


def test_orbit_equiv(capsys):
    out = run_json(capsys, ["orbit", "equiv", "--tuple", "0|0,0|1", "--tuple", "0|1,1|0"])
    assert out["equivalent"] is True
    out = run_json(capsys, ["orbit", "equiv", "--tuple", "0|0,0|0", "--tuple", "0|0,0|1"])
    assert out["equivalent"] is False


def test_orbit_bfs(capsys):
    out = run_json(capsys, ["orbit", "bfs", "--tuple", "11|11"])
    assert out["orbit_size"] == 10


def test_orbit_bfs_genus_cap_exit_code(capsys):
    assert cli.run(["orbit", "bfs", "--tuple", "0000|0000"]) == 3
    assert "error" in capsys.readouterr().err


def test_eval_form(capsys, tau4_file):
    out = run_json(capsys, ["eval", "--form", "FT", "--tau", tau4_file])
    assert out["relative_magnitude"] < 1e-8
    assert out["form"] == "FT"


def test_eval_theta(capsys, tau4_file):
    out = run_json(capsys, ["eval", "theta", "--char", "0000|0000", "--tau", tau4_file])
    assert out["value"][0] == pytest.approx(1.0864348112133080**4, abs=1e-10)
    assert out["tail_bound"] < 1e-10


def test_eval_missing_char(capsys, tau4_file):
    assert cli.run(["eval", "theta", "--tau", tau4_file]) == 1


def test_eval_cap_exceeded(capsys, tmp_path):
    path = tmp_path / "thin.json"
    path.write_text(json.dumps(point_to_json(validate_siegel([[1e-5j]]))))
    assert cli.run(["eval", "theta", "--char", "0|0", "--tau", str(path), "--target", "1e-250"]) == 3


def test_classify_block(capsys, tmp_path):
    rng = np.random.default_rng(5)
    blk = block_diag(random_siegel_point(2, rng), random_siegel_point(2, rng))
    path = tmp_path / "blk.json"
    path.write_text(json.dumps(point_to_json(blk)))
    out = run_json(capsys, ["classify", "--tau", str(path)])
    assert out["label"] == "X4"
    assert len(out["vanishing"]) == 36


def test_verify_orbit_oracle(capsys):
    out = run_json(capsys, ["verify", "orbit-oracle", "--genus", "1"])
    assert out["ok"] is True
    out = run_json(capsys, ["verify", "orbit-oracle", "--genus", "2"])
    assert out["ok"] is True
    assert out["triples"]["ordered_comparisons"] == 1000**2


def test_verify_transformation_deterministic(capsys):
    argv = ["verify", "transformation", "--genus", "1", "--seed", "9", "--count", "4"]
    first = run_json(capsys, argv)
    second = run_json(capsys, argv)
    assert first == second
    assert first["ok"] is True


def test_verify_schottky_small_genus(capsys):
    out = run_json(capsys, ["verify", "schottky-degeneration", "--genus", "1", "--seed", "3"])
    assert out["ok"] is True
    assert out["max_relative_magnitude"] < 1e-10


def test_verify_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "transformation_check", lambda *a, **k: {"ok": False})
    assert cli.run(["verify", "transformation", "--genus", "1", "--seed", "1", "--count", "1"]) == 2


def test_unknown_flag_usage_and_exit(capsys):
    assert cli.run(["chars", "--genus", "1", "--bogus"]) == 1
    assert "usage" in capsys.readouterr().err


def test_missing_file_domain_error(capsys):
    assert cli.run(["classify", "--tau", "/nonexistent/tau.json"]) == 1


def test_help_exits_zero(capsys):
    assert cli.run(["--help"]) == 0
    assert "thetastrata" in capsys.readouterr().out
