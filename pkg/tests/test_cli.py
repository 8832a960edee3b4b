import json

import pytest

from affine_lw.cli import main
from affine_lw.covers import lw_cover
from affine_lw.linalg import random_basis

import numpy as np


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants_from_files(tmp_path, capsys):
    b = tmp_path / "b.json"
    c = tmp_path / "c.json"
    b.write_text(json.dumps(random_basis(np.random.default_rng(0), 3).to_json()))
    c.write_text(json.dumps(lw_cover(3).to_json()))
    code, out, _ = run(capsys, "constants", "--basis", str(b), "--cover", str(c), "--json")
    data = json.loads(out)
    assert code == 0 and {"bl1", "bl2", "duality_residual"} <= set(data)
    assert data["duality_residual"] < 1e-8


def test_verify_cube_equality(capsys):
    code, out, _ = run(capsys, "verify", "--statement", "affine_bt", "--variant", "1", "--body", "cube3",
                       "--basis", "canonical", "--cover", "lw", "--json")
    assert code == 0 and json.loads(out)["ratio"] == pytest.approx(1.0, abs=1e-12)


def test_verify_functional_and_mc(capsys):
    code, out, _ = run(capsys, "verify", "--statement", "min_corollary", "--variant", "2", "--body", "cross3",
                       "--family", "cone", "--mc-samples", "50000", "--json", "--seed", "3")
    rep = json.loads(out)
    assert code == 0 and rep["method"] == "mc"
    code2, out2, _ = run(capsys, "verify", "--statement", "min_corollary", "--variant", "2", "--body", "cross3",
                         "--family", "cone", "--mc-samples", "50000", "--json", "--seed", "3")
    assert out2 == out


def test_verify_centering_flag(capsys):
    code, _, err = run(capsys, "verify", "--statement", "dual_bt", "--body", "cube3")
    assert code == 1 and "origin" in err
    code, out, _ = run(capsys, "verify", "--statement", "dual_bt", "--body", "cube3", "--center")
    assert code == 0


def test_invalid_tolerance_is_validation_error(capsys):
    code, _, _ = run(capsys, "verify", "--statement", "affine_bt", "--body", "cube3", "--tol", "-1")
    assert code == 1


def test_verification_failure_exit_code(capsys, monkeypatch):
    import affine_lw.cli as cli
    from affine_lw.inequalities import make_report

    def broken(*args, **kwargs):
        return make_report("affine_bt", 1, 0.0, -0.5, "le", 0.0, "0" * 16)

    monkeypatch.setattr(cli, "evaluate", broken)
    code, out, _ = run(capsys, "verify", "--statement", "affine_bt", "--body", "cube3")
    assert code == 2 and "FAIL" in out


def test_verify_classics_and_bn(capsys):
    code, out, _ = run(capsys, "verify", "--statement", "classics", "--body", "cross2", "--json")
    assert code == 0 and all(r["ratio"] >= 1 - 1e-9 for r in json.loads(out))
    code, out, _ = run(capsys, "verify", "--statement", "bobkov_nazarov", "--n", "4", "--json")
    assert code == 0 and json.loads(out)["ratio"] == pytest.approx(1.0)


def test_covers_command(capsys):
    code, out, _ = run(capsys, "covers", "--n", "3", "--k", "2", "--m", "3", "--json")
    assert code == 0 and len(json.loads(out)) == 4


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "--body", "cross3", "--mc-samples", "200000", "--json")
    assert code == 0 and json.loads(out)["within_3sigma"]


def test_suite_command(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"dims": [2], "bodies_per_dim": 2, "mc_samples": 20000}))
    out_path = tmp_path / "records.jsonl"
    code, out, _ = run(capsys, "suite", "--config", str(cfg), "--json", "--output", str(out_path))
    summary = json.loads(out)
    assert code == 0 and summary["failures"] == 0
    assert len(out_path.read_text().splitlines()) == summary["evaluations"]


def test_tightness_command(capsys):
    code, out, _ = run(capsys, "tightness", "--statement", "loomis_whitney", "--n", "2", "--budget", "40",
                       "--restarts", "2", "--json")
    assert code == 0 and json.loads(out)["best_ratio"] >= 1 - 1e-6


def test_usage_errors(capsys):
    assert run(capsys, "verify", "--bogus")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "verify", "--statement", "affine_bt", "--body", "blob9")[0] == 1
    assert run(capsys, "constants", "--cover", "bt-k9-m1", "--n", "3")[0] == 1
    assert run(capsys, "verify", "--statement", "affine_bt", "--variant", "2", "--body", "cube3",
               "--cover", "bt-k1-m1")[0] == 1
