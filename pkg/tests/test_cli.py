import io
import json

import numpy as np
import pandas as pd
import pytest

from lieblab.entrypoints.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, main
from lieblab.verifier.falsify import NO_CLAIM_BANNER

IDENTITY_SPEC = {
    "f": {"kind": "power", "params": {"s": 1.0}},
    "phi": {"kind": "identity", "dim": 2},
    "psi": {"kind": "identity", "dim": 2},
    "p": 1.0,
    "q": 1.0,
}


def strip_runtime(payload):
    for point in payload["points"]:
        point.pop("runtime_ms")
    return payload


@pytest.fixture
def grid_file(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps([{"p": 0.5, "q": 0.5, "s": 0.5}]))
    return path


def test_no_command_prints_help(capsys):
    assert main([]) == EXIT_OK
    assert "verify" in capsys.readouterr().out


def test_counterexample_square_case(capsys):
    code = main(["counterexample", "remark4.6", "--t", "4", "--p", "1", "--s", "1"])
    assert code == EXIT_OK
    assert "lhs=2.5 rhs=1.6 VIOLATED" in capsys.readouterr().out


def test_counterexample_writes_json(tmp_path, capsys):
    out = tmp_path / "pair.json"
    args = ["counterexample", "remark4.6", "--t", "4", "--p", "2", "--s", "2"]
    assert main([*args, "--out", str(out)]) == EXIT_OK
    payload = json.loads(out.read_text())
    assert payload["lhs"] == pytest.approx(6.25)
    assert payload["consistent"] is True


def test_counterexample_rejects_non_positive_input():
    args = ["counterexample", "remark4.6", "--t", "-1", "--p", "1", "--s", "1"]
    assert main(args) == EXIT_CONFIG


def test_verify_unknown_suite():
    assert main(["verify", "thm9.9", "--trials", "2"]) == EXIT_CONFIG


def test_verify_with_grid_file(tmp_path, grid_file):
    out = tmp_path / "report.json"
    args = ["verify", "thm2.1", "--grid-file", str(grid_file), "--trials", "10"]
    assert main([*args, "--dims", "2", "--seed", "3", "--out", str(out)]) == EXIT_OK
    payload = json.loads(out.read_text())
    assert payload["suite"] == "thm2_1"
    assert payload["passed"] is True
    assert payload["header"]["seed"] == 3
    assert len(payload["points"]) == 1


def test_verify_is_reproducible(tmp_path, grid_file):
    outputs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        args = ["verify", "thm2.1", "--grid-file", str(grid_file), "--trials", "10"]
        assert main([*args, "--dims", "2,3", "--out", str(out)]) == EXIT_OK
        outputs.append(strip_runtime(json.loads(out.read_text())))
    assert outputs[0] == outputs[1]


def test_verify_several_suites_bundle(tmp_path):
    grid = tmp_path / "range.json"
    grid.write_text(json.dumps([{"p": 0.5, "q": 0.5, "s": -0.5}]))
    out = tmp_path / "bundle.json"
    args = ["verify", "range_i", "range-i", "--grid-file", str(grid), "--trials", "5"]
    assert main([*args, "--dims", "2", "--out", str(out)]) == EXIT_OK
    payload = json.loads(out.read_text())
    assert [suite["suite"] for suite in payload["suites"]] == ["range_i", "range_i"]


def test_verify_csv_format(tmp_path, grid_file):
    out = tmp_path / "report.csv"
    args = ["verify", "thm2_1", "--grid-file", str(grid_file), "--trials", "5"]
    assert main([*args, "--dims", "2", "--format", "csv", "--out", str(out)]) == EXIT_OK
    table = pd.read_csv(out)
    assert table.loc[0, "suite"] == "thm2_1"
    assert table.loc[0, "violations"] == 0


def test_verify_grid_file_from_suite_dir(tmp_path, grid_file, monkeypatch, capsys):
    monkeypatch.setenv("LIEBLAB_SUITE_DIR", str(tmp_path))
    monkeypatch.chdir(tmp_path.parent)
    args = ["verify", "thm2_1", "--grid-file", grid_file.name, "--trials", "5", "--dims", "2"]
    assert main(args) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["suite"] == "thm2_1"


def test_verify_seed_from_environment(tmp_path, grid_file, monkeypatch):
    monkeypatch.setenv("LIEBLAB_SEED", "17")
    out = tmp_path / "report.json"
    args = ["verify", "thm2_1", "--grid-file", str(grid_file), "--trials", "5"]
    assert main([*args, "--dims", "2", "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["seed"] == 17


def test_verify_rejects_hypothesis_violation(tmp_path):
    grid = tmp_path / "bad.json"
    grid.write_text(json.dumps([{"p": 1.5, "q": 0.5, "s": 0.5}]))
    args = ["verify", "thm2_1", "--grid-file", str(grid), "--trials", "5"]
    assert main(args) == EXIT_CONFIG


def test_verify_malformed_grid_file(tmp_path):
    grid = tmp_path / "broken.json"
    grid.write_text("[{")
    assert main(["verify", "thm2_1", "--grid-file", str(grid)]) == EXIT_CONFIG


def test_verify_missing_grid_file(tmp_path):
    args = ["verify", "thm2_1", "--grid-file", str(tmp_path / "none.json")]
    assert main(args) == EXIT_CONFIG


def test_invalid_trials_flag():
    assert main(["verify", "thm2_1", "--trials", "0"]) == EXIT_CONFIG


def test_eval_lieb_trace(capsys, matrix_json):
    args = [
        "eval",
        "--spec",
        json.dumps(IDENTITY_SPEC),
        "--a",
        matrix_json(np.diag([1.0, 2.0])),
        "--b",
        matrix_json(np.diag([3.0, 4.0])),
    ]
    assert main(args) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "lieb"
    assert payload["value"] == pytest.approx(11.0)


def test_eval_mean_norm(capsys, matrix_json):
    args = [
        "eval",
        "--spec",
        json.dumps(IDENTITY_SPEC),
        "--a",
        matrix_json(np.diag([1.0, 2.0])),
        "--b",
        matrix_json(np.diag([3.0, 4.0])),
        "--kind",
        "mean-norm",
        "--mean",
        "geometric",
        "--norm",
        "ky_fan_anti:1",
    ]
    assert main(args) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(np.sqrt(3.0))


def test_eval_log_limit(capsys, matrix_json):
    args = [
        "eval",
        "--spec",
        json.dumps(IDENTITY_SPEC),
        "--a",
        matrix_json(np.diag([1.0, 4.0])),
        "--kind",
        "log-limit",
        "--alpha",
        "0.5",
    ]
    assert main(args) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(5.0)


def test_eval_rejects_zero_powers(caplog, matrix_json):
    spec = dict(IDENTITY_SPEC, p=0.0, q=0.0)
    args = ["eval", "--spec", json.dumps(spec), "--a", matrix_json(np.eye(2))]
    assert main(args) == EXIT_CONFIG
    assert "(p,q)≠(0,0)" in caplog.text


def test_eval_rejects_malformed_matrix():
    bad = json.dumps({"dim": 2, "re": [[1.0, 0.0]]})
    args = ["eval", "--spec", json.dumps(IDENTITY_SPEC), "--a", bad]
    assert main(args) == EXIT_CONFIG


def test_eval_rejects_indefinite_matrix(matrix_json):
    args = [
        "eval",
        "--spec",
        json.dumps(IDENTITY_SPEC),
        "--a",
        matrix_json(np.diag([1.0, -1.0])),
    ]
    assert main(args) == EXIT_CONFIG


def test_conjugate_table(capsys):
    args = ["conjugate", "--fn", '{"kind": "power", "params": {"s": 2}}', "--grid", "1,3,3"]
    assert main(args) == EXIT_OK
    table = pd.read_csv(io.StringIO(capsys.readouterr().out))
    np.testing.assert_allclose(table["value"], [0.25, 1.0, 2.25], rtol=1e-7)


def test_conjugate_check_direction(capsys):
    fn = '{"kind": "power", "params": {"s": 0.5}}'
    args = ["conjugate", "--fn", fn, "--direction", "check", "--grid", "0.5,2,2"]
    assert main(args) == EXIT_OK
    table = pd.read_csv(io.StringIO(capsys.readouterr().out))
    np.testing.assert_allclose(table["value"], [-0.5, -0.125], rtol=1e-7)


def test_conjugate_bad_grid():
    fn = '{"kind": "power", "params": {"s": 2}}'
    assert main(["conjugate", "--fn", fn, "--grid", "1,3"]) == EXIT_CONFIG
    assert main(["conjugate", "--fn", fn, "--grid=-1,3,3"]) == EXIT_CONFIG


def test_sweep_prints_banner(capsys):
    assert main(["sweep", "missing-region", "--trials", "1", "--dims", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith(NO_CLAIM_BANNER)
    payload = json.loads(out[len(NO_CLAIM_BANNER):])
    assert payload["claim"] == "none"
    assert payload["points"]


def test_failed_exit_code_is_distinct():
    assert EXIT_FAILED not in (EXIT_OK, EXIT_CONFIG)


def test_grid_file_rejects_several_distinct_suites(grid_file, caplog):
    args = ["verify", "thm2_1", "range_i", "--grid-file", str(grid_file), "--trials", "5"]
    assert main(args) == EXIT_CONFIG
    assert "single suite" in caplog.text
