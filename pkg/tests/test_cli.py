import json
import subprocess
import sys

import pytest

from gammadil.cli import RunConfig, UsageError, main

ONE_ZERO = {"S": {"rows": 1, "cols": 1, "data": [[1, 0]]}, "P": {"rows": 1, "cols": 1, "data": [[0, 0]]}}
THREE_ONE = {"S": {"rows": 1, "cols": 1, "data": [[3, 0]]}, "P": {"rows": 1, "cols": 1, "data": [[1, 0]]}}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def pair_file(tmp_path):
    def write(obj, name="pair.json"):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return write


def test_gen_deterministic(capsys):
    _, a, _ = run(capsys, "gen", "--seed", "1", "--size", "4")
    _, b, _ = run(capsys, "gen", "--seed", "1", "--size", "4")
    assert a == b
    obj = json.loads(a)
    assert obj["S"]["rows"] == 4 and len(obj["P"]["data"]) == 16
    _, c, _ = run(capsys, "gen", "--seed", "2", "--size", "4")
    assert c != a


def test_gen_then_verify(capsys, tmp_path):
    _, out, _ = run(capsys, "gen", "--seed", "7", "--size", "4")
    path = tmp_path / "p.json"
    path.write_text(out)
    code, out, err = run(capsys, "verify", "--input", str(path), "--depth", "10")
    report = json.loads(out)
    assert code == 0 and report["pass"]
    assert all(c["residual"] <= 1e-8 for k, c in report["checks"].items()
               if not k.startswith(("numerical_radius", "gamma_unitary.norm_R")))
    assert list(report["checks"]) == sorted(report["checks"])
    assert "PASS" in err


def test_verify_scalar_one_zero(capsys, pair_file):
    code, out, _ = run(capsys, "verify", "--input", pair_file(ONE_ZERO))
    assert code == 0 and json.loads(out)["pass"]


def test_verify_fails_fast_outside_gamma(capsys, pair_file):
    code, out, _ = run(capsys, "verify", "--input", pair_file(THREE_ONE))
    report = json.loads(out)
    assert code == 1 and not report["pass"]
    assert "Gamma-membership" in report["error"]
    assert list(report["checks"]) == ["gamma_membership"]


def test_verify_rejects_non_gamma_matrix_pair(capsys, pair_file):
    # commuting, ||P|| <= 1, ||S|| <= 2, but (1.9, 0.2) is outside Gamma
    pair = {
        "S": {"rows": 2, "cols": 2, "data": [[1.9, 0], [0, 0], [0, 0], [0, 0]]},
        "P": {"rows": 2, "cols": 2, "data": [[0.2, 0], [0, 0], [0, 0], [0, 0]]},
    }
    code, out, _ = run(capsys, "verify", "--input", pair_file(pair))
    assert code == 1 and "Gamma-membership" in json.loads(out)["error"]


def test_output_byte_identical(capsys, pair_file):
    path = pair_file(ONE_ZERO)
    _, a, _ = run(capsys, "verify", "--input", path)
    _, b, _ = run(capsys, "verify", "--input", path)
    assert a == b and "timings" not in json.loads(a)
    _, c, _ = run(capsys, "verify", "--input", path, "--timings")
    assert "timings" in json.loads(c)


@pytest.mark.parametrize("d", [4, 6])
def test_hardy_passes(capsys, d):
    code, out, _ = run(capsys, "hardy", "--grid-d", str(d))
    report = json.loads(out)
    assert code == 0 and report["pass"]
    assert all(c["residual"] <= 1e-13 for c in report["checks"].values())


def test_hardy_rejects_small_d(capsys):
    code, _, err = run(capsys, "hardy", "--grid-d", "2")
    assert code == 2 and "too small" in err


def test_human_format(capsys):
    code, out, _ = run(capsys, "hardy", "--human")
    assert code == 0 and out.strip().endswith("PASS")


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["verify"],
        ["verify", "--input", "/nonexistent/file.json"],
        ["gen", "--depth", "4", "--window", "3"],
        ["gen", "--tol", "tol_fund=-1"],
        ["gen", "--tol", "nosuch=1"],
        ["gen", "--tol", "tol_fund"],
        ["gen", "--size", "0"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_malformed_input_exit_2(capsys, pair_file):
    bad = {"S": {"rows": 1, "cols": 1, "data": []}, "P": ONE_ZERO["P"]}
    assert run(capsys, "verify", "--input", pair_file(bad))[0] == 2
    assert run(capsys, "verify", "--input", pair_file([1, 2]))[0] == 2


def test_config_file_and_flag_precedence(capsys, tmp_path, pair_file):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\ndepth = 8\nwindow = 5\ntol_fund = 1e-9\ngrid-d = 5\n")
    path = pair_file(ONE_ZERO)
    _, out, _ = run(capsys, "verify", "--input", path, "--config", str(cfg))
    report = json.loads(out)
    assert report["instance"] == {"depth": 8, "n": 1, "window": 5}
    assert report["checks"]["fundamental_F"]["threshold"] == 1e-9
    _, out, _ = run(capsys, "verify", "--input", path, "--config", str(cfg), "--window", "3",
                    "--tol", "tol_fund=1e-7")
    report = json.loads(out)
    assert report["instance"]["window"] == 3
    assert report["checks"]["fundamental_F"]["threshold"] == 1e-7


def test_bad_config_file(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("depth: 8\n")
    assert run(capsys, "gen", "--config", str(cfg))[0] == 2
    cfg.write_text("colour = blue\n")
    assert run(capsys, "gen", "--config", str(cfg))[0] == 2


def test_run_config_invariants():
    RunConfig()
    with pytest.raises(UsageError):
        RunConfig(depth=5, window=4)
    with pytest.raises(UsageError):
        RunConfig(seed=-1)


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "gammadil", "gen", "--seed", "3", "--size", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["S"]["rows"] == 1
