"""Tests for the command-line interface and the suite runner."""

import json

import numpy as np
import pytest

from covergroup import cover_group as cg
from covergroup.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, main
from covergroup.suites import SUITES, SuiteConfig, UnknownSuite, run_suite


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


class TestVerify:
    def test_group_axioms_deterministic(self, capsys):
        args = ("verify", "--suite", "group_axioms", "--n", "2", "--samples", "10", "--seed", "42", "--json")
        code, out1, _ = _run(capsys, *args)
        assert code == EXIT_OK
        _, out2, _ = _run(capsys, *args)
        r1, r2 = json.loads(out1), json.loads(out2)
        r1.pop("wall_time"), r2.pop("wall_time")
        assert r1 == r2 and r1["passed"]

    def test_report_schema(self, capsys):
        _, out, _ = _run(capsys, "verify", "--suite", "hua", "--samples", "3", "--json")
        report = json.loads(out)
        assert set(report) == {"suite", "config", "checks", "passed", "wall_time"}
        for check in report["checks"]:
            assert {"name", "trials", "max_residual", "failures"} <= set(check)
            assert check["trials"] == 3

    def test_deck_center_routes_odd_checks(self, capsys):
        _, out, _ = _run(capsys, "verify", "--suite", "deck_center", "--n", "2", "--samples", "2", "--json")
        checks = {c["name"]: c for c in json.loads(out)["checks"]}
        assert checks["odd_deck_flip"]["n"] == 3 and checks["deck_shift"]["n"] == 2

    def test_deck_center_odd_n(self, capsys):
        code, out, _ = _run(capsys, "verify", "--suite", "deck_center", "--n", "3", "--samples", "2", "--json")
        names = [c["name"] for c in json.loads(out)["checks"]]
        assert code == EXIT_OK and "odd_center_square" in names

    def test_all_runs_every_suite(self, capsys):
        code, out, _ = _run(capsys, "verify", "--suite", "all", "--samples", "1", "--json")
        report = json.loads(out)
        assert code == EXIT_OK
        assert {c["suite"] for c in report["checks"]} == set(SUITES)

    def test_failure_exit_code(self, capsys):
        code, out, _ = _run(capsys, "verify", "--suite", "hua", "--samples", "2", "--tol", "hua_roundtrip=0", "--json")
        report = json.loads(out)
        assert code == EXIT_FAIL and not report["passed"]
        failure = report["checks"][0]["failures"][0]
        assert set(failure) == {"seed_offset", "inputs_digest", "residual"}
        assert len(failure["inputs_digest"]) == 16

    def test_verbose_dumps_inputs(self, capsys):
        _, out, _ = _run(capsys, "verify", "--suite", "hua", "--samples", "1", "--tol", "hua_roundtrip=0",
                         "--json", "--verbose")
        assert "inputs" in json.loads(out)["checks"][0]["failures"][0]

    def test_text_output(self, capsys):
        code, out, _ = _run(capsys, "verify", "--suite", "null_lines", "--samples", "2")
        assert code == EXIT_OK and "PASS" in out and "passed" in out

    @pytest.mark.parametrize("argv", [
        ("verify", "--suite", "nope"),
        ("verify", "--n", "1"),
        ("verify", "--samples", "0"),
        ("verify", "--tol", "bogus"),
        ("verify", "--suite", "hua", "--tol", "unknown_check=1"),
    ])
    def test_config_errors(self, capsys, argv):
        code, _, err = _run(capsys, *argv)
        assert code == EXIT_CONFIG and "error" in err

    def test_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("COVERGROUP_SEED", "7")
        _, out, _ = _run(capsys, "verify", "--suite", "hua", "--samples", "1", "--json")
        assert json.loads(out)["config"]["seed"] == 7
        monkeypatch.setenv("COVERGROUP_SEED", "x")
        assert _run(capsys, "verify", "--suite", "hua")[0] == EXIT_CONFIG

    def test_seed_changes_inputs(self):
        r1 = run_suite(SuiteConfig("hua", samples=2, seed=1, tol={"hua_roundtrip": 0.0}))
        r2 = run_suite(SuiteConfig("hua", samples=2, seed=2, tol={"hua_roundtrip": 0.0}))
        d1 = [f["inputs_digest"] for f in r1["checks"][0]["failures"]]
        d2 = [f["inputs_digest"] for f in r2["checks"][0]["failures"]]
        assert d1 != d2

    def test_unknown_suite(self):
        with pytest.raises(UnknownSuite):
            SuiteConfig("nope")


class TestComputations:
    def test_center(self, capsys):
        code, out, _ = _run(capsys, "center", "--n", "2", "--k", "1")
        rec = json.loads(out)
        assert code == EXIT_OK
        assert rec["tau"] == pytest.approx(6.283185307179586)
        assert np.array_equal(np.reshape(rec["matrix"], (5, 5)), np.eye(5))

    def test_mul_identity(self, capsys, tmp_path):
        a = cg.random_cover_element(3, 4)
        pa = _write(tmp_path, "a.json", cg.to_record(a))
        pe = _write(tmp_path, "e.json", cg.to_record(cg.identity(3)))
        code, out, _ = _run(capsys, "mul", pe, pa)
        rec = json.loads(out)
        assert code == EXIT_OK
        assert np.allclose(rec["matrix"], a.matrix.ravel(), atol=1e-12)
        assert rec["tau"] == pytest.approx(a.tau, abs=1e-12)
        assert rec["constraint_residual"] < 1e-7

    def test_act_deck(self, capsys, tmp_path):
        _, out, _ = _run(capsys, "center", "--n", "2", "--k", "1")
        pz = _write(tmp_path, "z.json", json.loads(out))
        pp = _write(tmp_path, "p.json", {"tau": 0.3, "y": [1.0, 0.0, 0.0]})
        code, out, _ = _run(capsys, "act", pz, pp)
        rec = json.loads(out)
        assert code == EXIT_OK
        assert rec["tau"] == pytest.approx(0.3 + 2 * np.pi, abs=1e-9)
        assert np.allclose(rec["y"], [1, 0, 0], atol=1e-9)

    def test_sample(self, capsys):
        code, out, _ = _run(capsys, "sample", "--n", "3", "--seed", "5", "--branch", "1")
        rec = json.loads(out)
        assert code == EXIT_OK and rec["n"] == 3 and rec["constraint_residual"] < 1e-7
        assert cg.from_record(rec).tau > np.pi

    def test_bad_record(self, capsys, tmp_path):
        p = _write(tmp_path, "bad.json", {"n": 2, "matrix": [0.0] * 25, "tau": 0.0})
        assert _run(capsys, "mul", p, p)[0] == EXIT_CONFIG

    def test_missing_file(self, capsys, tmp_path):
        assert _run(capsys, "act", str(tmp_path / "none.json"), str(tmp_path / "none.json"))[0] == EXIT_CONFIG

    def test_constraint_violation_rejected(self, capsys, tmp_path):
        rec = cg.to_record(cg.identity(2))
        rec["tau"] = 1.0
        p = _write(tmp_path, "a.json", rec)
        assert _run(capsys, "mul", p, p)[0] == EXIT_CONFIG
