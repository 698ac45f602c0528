"""Command dispatch, config validation, output formats, determinism."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

from indefsl.cli import main, run


def write_cfg(tmp_path, name, cfg):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def read_csv(path):
    lines = path.read_text().strip().split("\n")
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


FREE_MEVAL = {
    "command": "m-eval",
    "evaluator": {"kind": "free"},
    "lambdas": {"points": [[0.0, 1.0]]},
    "output": {"csv": "m.csv"},
}


class TestMEval:
    def test_free_row(self, tmp_path):
        cfg = write_cfg(tmp_path, "c.json", FREE_MEVAL)
        out = tmp_path / "out"
        assert run("m-eval", cfg, str(out)) == 0
        header, rows = read_csv(out / "m.csv")
        assert header == ["re_lambda", "im_lambda", "re_m", "im_m"]
        assert len(rows) == 1
        want = math.sqrt(0.5)
        assert float(rows[0][2]) == pytest.approx(want, rel=1e-12)
        assert float(rows[0][3]) == pytest.approx(want, rel=1e-12)
        meta = json.loads((out / "m.meta.json").read_text())
        assert meta["command"] == "m-eval"
        assert "config_sha256" in meta

    def test_log_polar_grid(self, tmp_path):
        cfg = dict(FREE_MEVAL)
        cfg["lambdas"] = {"log_polar": {"abs_min": 0.1, "abs_max": 10.0,
                                        "n_abs": 3, "n_arg": 4}}
        path = write_cfg(tmp_path, "c.json", cfg)
        out = tmp_path / "out"
        assert run("m-eval", path, str(out)) == 0
        _, rows = read_csv(out / "m.csv")
        assert len(rows) == 12

    def test_numeric_evaluator(self, tmp_path, warm_kernels):
        cfg = {
            "command": "m-eval",
            "evaluator": {"kind": "numeric", "problem": {
                "side": "plus",
                "q": {"pieces": [{"interval": [0.0, 1.0],
                                  "fn": {"type": "constant", "value": -5.0}}]},
                "weight": {"pieces": [{"interval": [0.0, None],
                                       "fn": {"type": "constant", "value": 1.0}}]},
            }},
            "lambdas": {"points": [[0.5, 0.5]]},
        }
        path = write_cfg(tmp_path, "c.json", cfg)
        assert run("m-eval", path, str(tmp_path / "out")) == 0

    def test_determinism_bit_identical(self, tmp_path):
        cfg = dict(FREE_MEVAL)
        cfg["lambdas"] = {"log_polar": {"abs_min": 0.1, "abs_max": 10.0,
                                        "n_abs": 5, "n_arg": 5}}
        path = write_cfg(tmp_path, "c.json", cfg)
        run("m-eval", path, str(tmp_path / "a"))
        run("m-eval", path, str(tmp_path / "b"))
        assert (tmp_path / "a" / "m.csv").read_bytes() == \
            (tmp_path / "b" / "m.csv").read_bytes()


class TestConfigErrors:
    def test_alpha_precondition_named(self, tmp_path, capsys):
        cfg = {"command": "m-eval",
               "evaluator": {"kind": "power_weight", "alpha": -1.5},
               "lambdas": {"points": [[0.0, 1.0]]}}
        path = write_cfg(tmp_path, "c.json", cfg)
        assert run("m-eval", path, str(tmp_path / "out")) == 2
        err = capsys.readouterr().err
        assert "alpha > -1" in err

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = dict(FREE_MEVAL)
        cfg["surprise"] = 1
        path = write_cfg(tmp_path, "c.json", cfg)
        assert run("m-eval", path, str(tmp_path / "out")) == 2
        assert "unknown key" in capsys.readouterr().err

    def test_command_mismatch(self, tmp_path):
        path = write_cfg(tmp_path, "c.json", FREE_MEVAL)
        assert run("classify", path, str(tmp_path / "out")) == 2

    def test_invalid_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        assert run("m-eval", str(p), str(tmp_path / "out")) == 2

    def test_numerical_failure_exit_one(self, tmp_path, warm_kernels):
        # real lam on the oscillatory branch: NonDecayingTail -> exit 1
        cfg = {
            "command": "m-eval",
            "evaluator": {"kind": "numeric", "problem": {
                "side": "plus",
                "q": {"pieces": [{"interval": [0.0, 1.0],
                                  "fn": {"type": "constant", "value": 0.0}}]},
                "weight": {"pieces": [{"interval": [0.0, None],
                                       "fn": {"type": "constant", "value": 1.0}}]},
            }},
            "lambdas": {"points": [[1.0, 0.0]]},
        }
        path = write_cfg(tmp_path, "c.json", cfg)
        out = tmp_path / "out"
        assert run("m-eval", path, str(out)) == 1
        record = json.loads((out / "error.json").read_text())
        assert record["error"] == "NonDecayingTail"


class TestCriterionScan:
    def test_q0_scan_summary(self, tmp_path):
        cfg = {
            "command": "criterion-scan",
            "pair": {"even_mirror": {"kind": "example_q0"}},
            "region": {"kind": "near_zero", "R": 0.01,
                       "radial_points": 15, "angular_points": 7, "decades": 3},
            "ratio": "necessary",
            "output": {"csv": "scan.csv", "summary": "scan.json"},
        }
        path = write_cfg(tmp_path, "c.json", cfg)
        out = tmp_path / "out"
        assert run("criterion-scan", path, str(out)) == 0
        header, rows = read_csv(out / "scan.csv")
        assert header == ["abs_lambda", "arg_lambda", "ratio"]
        assert len(rows) == 15 * 7
        summary = json.loads((out / "scan.json").read_text())
        assert summary["verdict"] == "growth_detected"
        assert abs(summary["growth_exponent"] - 0.5) < 0.05

    def test_optimized_shift_mode(self, tmp_path):
        cfg = {
            "command": "criterion-scan",
            "pair": {"even_mirror": {"kind": "example_a1"}},
            "region": {"kind": "near_zero", "R": 0.001,
                       "radial_points": 10, "angular_points": 5, "decades": 2},
            "shift": {"mode": "optimize"},
            "output": {"csv": "scan.csv", "summary": "scan.json"},
        }
        path = write_cfg(tmp_path, "c.json", cfg)
        out = tmp_path / "out"
        assert run("criterion-scan", path, str(out)) == 0
        summary = json.loads((out / "scan.json").read_text())
        assert summary["verdict"] == "bounded_ratio"


class TestOtherCommands:
    def test_zone_build(self, tmp_path):
        cfg = {
            "command": "zone-build",
            "zone_data": {"mu_r0": 0.0, "bands": [[1.0, 2.0]],
                          "xi": [1.5], "eps": [1]},
        }
        path = write_cfg(tmp_path, "c.json", cfg)
        out = tmp_path / "out"
        assert run("zone-build", path, str(out)) == 0
        text = (out / "zone_polynomials.csv").read_text()
        assert text.startswith("poly,power,coefficient")
        summary = json.loads((out / "zone_build.json").read_text())
        assert summary["residual"] < 1e-10
        assert len(summary["taus"]) == 2

    def test_eigs_find_free_empty(self, tmp_path):
        cfg = {
            "command": "eigs-find",
            "pair": {"even_mirror": {"kind": "free"}},
            "rect": [-3.0, 3.0, 0.1, 3.0],
        }
        path = write_cfg(tmp_path, "c.json", cfg)
        out = tmp_path / "out"
        assert run("eigs-find", path, str(out)) == 0
        header, rows = read_csv(out / "nonreal_eigs.csv")
        assert header == ["re", "im", "multiplicity"]
        assert rows == []

    def test_discrete_spectrum(self, tmp_path):
        cfg = {
            "command": "discrete-spectrum",
            "problem": {"even_mirror": {
                "side": "plus",
                "q": {"pieces": [{"interval": [0.0, 1.0],
                                  "fn": {"type": "constant", "value": -5.0}}]},
                "weight": {"pieces": [{"interval": [0.0, None],
                                       "fn": {"type": "constant", "value": 1.0}}]},
                "X": 20.0}},
            "grid": {"X": 20.0, "n": 400},
        }
        path = write_cfg(tmp_path, "c.json", cfg)
        out = tmp_path / "out"
        assert run("discrete-spectrum", path, str(out)) == 0
        header, rows = read_csv(out / "discrete_spectrum.csv")
        assert header == ["re", "im", "kind"]
        kinds = {r[2] for r in rows}
        assert "pair" in kinds and "real" in kinds

    def test_discrete_functional(self, tmp_path):
        cfg = {
            "command": "discrete-functional",
            "problem": {"even_mirror": {
                "side": "plus",
                "q": {"pieces": [{"interval": [0.0, 1.0],
                                  "fn": {"type": "constant", "value": 0.0}}]},
                "weight": {"pieces": [{"interval": [0.0, None],
                                       "fn": {"type": "constant", "value": 1.0}}]},
                "X": 10.0}},
            "grid": {"X": 10.0, "n": 64},
            "functional": {"eps": [0.1, 0.01], "trials": 3, "quad_points": 4},
            "seed": 7,
        }
        path = write_cfg(tmp_path, "c.json", cfg)
        out = tmp_path / "out"
        assert run("discrete-functional", path, str(out)) == 0
        header, rows = read_csv(out / "functional_ladder.csv")
        assert header == ["eps", "value", "error_bar"]
        assert len(rows) == 2

    def test_classify_command(self, tmp_path):
        cfg = {
            "command": "classify",
            "pair": {"even_mirror": {"kind": "example_a1"}},
            "R_zero": 0.001,
        }
        path = write_cfg(tmp_path, "c.json", cfg)
        out = tmp_path / "out"
        assert run("classify", path, str(out)) == 0
        rep = json.loads((out / "classification.json").read_text())
        assert rep["critical_point_zero"] == "bounded_ratio"
        assert rep["j_nonneg"] == "likely"


class TestEntryPoint:
    def test_main_via_argv(self, tmp_path):
        path = write_cfg(tmp_path, "c.json", FREE_MEVAL)
        code = main(["m-eval", "--config", path, "--out", str(tmp_path / "o")])
        assert code == 0

    def test_module_invocation(self, tmp_path):
        path = write_cfg(tmp_path, "c.json", FREE_MEVAL)
        proc = subprocess.run([sys.executable, "-m", "indefsl.cli", "m-eval",
                               "--config", path, "--out", str(tmp_path / "o")],
                              capture_output=True, text=True)
        assert proc.returncode == 0
