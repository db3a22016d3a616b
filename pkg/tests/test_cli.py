import json
import math
import subprocess
import sys

import pytest

CONFIG = {
    "problem": "helmholtz",
    "domain": {"type": "interval_union", "intervals": [[-math.pi, math.pi]]},
    "potential": {"type": "constant", "v0": 0.75},
    "weight": "unweighted",
    "discretization": {"cells_per_interval": 24, "quad_points": 8, "num_curves": 6},
    "sweep": {"lambda_min": 3.0, "lambda_max": 5.0, "steps": 40,
              "refine_tol": 1e-8, "cluster_tol": 1e-6},
}


def run_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "teig", *argv], capture_output=True, text=True
    )


def write_config(tmp_path, config=CONFIG, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(config))
    return path


class TestExitCodes:
    def test_missing_config_is_config_error(self, tmp_path):
        out = run_cli("find", "--config", str(tmp_path / "nope.json"),
                      "--out", str(tmp_path / "r.json"))
        assert out.returncode == 2
        err = json.loads(out.stderr)
        assert err["error"] == "ValidationError"

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda c: c.update(problem="wave"),
            lambda c: c["domain"].update(type="ball", dim=3, radius=1.0),
            lambda c: c["potential"].update(v0=-1.0),
            lambda c: c["sweep"].update(steps=1),
            lambda c: c["domain"].update(intervals=[[0.0, 2.0], [1.0, 3.0]]),
            lambda c: c["discretization"].update(cells_per_interval=2),
        ],
    )
    def test_invalid_configs_exit_two_with_json(self, tmp_path, mutate):
        config = json.loads(json.dumps(CONFIG))
        mutate(config)
        path = write_config(tmp_path, config)
        out = run_cli("find", "--config", str(path), "--out", str(tmp_path / "r.json"))
        assert out.returncode == 2
        parsed = json.loads(out.stderr)
        assert "error" in parsed and "message" in parsed

    def test_not_json_is_config_error(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        out = run_cli("find", "--config", str(path), "--out", str(tmp_path / "r.json"))
        assert out.returncode == 2


class TestFindAndSweep:
    def test_find_reports_eigenvalue_near_four(self, tmp_path):
        path = write_config(tmp_path)
        out_path = tmp_path / "report.json"
        res = run_cli("find", "--config", str(path), "--out", str(out_path))
        assert res.returncode == 0, res.stderr
        report = json.loads(out_path.read_text())
        lams = [e["lambda"] for e in report["transmission_eigenvalues"]]
        assert any(abs(l - 4.0) < 0.1 for l in lams)

    def test_sweep_csv_line_count(self, tmp_path):
        config = json.loads(json.dumps(CONFIG))
        config["sweep"]["steps"] = 2
        config["discretization"]["num_curves"] = 3
        path = write_config(tmp_path, config)
        out_path = tmp_path / "curves.csv"
        res = run_cli("sweep", "--config", str(path), "--out-curves", str(out_path))
        assert res.returncode == 0, res.stderr
        lines = out_path.read_text().strip().split("\n")
        assert len(lines) == 3  # header + 2 grid rows
        assert lines[0] == "lambda,mu_1,mu_2,mu_3"

    def test_find_deterministic_bytes(self, tmp_path):
        path = write_config(tmp_path)
        outs = []
        for name in ("a.json", "b.json"):
            out_path = tmp_path / name
            res = run_cli("find", "--config", str(path), "--out", str(out_path))
            assert res.returncode == 0
            outs.append(out_path.read_bytes())
        assert outs[0] == outs[1]


class TestRadial:
    def test_reports_four(self, tmp_path):
        res = run_cli(
            "radial", "--problem", "helmholtz", "--dim", "1",
            "--radius", "3.141592653589793", "--v0", "0.75",
            "--lmax", "0", "--lambda-max", "5",
        )
        assert res.returncode == 0, res.stderr
        payload = json.loads(res.stdout)
        lams = [e["lambda"] for e in payload["transmission_eigenvalues"]]
        assert any(abs(l - 4.0) < 1e-8 for l in lams)

    def test_degenerate_contrast_is_config_error(self):
        res = run_cli(
            "radial", "--problem", "helmholtz", "--dim", "1",
            "--radius", "1.0", "--v0", "1.0", "--lmax", "0", "--lambda-max", "5",
        )
        assert res.returncode == 2
        assert json.loads(res.stderr)["error"] == "HelmholtzContrastDegenerate"


class TestExperimentCommands:
    def test_scaling_pass_exit_zero(self, tmp_path):
        out_path = tmp_path / "scaling.json"
        res = run_cli("scaling", "--epsilons", "0.5", "--out", str(out_path))
        assert res.returncode == 0, res.stderr
        payload = json.loads(out_path.read_text())
        assert payload["verdict"] == "Pass"
        assert payload["margins"]["tolerance"] == 1e-8

    def test_hypothesis_report_only(self):
        res = run_cli(
            "hypothesis", "--dim", "1", "--radius", "0.5", "--v0", "2.0",
            "--lambda-max", "5", "--steps", "100",
        )
        assert res.returncode == 0
        assert json.loads(res.stdout)["verdict"] == "Report-only"

    def test_count_insufficient_is_config_error(self):
        res = run_cli("count", "--dim", "1", "--x-values", "2,3")
        assert res.returncode == 2
        assert json.loads(res.stderr)["error"] == "InsufficientCounts"


class TestInProcessEntryPoint:
    def test_run_cli_alias(self, capsys):
        from teig.cli import run_cli as entry

        code = entry(
            ["radial", "--problem", "helmholtz", "--dim", "3",
             "--radius", "3.141592653589793", "--v0", "0.75",
             "--lmax", "0", "--lambda-max", "5"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert any(
            abs(e["lambda"] - 4.0) < 1e-8 for e in payload["transmission_eigenvalues"]
        )
