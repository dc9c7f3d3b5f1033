"""
Command-line runs through click's CliRunner.
"""

import pandas as pd
import pytest
from click.testing import CliRunner

from conftest import CONFIG_DIR
from kgraph_toolkit import __version__
from kgraph_toolkit.cli.main import EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_SOLVER, cli
from kgraph_toolkit.reports import HOMOTOPY_COLUMNS, PROFILE_COLUMNS, read_solution


def read_report(path):
    entries = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        key, _, value = line.partition(" = ")
        entries[key] = value
    return entries


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def nonexistence_config(hemisphere_config):
    hemisphere_config["domain"]["r0"] = 1.0
    hemisphere_config["problem"] = {"H": -2.0, "theorem": 1}
    hemisphere_config["solver"]["max_iter"] = 30
    return hemisphere_config


def run(runner, *args):
    return runner.invoke(cli, [str(a) for a in args])


class TestSolve:

    def test_hemisphere(self, runner, hemisphere_config, write_config, tmp_path):
        out = tmp_path / "out"
        result = run(runner, "solve", "--config", write_config(hemisphere_config), "--out", out)
        assert result.exit_code == 0, result.output
        assert "✓ Solved" in result.output
        for name in ("solution.kgraph", "homotopy.csv", "coefficients.txt", "barriers.txt", "flux.txt"):
            assert (out / name).exists()

        header, values = read_solution(out / "solution.kgraph")
        assert (header.kind, header.n, header.m_r, header.m_theta) == ("radial", 2, 32, 0)
        assert header.r0 == pytest.approx(0.8)
        assert values.shape == (33, 1)
        assert values[0, 0] - values[-1, 0] == pytest.approx(0.4, abs=5e-3)

        steps = pd.read_csv(out / "homotopy.csv")
        assert list(steps.columns) == HOMOTOPY_COLUMNS
        assert steps["sigma"].iloc[-1] == 1.0

        coefficients = read_report(out / "coefficients.txt")
        assert coefficients["elliptic"] == "true"
        barriers = read_report(out / "barriers.txt")
        assert barriers["height_barrier"].startswith("unavailable")
        flux = read_report(out / "flux.txt")
        assert float(flux["relative_residual"]) < 1e-2

    def test_grid_override(self, runner, hemisphere_config, write_config, tmp_path):
        out = tmp_path / "out"
        result = run(runner, "solve", "--config", write_config(hemisphere_config),
                     "--out", out, "--grid", 16)
        assert result.exit_code == 0, result.output
        header, _ = read_solution(out / "solution.kgraph")
        assert header.m_r == 16

    def test_nonexistence_stalls(self, runner, nonexistence_config, write_config, tmp_path):
        out = tmp_path / "out"
        result = run(runner, "solve", "--config", write_config(nonexistence_config), "--out", out)
        assert result.exit_code == EXIT_SOLVER
        assert "stalled" in result.output
        assert not (out / "solution.kgraph").exists()
        steps = pd.read_csv(out / "homotopy.csv")
        assert steps["sigma"].iloc[-1] < 1.0
        assert read_report(out / "hypotheses.txt")["verdict"] == "FAIL"

    def test_required_hypotheses(self, runner, nonexistence_config, write_config, tmp_path):
        out = tmp_path / "out"
        result = run(runner, "solve", "--config", write_config(nonexistence_config),
                     "--out", out, "--require-hypotheses")
        assert result.exit_code == EXIT_CHECK_FAILED
        assert (out / "hypotheses.txt").exists()
        assert not (out / "homotopy.csv").exists()

    def test_missing_model(self, runner, hemisphere_config, write_config, tmp_path):
        del hemisphere_config["model"]
        result = run(runner, "solve", "--config", write_config(hemisphere_config), "--out", tmp_path)
        assert result.exit_code == EXIT_CONFIG
        assert "model" in result.output

    def test_missing_file(self, runner, tmp_path):
        result = run(runner, "solve", "--config", tmp_path / "absent.yaml")
        assert result.exit_code == EXIT_CONFIG

    def test_deterministic_output(self, runner, hemisphere_config, write_config, tmp_path):
        path = write_config(hemisphere_config)
        for name in ("first", "second"):
            assert run(runner, "solve", "--config", path, "--out", tmp_path / name).exit_code == 0
        for name in ("solution.kgraph", "homotopy.csv", "flux.txt"):
            assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


class TestCheck:

    def test_theorem_1_passes(self, runner, tmp_path):
        result = run(runner, "check", "--config", CONFIG_DIR / "theorem1.yaml", "--out", tmp_path)
        assert result.exit_code == 0, result.output
        assert "Theorem 1: PASS" in result.output
        assert read_report(tmp_path / "hypotheses.txt")["verdict"] == "PASS"

    def test_theorem_3_from_ini(self, runner, tmp_path):
        result = run(runner, "check", "--config", CONFIG_DIR / "theorem3.ini", "--out", tmp_path)
        assert result.exit_code == 0, result.output
        report = read_report(tmp_path / "hypotheses.txt")
        assert float(report["F_r0"]) == pytest.approx(2.0)

    def test_failure(self, runner, nonexistence_config, write_config, tmp_path):
        result = run(runner, "check", "--config", write_config(nonexistence_config), "--out", tmp_path)
        assert result.exit_code == EXIT_CHECK_FAILED
        assert "Theorem 1: FAIL" in result.output

    def test_theorem_option(self, runner, hemisphere_config, write_config, tmp_path):
        path = write_config(hemisphere_config)
        assert run(runner, "check", "--config", path, "--out", tmp_path).exit_code == EXIT_CONFIG
        result = run(runner, "check", "--config", path, "--out", tmp_path, "--theorem", 3)
        assert result.exit_code == 0, result.output


class TestRotational:

    def test_unit_sphere(self, runner, tmp_path):
        result = run(runner, "rotational", "--config", CONFIG_DIR / "rotational_sphere.yaml",
                     "--out", tmp_path)
        assert result.exit_code == 0, result.output
        report = read_report(tmp_path / "rotational.txt")
        assert float(report["turning_radius"]) == pytest.approx(1.0, abs=1e-7)
        assert float(report["sphere_height"]) == pytest.approx(2.0, abs=1e-7)
        assert float(report["F_r0"]) == pytest.approx(2.0)
        profile = pd.read_csv(tmp_path / "profile.csv")
        assert list(profile.columns) == PROFILE_COLUMNS
        assert len(profile) == 401

    def test_hyperbolic_profile(self, runner, tmp_path):
        result = run(runner, "rotational", "--config", CONFIG_DIR / "hyperbolic_profile.yaml",
                     "--out", tmp_path)
        assert result.exit_code == 0, result.output
        report = read_report(tmp_path / "rotational.txt")
        assert float(report["turning_radius"]) == pytest.approx(1.0986122886681098, abs=1e-7)

    def test_unbounded_profile(self, runner, write_config, tmp_path):
        config = {
            "model": {"leaf": "rotsym", "xi": {"name": "sinh"}},
            "domain": {"shape": "disc", "r0": 1.0},
            "problem": {"H0": -0.4},
        }
        result = run(runner, "rotational", "--config", write_config(config), "--out", tmp_path)
        assert result.exit_code == EXIT_SOLVER
        assert read_report(tmp_path / "rotational.txt")["profile"].startswith("unbounded")

    def test_needs_a_constant_curvature(self, runner, hemisphere_config, write_config, tmp_path):
        hemisphere_config["problem"] = {"H": {"name": "exp_bump"}}
        result = run(runner, "rotational", "--config", write_config(hemisphere_config), "--out", tmp_path)
        assert result.exit_code == EXIT_CONFIG


class TestMms:

    def test_hemisphere(self, runner, hemisphere_config, write_config, tmp_path):
        result = run(runner, "mms", "--config", write_config(hemisphere_config), "--out", tmp_path)
        assert result.exit_code == 0, result.output
        table = pd.read_csv(tmp_path / "convergence.csv")
        assert list(table.columns) == ["h", "max_error", "observed_order"]
        assert len(table) == 2
        assert pd.isna(table["observed_order"].iloc[0])
        assert table["observed_order"].iloc[1] > 1.5

    def test_polar_grid(self, runner, tmp_path):
        result = run(runner, "mms", "--config", CONFIG_DIR / "mms_polar.yaml", "--out", tmp_path)
        assert result.exit_code == 0, result.output
        table = pd.read_csv(tmp_path / "convergence.csv")
        assert len(table) == 3
        assert (table["observed_order"].iloc[1:] >= 1.6).all()

    def test_needs_an_exact_solution(self, runner, hemisphere_config, write_config, tmp_path):
        del hemisphere_config["problem"]["exact"]
        result = run(runner, "mms", "--config", write_config(hemisphere_config), "--out", tmp_path)
        assert result.exit_code == EXIT_CONFIG


class TestFlux:

    def test_hemisphere(self, runner, hemisphere_config, write_config, tmp_path):
        result = run(runner, "flux", "--config", write_config(hemisphere_config), "--out", tmp_path)
        assert result.exit_code == 0, result.output
        report = read_report(tmp_path / "flux.txt")
        assert float(report["lhs"]) == pytest.approx(-2.0 * 3.141592653589793 * 0.64, rel=1e-12)
        assert float(report["relative_residual"]) < 1e-2


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output
