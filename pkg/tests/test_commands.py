import io
import json
import logging

import pandas as pd
import pytest
from click.testing import CliRunner

from app.commands import cli
from app.core.exception import EXIT_NUMERICAL, AppException


@pytest.fixture
def runner():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield CliRunner()
    root.handlers = handlers
    root.setLevel(level)


def run(runner, *args):
    return runner.invoke(cli, ["--log-level", "ERROR", *args])


def split_csv(text: str) -> tuple[dict, pd.DataFrame]:
    header, body = text.split("\n", 1)
    assert header.startswith("# ")
    return json.loads(header[2:]), pd.read_csv(io.StringIO(body))


def test_gfi_table(runner):
    result = run(runner, "gfi", "--energy", "0")
    assert result.exit_code == 0
    config, table = split_csv(result.stdout)
    assert config["command"] == "gfi"
    assert config["options"]["n_modes"] == 2
    values = dict(zip(table["quantity"], table["value"]))
    assert values["GFI"] == pytest.approx(2.0)
    assert values["QFI"] == pytest.approx(4.0)
    assert values["eg_balanced"] == pytest.approx(1.0)


def test_gfi_reference_energy(runner):
    result = run(runner, "gfi", "--energy", "4")
    _, table = split_csv(result.stdout)
    values = dict(zip(table["quantity"], table["value"]))
    assert values["GFI"] == pytest.approx(3.78885, abs=1e-5)
    assert values["separable_balanced"] == pytest.approx(3.63299, abs=1e-5)


def test_gfi_rejects_negative_energy(runner):
    result = run(runner, "gfi", "--energy", "-1")
    assert result.exit_code == 2


def test_gfi_without_amplitude(runner):
    result = run(runner, "gfi", "--alpha", "0", "--energy", "4")
    assert result.exit_code == 0
    _, table = split_csv(result.stdout)
    values = dict(zip(table["quantity"], table["value"]))
    assert values["GFI"] == 0.0
    assert values["eg_balanced"] == pytest.approx(3.78885 / 3.63299, abs=1e-4)


def test_gfi_rejects_inconsistent_mode_count(runner):
    result = run(runner, "gfi", "--n-modes", "2", "--v11-sq", "0.1")
    assert result.exit_code == 2
    assert "error.fisher.invalid-mode-count" in result.stderr


def test_sweep_eg_without_amplitude(runner):
    result = run(runner, "sweep-eg", "--alpha", "0", "--param-grid", "2", "--energy-grid", "0,4")
    assert result.exit_code == 0
    _, df = split_csv(result.stdout)
    assert df["eg"].tolist() == pytest.approx([1.0, 3.78885 / 3.63299], abs=1e-4)


def test_fir_map_rejects_zero_amplitude(runner):
    result = run(runner, "fir-map", "--alpha", "0", "--theta-steps", "3")
    assert result.exit_code == 2
    assert "error.fisher.zero-amplitude" in result.stderr


def test_sweep_eg_default_grid(runner):
    result = run(runner, "sweep-eg")
    assert result.exit_code == 0
    config, df = split_csv(result.stdout)
    assert list(df.columns) == ["E", "param", "eg"]
    assert len(df) == 7 * 42
    assert (df.loc[df["E"] == 0.0, "eg"] == 1.0).all()
    assert len(config["options"]["energy_grid"]) == 42


def test_sweep_eg_unbalanced(runner):
    result = run(runner, "sweep-eg", "--mode", "unbalanced", "--param-grid", "0.5", "--energy-grid", "0,100000000")
    _, df = split_csv(result.stdout)
    assert df["eg"].tolist() == pytest.approx([1.0, 4.0 / 3.0], abs=1e-3)


def test_sweep_eg_rejects_bad_grid(runner):
    assert run(runner, "sweep-eg", "--param-grid", "2.5").exit_code == 2
    assert run(runner, "sweep-eg", "--mode", "unbalanced", "--param-grid", "1.5").exit_code == 2
    assert run(runner, "sweep-eg", "--energy-grid", "1,x").exit_code == 2


def test_fir_map_is_deterministic(runner):
    first = run(runner, "fir-map", "--theta-steps", "3")
    second = run(runner, "fir-map", "--theta-steps", "3")
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    _, df = split_csv(first.stdout)
    assert len(df) == 9
    center = df[(df["theta1"].abs() < 1e-12) & (df["theta2"].abs() < 1e-12)]
    assert center["fir"].iloc[0] == pytest.approx(1.0, abs=1e-3)


def test_noniso_map_is_symmetric(runner):
    result = run(runner, "noniso-map", "--steps", "2", "--n1-max", "1", "--n2-max", "1")
    assert result.exit_code == 0
    _, df = split_csv(result.stdout)
    grid = df.pivot(index="n1", columns="n2", values="best_value").to_numpy()
    assert grid[0, 1] == pytest.approx(grid[1, 0], rel=1e-6)


def test_optimize_json(runner):
    result = run(runner, "optimize", "--energy", "4")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["config"]["options"]["n1"] == 0.0
    assert payload["result"]["best_value"] == pytest.approx(3.78885, abs=1e-5)
    assert payload["result"]["converged"] is True


def test_mc_crb_requires_seed(runner):
    assert run(runner, "mc-crb").exit_code == 2


def test_mc_crb_rejects_small_experiments(runner):
    assert run(runner, "mc-crb", "--seed", "1", "--m", "10").exit_code == 2


def test_mc_crb_writes_file(runner, tmp_path):
    out = tmp_path / "report.json"
    result = run(runner, "mc-crb", "--seed", "3", "--m", "1000", "--reps", "100", "--out", str(out))
    assert result.exit_code == 0
    assert result.stdout == ""
    payload = json.loads(out.read_text())
    assert payload["result"]["seed"] == 3
    assert payload["result"]["receiver"] == "heterodyne"
    assert payload["result"]["crb"] == pytest.approx(1.0 / (1000 * 2.0))


@pytest.mark.slow
def test_mc_crb_heterodyne_saturates_the_bound(runner):
    result = run(runner, "mc-crb", "--receiver", "heterodyne", "--m", "100000", "--reps", "200", "--seed", "7")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert 0.9 <= payload["result"]["ratio"] <= 1.15


def test_numerical_failure_exit_code(runner, monkeypatch):
    def failing():
        raise AppException(error_code="error.optimizer.not-converged", exit_code=EXIT_NUMERICAL)

    monkeypatch.setattr("app.commands.optimize_command.get_run_orchestrator", failing)
    result = run(runner, "optimize")
    assert result.exit_code == 3
    assert result.stdout == ""
    assert '"error_code": "error.optimizer.not-converged"' in result.stderr


def test_unexpected_failure_exit_code(runner, monkeypatch):
    def failing():
        raise RuntimeError("boom")

    monkeypatch.setattr("app.commands.gfi_command.get_run_orchestrator", failing)
    result = run(runner, "gfi")
    assert result.exit_code == 1
    assert "error.internal.unexpected" in result.stderr
