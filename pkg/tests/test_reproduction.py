"""
Tests for the reproduction targets at toy scale
"""
import pandas as pd
import pytest

from src.adapters.cli.config import build_run_config, load_config_file, reproduce_config_path
from src.config.constants import PDF_COLUMNS, REGRESSION_COLUMNS, SWEEP_COLUMNS, TIMING_COLUMNS
from src.error_trace.exceptions import UsageError
from src.evaluation.reproduction import TARGETS, ReproductionRunner


def _runner(output_dir, **values) -> ReproductionRunner:
    return ReproductionRunner(build_run_config({}, {"output_dir": str(output_dir), **values}))


class TestCannedConfigs:

    @pytest.mark.parametrize("target", TARGETS)
    def test_every_target_has_a_valid_config(self, target):
        values = load_config_file(reproduce_config_path(target))
        config = build_run_config(values, {})
        assert config.seed >= 0

    def test_fig5_ladder(self):
        config = build_run_config(load_config_file(reproduce_config_path("fig5")), {})
        assert config.n_values == [4, 8]
        assert config.inr_values == [0.0, 15.0]
        assert config.steps == 21

    @pytest.mark.parametrize("target,n_values", [("fig3", [4, 16, 64]), ("fig4", [4, 8, 16])])
    def test_density_figure_ladders(self, target, n_values):
        config = build_run_config(load_config_file(reproduce_config_path(target)), {})
        assert config.n_values == n_values


class TestTargets:

    def test_density_figure(self, output_dir):
        runner = _runner(output_dir, n_values="4", methods="exact,gamma_fit,mc", mc_samples=2000, bins=40)
        paths = runner.run("fig3")
        assert [p.name for p in paths] == ["fig3_n4.csv"]
        frame = pd.read_csv(paths[0])
        assert list(frame.columns) == PDF_COLUMNS
        assert set(frame["method"]) == {"cf_fft", "gamma_fit", "histogram"}

    def test_snr_figure(self, output_dir):
        runner = _runner(output_dir, n_values="4", inr_values="0,15", methods="gamma-closed,asymptotic",
                         start=0.0, stop=20.0, steps=3)
        paths = runner.run("fig5")
        assert sorted(p.name for p in paths) == ["fig5_n4_inr0.csv", "fig5_n4_inr15.csv"]
        frame = pd.read_csv(paths[0])
        assert list(frame.columns) == SWEEP_COLUMNS
        assert len(frame) == 6

    def test_inr_figure(self, output_dir):
        runner = _runner(output_dir, n_values="4", methods="gamma-numeric", start=0.0, stop=10.0, steps=3)
        paths = runner.run("fig6")
        assert [p.name for p in paths] == ["fig6_n4.csv"]

    def test_outage_figure_needs_axis_range(self, output_dir):
        with pytest.raises(UsageError):
            _runner(output_dir, methods="gamma-closed").run("fig5")

    def test_surrogate_targets(self, output_dir):
        runner = _runner(output_dir, records=120, label_method="gamma_numeric", max_epochs=2, patience=2,
                         timing_samples=5, seed=4)
        regression = pd.read_csv(runner.run("fig8")[0])
        assert list(regression.columns) == REGRESSION_COLUMNS
        assert (output_dir / "model.json").exists()

        # the dataset written by the first run is reused
        runner = _runner(output_dir, records=120, max_epochs=2, patience=2, timing_samples=5, seed=4,
                         dataset=str(output_dir / "dataset.csv"))
        timing = pd.read_csv(runner.run("table1")[0])
        assert list(timing.columns) == TIMING_COLUMNS
        assert timing["approach"].tolist() == ["exact", "gamma", "dnn"]
        assert (timing["n_samples"] <= 5).all()
