"""
Reproduction Runner - Canned figure and table data at desk scale

Each target writes one or more CSV files that the evaluate command can
re-read, and returns the list of written paths.
"""
from pathlib import Path
from typing import TYPE_CHECKING, Dict, List, Tuple
import time

import numpy as np
import pandas as pd

from src.config.constants import (
    PDF_COLUMNS,
    REGRESSION_COLUMNS,
    TIMING_COLUMNS,
    TRAINING_COLUMNS,
    ChannelVariable,
    OutageMethod,
    SweepAxis,
)
from src.domain.entities.pdf_grid import PdfGrid
from src.domain.entities.surrogate import MlpModel, TrainReport
from src.domain.value_objects.grid_spec import GridSpec
from src.error_trace.exceptions import RisOutageError, UsageError
from src.application.services.dataset_service import DatasetService
from src.application.services.montecarlo_service import MonteCarloService
from src.application.services.outage_service import OutageService
from src.application.services.pdf_service import DEFAULT_X_GRID, DEFAULT_Y_GRID, PdfService
from src.application.services.surrogate_service import SurrogateService
from src.application.services.sweep_service import SweepService, axis_values
from src.application.services.training_service import TrainingService, split_xy
from src.infrastructure.repositories.dataset_repository import DatasetRepository
from src.infrastructure.repositories.model_repository import ModelRepository
from src.utilities.logger import get_logger

if TYPE_CHECKING:
    from src.adapters.cli.config import RunConfig

logger = get_logger(__name__)

TARGETS = ("fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "table1")


def pdf_frame(grids: List[PdfGrid]) -> pd.DataFrame:
    """Stack density grids into one value,density,method table"""
    return pd.concat([grid.to_frame() for grid in grids], ignore_index=True)[PDF_COLUMNS]


def pdf_grids(
    variable: ChannelVariable,
    config: "RunConfig",
    n_elements: int,
    pdf_service: PdfService,
    mc_service: MonteCarloService,
    methods: List[str],
) -> List[PdfGrid]:
    """
    Densities of X or Y for one N by each requested method

    The gamma fit is evaluated on the exact grid's support when the exact
    grid is requested, on the histogram's otherwise.
    """
    params = config.system_params(n_elements=n_elements)
    grids: Dict[str, PdfGrid] = {}
    if "exact" in methods:
        base = DEFAULT_X_GRID if variable == ChannelVariable.X else DEFAULT_Y_GRID
        spec = GridSpec(n_points=config.points, extent_sd=base.extent_sd) if config.points else base
        if variable == ChannelVariable.X:
            grids["exact"] = pdf_service.pdf_x_exact(params, spec)
        else:
            grids["exact"] = pdf_service.pdf_y_exact(params, spec)
    if "mc" in methods:
        grids["mc"] = mc_service.empirical_pdf(variable, params, config.mc_config(), config.bins)
    if "gamma_fit" in methods:
        reference = grids.get("exact") or grids.get("mc")
        support = reference.support if reference is not None else np.linspace(0.0, _default_upper(variable, params, pdf_service), 512)
        if variable == ChannelVariable.X:
            grids["gamma_fit"] = pdf_service.gamma_pdf_x(params, support)
        else:
            grids["gamma_fit"] = pdf_service.gamma_pdf_y(params, support)
    return [grids[m] for m in methods if m in grids]


def _default_upper(variable: ChannelVariable, params, pdf_service: PdfService) -> float:
    if variable == ChannelVariable.X:
        mean, variance = pdf_service.moments_x(params)
        return mean + DEFAULT_X_GRID.extent_sd * np.sqrt(variance)
    mean = pdf_service.mean_y2(params)
    sd = np.sqrt(pdf_service.second_moment_y2(params) - mean ** 2)
    return float(np.sqrt(mean + DEFAULT_Y_GRID.extent_sd * sd))


class ReproductionRunner:
    """Runs one reproduce target with its canned configuration"""

    def __init__(self, config: "RunConfig"):
        self.config = config
        self.output_dir = Path(config.output_dir)
        self.repository = DatasetRepository()
        self.pdf_service = PdfService()
        self.outage_service = OutageService(self.pdf_service)
        self.mc_service = MonteCarloService(workers=config.workers)
        self.sweep_service = SweepService(self.outage_service, self.mc_service, workers=config.workers)
        self.surrogate_service = SurrogateService()

    def run(self, target: str) -> List[Path]:
        if target not in TARGETS:
            raise UsageError(f"unknown reproduce target {target}", details={"targets": list(TARGETS)})
        logger.info(f"reproduce {target} into {self.output_dir}")
        if target in ("fig3", "fig4"):
            return self._pdf_figure(target)
        if target in ("fig5", "fig6"):
            return self._outage_figure(target)
        return self._surrogate_target(target)

    def _pdf_figure(self, target: str) -> List[Path]:
        variable = ChannelVariable.X if target == "fig3" else ChannelVariable.Y
        methods = self.config.pdf_methods()
        paths = []
        for n_elements in self.config.n_values or [self.config.n]:
            grids = pdf_grids(variable, self.config, n_elements, self.pdf_service, self.mc_service, methods)
            paths.append(self.repository.write_frame(pdf_frame(grids), self.output_dir / f"{target}_n{n_elements}.csv"))
        return paths

    def _outage_figure(self, target: str) -> List[Path]:
        config = self.config
        axis = config.axis or (SweepAxis.SNR_DB if target == "fig5" else SweepAxis.INR_DB)
        if config.start is None or config.stop is None or config.steps is None:
            raise UsageError(f"{target} needs start, stop and steps")
        values = axis_values(config.start, config.stop, config.steps, axis)
        methods = config.outage_methods()
        inr_values = config.inr_values or [config.inr_db]
        if axis == SweepAxis.INR_DB:
            inr_values = [config.inr_db]

        paths = []
        for n_elements in config.n_values or [config.n]:
            for inr_db in inr_values:
                base = config.system_params(n_elements=n_elements, inr_db=inr_db)
                frame = self.sweep_service.sweep(base, axis, values, methods, config.mc_config())
                name = f"{target}_n{n_elements}.csv" if axis == SweepAxis.INR_DB else f"{target}_n{n_elements}_inr{inr_db:g}.csv"
                paths.append(self.repository.write_frame(frame, self.output_dir / name))
        return paths

    def surrogate_pipeline(self) -> Tuple[Tuple[pd.DataFrame, pd.DataFrame, pd.DataFrame], MlpModel, TrainReport]:
        """Generate (or load) the dataset, split it, train and score the network"""
        config = self.config
        dataset_service = DatasetService(mc_service=MonteCarloService(workers=1), workers=config.workers)
        if config.dataset and Path(config.dataset).exists():
            dataset = self.repository.read_dataset(config.dataset)
        else:
            path = Path(config.dataset) if config.dataset else self.output_dir / "dataset.csv"
            dataset = dataset_service.generate_dataset(config.records, config.label_method, config.seed, path=path)
        train, test, validation = dataset_service.split_dataset(dataset, seed=config.seed)
        model, report = TrainingService(workers=config.workers).train_lm(
            train, validation, config.lm_hyper(), seed=config.seed, log_targets=config.log_targets
        )
        report.test_mse = self.surrogate_service.regression_metrics(model, test)["mse"]
        report.regression_r = self.surrogate_service.regression_metrics(model, validation)["r"]
        ModelRepository().save(model, self.output_dir / "model.json")
        return (train, test, validation), model, report

    def _surrogate_target(self, target: str) -> List[Path]:
        (train, test, validation), model, report = self.surrogate_pipeline()
        if target == "fig7":
            frame = pd.DataFrame(report.to_frame_rows(), columns=TRAINING_COLUMNS)
            return [self.repository.write_frame(frame, self.output_dir / "fig7_training.csv")]
        if target == "fig8":
            features, targets = split_xy(validation)
            frame = pd.DataFrame(
                {"p_out_true": targets, "p_out_pred": self.surrogate_service.predict_batch(model, features)},
                columns=REGRESSION_COLUMNS,
            )
            return [self.repository.write_frame(frame, self.output_dir / "fig8_regression.csv")]
        return [self.repository.write_frame(self.timing_table(test, model), self.output_dir / "table1.csv")]

    def timing_table(self, test: pd.DataFrame, model: MlpModel) -> pd.DataFrame:
        """
        Wall time and MSE of exact, gamma-based and surrogate outage on test records

        The MSE reference is the record's stored label.
        """
        rows = test.head(self.config.timing_samples)
        features, targets = split_xy(rows)
        scenarios = [self._scenario(row) for row in features]

        def timed(fn) -> Tuple[np.ndarray, float]:
            start = time.perf_counter()
            values = fn()
            return np.asarray(values, dtype=float), time.perf_counter() - start

        exact, exact_seconds = timed(lambda: [self._safe(self.outage_service.op_exact, p) for p in scenarios])
        gamma, gamma_seconds = timed(lambda: [
            self._safe(lambda q: self.outage_service.gamma_estimate(q, OutageMethod.GAMMA_NUMERIC), p)
            for p in scenarios
        ])
        dnn, dnn_seconds = timed(lambda: self.surrogate_service.predict_batch(model, features))

        table = []
        for name, values, seconds in (
            ("exact", exact, exact_seconds),
            ("gamma", gamma, gamma_seconds),
            ("dnn", dnn, dnn_seconds),
        ):
            valid = np.isfinite(values)
            mse = float(np.mean((values[valid] - targets[valid]) ** 2)) if valid.any() else float("nan")
            table.append([name, mse, seconds, int(valid.sum())])
        logger.info(f"timing: exact {exact_seconds:.3f}s, gamma {gamma_seconds:.3f}s, dnn {dnn_seconds:.4f}s")
        return pd.DataFrame(table, columns=TIMING_COLUMNS)

    def _scenario(self, row: np.ndarray):
        gamma_th_db, gamma_bar_db, sigma_sr, sigma_rd, sigma_ir, sigma_id, n_elements = row
        return self.config.system_params(
            n_elements=int(round(n_elements)),
            sigma_sr=sigma_sr,
            sigma_rd=sigma_rd,
            sigma_ir=sigma_ir,
            sigma_id=sigma_id,
            snr_db=gamma_bar_db,
            inr_db=0.0,
            gamma_th_db=gamma_th_db,
        )

    @staticmethod
    def _safe(fn, params) -> float:
        try:
            return fn(params).value
        except RisOutageError as e:
            logger.warning(f"timing point skipped: {e.message}")
            return float("nan")
