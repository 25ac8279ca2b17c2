"""
Command Handlers - One function per subcommand

Handlers take the merged RunConfig plus the parsed namespace, do the work
through the application services and return a CommandResult; printing is
left to the app.
"""
from argparse import Namespace
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

from src.config.constants import OUTAGE_COLUMNS, TARGET_COLUMN, ChannelVariable, OutageMethod
from src.adapters.cli.config import RunConfig
from src.domain.entities.outage import OutageEstimate
from src.domain.entities.surrogate import MlpModel
from src.error_trace.exceptions import UsageError
from src.application.services.dataset_service import DatasetService
from src.application.services.montecarlo_service import MonteCarloService
from src.application.services.outage_service import OutageService
from src.application.services.pdf_service import PdfService
from src.application.services.surrogate_service import SurrogateService, regression_scores
from src.application.services.sweep_service import SweepService, axis_values
from src.application.services.training_service import TrainingService
from src.evaluation.reproduction import ReproductionRunner, pdf_frame, pdf_grids
from src.infrastructure.repositories.dataset_repository import DatasetRepository
from src.infrastructure.repositories.model_repository import ModelRepository
from src.utilities.logger import get_logger

logger = get_logger(__name__)


@dataclass
class CommandResult:
    """What a command prints: a JSON payload, an optional table, written files"""

    payload: Any
    table: Optional[pd.DataFrame] = None
    written: List[Path] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {"result": self.payload, "written": [str(p) for p in self.written]}


def _key_value_table(values: Dict[str, Any]) -> pd.DataFrame:
    return pd.DataFrame({"key": list(values), "value": list(values.values())})


def _load_model(config: RunConfig) -> MlpModel:
    if not config.model:
        raise UsageError("--model is required for the surrogate method")
    return ModelRepository().load(config.model)


def outage_frame(estimates: List[OutageEstimate]) -> pd.DataFrame:
    """Rows of the method,p_out,err,flags schema; flags are ';'-joined"""
    return pd.DataFrame(
        [[e.method.value, e.value, e.err, ";".join(e.flags)] for e in estimates],
        columns=OUTAGE_COLUMNS,
    )


def _pdf_command(variable: ChannelVariable) -> Callable[[RunConfig, Namespace], CommandResult]:
    def handler(config: RunConfig, args: Namespace) -> CommandResult:
        grids = pdf_grids(
            variable,
            config,
            config.n,
            PdfService(),
            MonteCarloService(workers=config.workers),
            config.pdf_methods(),
        )
        path = DatasetRepository().write_frame(
            pdf_frame(grids), config.output_path(f"pdf_{variable.value.lower()}.csv")
        )
        summary = [
            {
                "method": grid.method.value,
                "points": int(grid.support.size),
                "mass": grid.total_mass(),
                "mode": grid.mode(),
            }
            for grid in grids
        ]
        return CommandResult(summary, pd.DataFrame(summary), [path])

    return handler


pdf_x = _pdf_command(ChannelVariable.X)
pdf_y = _pdf_command(ChannelVariable.Y)


def outage(config: RunConfig, args: Namespace) -> CommandResult:
    methods = config.outage_methods()
    params = config.system_params()
    model = _load_model(config) if OutageMethod.SURROGATE in methods else None
    sweep_service = SweepService(workers=config.workers)
    estimates = [sweep_service.evaluate(m, params, config.mc_config(), model) for m in methods]
    frame = outage_frame(estimates)
    path = DatasetRepository().write_frame(frame, config.output_path("outage.csv"))
    return CommandResult([e.to_dict() for e in estimates], frame, [path])


def sweep(config: RunConfig, args: Namespace) -> CommandResult:
    missing = [name for name in ("axis", "start", "stop", "steps") if getattr(config, name) is None]
    if missing:
        raise UsageError("sweep needs --axis, --start, --stop and --steps", details={"missing": missing})
    methods = config.outage_methods()
    model = _load_model(config) if OutageMethod.SURROGATE in methods else None
    values = axis_values(config.start, config.stop, config.steps, config.axis)
    frame = SweepService(workers=config.workers).sweep(
        config.system_params(), config.axis, values, methods, config.mc_config(), model
    )
    path = DatasetRepository().write_frame(frame, config.output_path("sweep.csv"))
    return CommandResult(frame.to_dict(orient="records"), frame, [path])


def diversity(config: RunConfig, args: Namespace) -> CommandResult:
    """Diversity order, coding gain and the measured slope, per INR when a ladder is given"""
    service = OutageService()
    params = config.system_params()
    report = service.diversity_report(params)
    payload: Dict[str, Any] = report.to_dict()
    if config.inr_values:
        payload["inr_slopes"] = [
            {"inr_db": inr_db, "slope": service.empirical_diversity_slope(params.with_updates(inr_db=inr_db))}
            for inr_db in config.inr_values
        ]
        table = pd.DataFrame(payload["inr_slopes"])
        table["diversity_order"] = report.diversity_order
        return CommandResult(payload, table)
    return CommandResult(payload, _key_value_table(payload))


def dataset(config: RunConfig, args: Namespace) -> CommandResult:
    path = config.output_path("dataset.csv")
    frame = DatasetService(workers=config.workers).generate_dataset(
        config.records, config.label_method, config.seed, path=path
    )
    targets = frame[TARGET_COLUMN]
    payload = {
        "records": int(len(frame)),
        "requested": config.records,
        "label_method": config.label_method.value,
        "p_out_min": float(targets.min()) if len(frame) else None,
        "p_out_max": float(targets.max()) if len(frame) else None,
    }
    return CommandResult(payload, _key_value_table(payload), [path] if len(frame) else [])


def train(config: RunConfig, args: Namespace) -> CommandResult:
    if not config.dataset:
        raise UsageError("train needs --dataset")
    repository = DatasetRepository()
    frame = repository.read_dataset(config.dataset)
    train_split, test, validation = DatasetService.split_dataset(frame, seed=config.seed)
    model, report = TrainingService(workers=config.workers).train_lm(
        train_split, validation, config.lm_hyper(), seed=config.seed, log_targets=config.log_targets
    )
    surrogate = SurrogateService()
    if len(test):
        report.test_mse = surrogate.regression_metrics(model, test)["mse"]
    report.regression_r = surrogate.regression_metrics(model, validation)["r"]

    model_path = ModelRepository().save(model, config.model or Path(config.output_dir) / "model.json")
    history = pd.DataFrame(report.to_frame_rows())
    history_path = repository.write_frame(history, config.output_path("training.csv"))
    payload = {**report.to_dict(), "n_parameters": model.n_parameters, "model": str(model_path)}
    return CommandResult(payload, _key_value_table(payload), [model_path, history_path])


def predict(config: RunConfig, args: Namespace) -> CommandResult:
    estimate = SurrogateService().predict_scenario(_load_model(config), config.system_params())
    return CommandResult(estimate.to_dict(), outage_frame([estimate]))


def _summarize(schema: str, frame: pd.DataFrame, config: RunConfig, path: Path) -> Dict[str, Any]:
    if schema == "dataset":
        frame = DatasetRepository().read_dataset(path)
        summary: Dict[str, Any] = {
            "records": int(len(frame)),
            "p_out_mean": float(frame[TARGET_COLUMN].mean()),
            "p_out_min": float(frame[TARGET_COLUMN].min()),
            "p_out_max": float(frame[TARGET_COLUMN].max()),
        }
        if config.model:
            summary.update(SurrogateService().regression_metrics(_load_model(config), frame))
        return summary
    if schema == "pdf":
        return {
            method: {
                "points": int(len(group)),
                "mass": float(trapezoid(group["density"], group["value"])),
                "mode": float(group["value"].iloc[int(np.argmax(group["density"].to_numpy()))]),
            }
            for method, group in frame.groupby("method", sort=False)
        }
    if schema == "sweep":
        return {
            method: {
                "points": int(len(group)),
                "p_out_min": float(group["p_out"].min()),
                "p_out_max": float(group["p_out"].max()),
                "err_max": float(group["err"].max()),
            }
            for method, group in frame.groupby("method", sort=False)
        }
    if schema == "training":
        best = int(frame["validation_mse"].idxmin())
        return {
            "epochs": int(len(frame)),
            "best_epoch": int(frame["epoch"].iloc[best]),
            "best_validation_mse": float(frame["validation_mse"].iloc[best]),
            "final_train_mse": float(frame["train_mse"].iloc[-1]),
            "final_damping": float(frame["damping"].iloc[-1]),
        }
    if schema == "regression":
        scores = regression_scores(frame["p_out_pred"].to_numpy(), frame["p_out_true"].to_numpy())
        return {"n": int(len(frame)), **scores}
    # outage and timing tables are already summaries
    return {"rows": frame.to_dict(orient="records")}


def evaluate(config: RunConfig, args: Namespace) -> CommandResult:
    """Detect the schema of an emitted CSV and summarize it"""
    path = Path(args.path)
    repository = DatasetRepository()
    frame = repository.read_frame(path)
    schema = repository.detect_schema(frame)
    logger.info(f"evaluate {path}: schema={schema}, rows={len(frame)}")
    summary = _summarize(schema, frame, config, path)
    payload = {"schema": schema, "summary": summary}
    if schema in ("outage", "timing"):
        return CommandResult(payload, frame)
    flat = pd.json_normalize(summary, sep=".").T.reset_index()
    flat.columns = ["key", "value"]
    return CommandResult(payload, flat)


def reproduce(config: RunConfig, args: Namespace) -> CommandResult:
    paths = ReproductionRunner(config).run(args.target)
    return CommandResult(
        {"target": args.target}, pd.DataFrame({"written": [str(p) for p in paths]}), paths
    )


COMMANDS: Dict[str, Callable[[RunConfig, Namespace], CommandResult]] = {
    "pdf-x": pdf_x,
    "pdf-y": pdf_y,
    "outage": outage,
    "sweep": sweep,
    "diversity": diversity,
    "dataset": dataset,
    "train": train,
    "predict": predict,
    "evaluate": evaluate,
    "reproduce": reproduce,
}
