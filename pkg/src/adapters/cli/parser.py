"""
Command-Line Parser
"""
import argparse
from typing import NoReturn

from src.config.constants import LabelMethod, SweepAxis
from src.error_trace.exceptions import UsageError
from src.evaluation.reproduction import TARGETS


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of printing usage and exiting"""

    def error(self, message: str) -> NoReturn:
        raise UsageError(message, details={"prog": self.prog})


def _common_options() -> argparse.ArgumentParser:
    common = CliArgumentParser(add_help=False)
    run = common.add_argument_group("run")
    run.add_argument("--config", help="flat KEY=VALUE config file; flags override it")
    run.add_argument("--seed", type=int, help="seed of every stochastic output")
    run.add_argument("--workers", type=int, help="worker pool size (default RIS_WORKERS)")
    run.add_argument("--output", help="output file")
    run.add_argument("--output-dir", dest="output_dir", help="directory for default output files")
    run.add_argument("--json", dest="json_output", action="store_true", default=None,
                     help="print machine-readable JSON instead of a table")
    run.add_argument("--log-level", dest="log_level", default=None,
                     choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])

    scenario = common.add_argument_group("scenario")
    scenario.add_argument("--n", type=int, help="number of RIS elements")
    for name in ("sr", "rd", "ir", "id"):
        scenario.add_argument(f"--sigma-{name}", dest=f"sigma_{name}", type=float)
    scenario.add_argument("--snr-db", dest="snr_db", type=float)
    scenario.add_argument("--inr-db", dest="inr_db", type=float)
    scenario.add_argument("--gamma-th-db", dest="gamma_th_db", type=float)
    scenario.add_argument("--methods", help="comma separated method list")

    mc = common.add_argument_group("monte carlo")
    mc.add_argument("--mc-samples", dest="mc_samples", type=int)
    mc.add_argument("--confidence", type=float)
    mc.add_argument("--target-op", dest="target_op", type=float)
    mc.add_argument("--bins", type=int)
    mc.add_argument("--points", type=int, help="exact density grid size")
    return common


def build_parser() -> CliArgumentParser:
    """Parser with one subcommand per operation"""
    parser = CliArgumentParser(
        prog="ris-outage",
        description="Outage analysis of RIS-assisted D2D links under interference",
    )
    common = _common_options()
    commands = parser.add_subparsers(dest="command", required=True, parser_class=CliArgumentParser)

    commands.add_parser("pdf-x", parents=[common], help="density of the desired cascade X")
    commands.add_parser("pdf-y", parents=[common], help="density of the interference envelope Y")
    commands.add_parser("outage", parents=[common], help="outage probability at one point")

    sweep = commands.add_parser("sweep", parents=[common], help="outage along one axis")
    sweep.add_argument("--axis", choices=[a.value for a in SweepAxis])
    sweep.add_argument("--start", type=float)
    sweep.add_argument("--stop", type=float)
    sweep.add_argument("--steps", type=int)

    diversity = commands.add_parser("diversity", parents=[common], help="diversity order and coding gain")
    diversity.add_argument("--inr-values", dest="inr_values", help="INR ladder (dB) for the slope check")

    dataset = commands.add_parser("dataset", parents=[common], help="generate a labelled dataset")
    dataset.add_argument("--records", type=int)
    dataset.add_argument("--label-method", dest="label_method", choices=[m.value for m in LabelMethod])

    train = commands.add_parser("train", parents=[common], help="train the outage surrogate")
    train.add_argument("--dataset")
    train.add_argument("--model", help="where to save the trained model")
    train.add_argument("--max-epochs", dest="max_epochs", type=int)
    train.add_argument("--patience", type=int)
    train.add_argument("--log-targets", dest="log_targets", action="store_true", default=None)

    predict = commands.add_parser("predict", parents=[common], help="surrogate outage at one point")
    predict.add_argument("--model", required=True)

    evaluate = commands.add_parser("evaluate", parents=[common], help="summarize any emitted CSV")
    evaluate.add_argument("path")
    evaluate.add_argument("--model", help="score a dataset CSV with this model")

    reproduce = commands.add_parser("reproduce", parents=[common], help="canned figure and table data")
    reproduce.add_argument("target", choices=list(TARGETS))
    reproduce.add_argument("--records", type=int)
    reproduce.add_argument("--dataset")
    reproduce.add_argument("--max-epochs", dest="max_epochs", type=int)
    return parser
