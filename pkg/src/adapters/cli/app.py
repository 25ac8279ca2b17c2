"""
CLI Application - Parse, configure, dispatch and map failures to exit codes
"""
import json
from argparse import Namespace
from typing import Any, Dict, List, Optional

from src.config.constants import EXIT_OK
from src.adapters.cli.commands import COMMANDS, CommandResult
from src.adapters.cli.config import RunConfig, build_run_config, load_config_file, reproduce_config_path
from src.adapters.cli.parser import build_parser
from src.error_trace.exceptions import RisOutageError, StorageError
from src.utilities.logger import emit_diagnostic, get_logger, setup_logging

logger = get_logger(__name__)


def resolve_config(args: Namespace) -> RunConfig:
    """
    Merge the config file (or the canned reproduce file) with the flags

    Args:
        args: Parsed namespace

    Returns:
        Validated RunConfig
    """
    file_values: Dict[str, Any] = {}
    if args.config:
        file_values = load_config_file(args.config)
    elif args.command == "reproduce" and reproduce_config_path(args.target).is_file():
        file_values = load_config_file(reproduce_config_path(args.target))
    flags = {key: value for key, value in vars(args).items() if key in RunConfig.model_fields}
    return build_run_config(file_values, flags)


def render(result: CommandResult, json_output: bool) -> str:
    if json_output:
        return json.dumps(result.to_dict(), default=str)
    lines = []
    if result.table is not None and not result.table.empty:
        lines.append(result.table.to_string(index=False))
    lines.extend(f"wrote {path}" for path in result.written)
    return "\n".join(lines)


def report_error(error: RisOutageError) -> int:
    """Write the failure as one JSON line on stderr and return its exit code"""
    logger.debug(f"{error.__class__.__name__}: {error.details}")
    emit_diagnostic(error.to_dict())
    return error.exit_code


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run one command

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Process exit code
    """
    try:
        args = build_parser().parse_args(argv)
        setup_logging(args.log_level)
        config = resolve_config(args)
        logger.info(f"command {args.command}: seed={config.seed}, workers={config.workers}")
        result = COMMANDS[args.command](config, args)
        output = render(result, config.json_output)
        if output:
            print(output)
        return EXIT_OK
    except RisOutageError as e:
        return report_error(e)
    except OSError as e:
        return report_error(StorageError(str(e), details={"reason": e.__class__.__name__}))
