"""
Logging Configuration

Standard output carries command results and stderr carries log records. A
failed command ends stderr with exactly one JSON diagnostic line, written
through a separate logger so that the record format never touches it.
"""
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional
from src.config.settings import get_settings

PACKAGE_LOGGER = "src"
DIAGNOSTIC_LOGGER = "ris_outage.diagnostic"
RECORD_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"
RECORD_DATEFMT = "%H:%M:%S"


class StderrHandler(logging.StreamHandler):
    """Writes to whatever sys.stderr is at emit time (pytest swaps it per test)"""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def setup_logging(
    log_level: Optional[str] = None,
    log_file: Optional[str] = None
) -> None:
    """
    Configure the package logger

    Calling it again replaces the previous handlers, so every CLI run in one
    process starts from the same state.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Extra log file (empty for stderr only)
    """
    settings = get_settings()

    level = (log_level or settings.log_level).upper()
    file_path = log_file if log_file is not None else settings.log_file

    formatter = logging.Formatter(RECORD_FORMAT, datefmt=RECORD_DATEFMT)
    handlers = [StderrHandler()]
    if file_path:
        Path(file_path).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(file_path))

    package = logging.getLogger(PACKAGE_LOGGER)
    for handler in list(package.handlers):
        package.removeHandler(handler)
        handler.close()
    for handler in handlers:
        handler.setFormatter(formatter)
        package.addHandler(handler)
    package.setLevel(getattr(logging, level))
    package.propagate = False


def _diagnostic_logger() -> logging.Logger:
    diagnostic = logging.getLogger(DIAGNOSTIC_LOGGER)
    if not diagnostic.handlers:
        handler = StderrHandler()
        handler.setFormatter(logging.Formatter("%(message)s"))
        diagnostic.addHandler(handler)
        diagnostic.setLevel(logging.ERROR)
        diagnostic.propagate = False
    return diagnostic


def emit_diagnostic(payload: Dict[str, Any]) -> None:
    """
    Write a failure as one JSON line on stderr

    Args:
        payload: Error dictionary (RisOutageError.to_dict())
    """
    for handler in logging.getLogger(PACKAGE_LOGGER).handlers:
        handler.flush()
    _diagnostic_logger().error(json.dumps(payload, default=str))


def get_logger(name: str) -> logging.Logger:
    """
    Get logger instance

    Args:
        name: Logger name (usually __name__, which places it under the package logger)

    Returns:
        Logger instance
    """
    return logging.getLogger(name)
