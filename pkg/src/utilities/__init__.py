"""Utility functions and helpers"""
from src.utilities.logger import emit_diagnostic, get_logger, setup_logging
from src.utilities.helpers import (
    db_to_linear,
    chunk_sizes,
    chunk_list,
    ordered_map,
    parse_csv_list
)

__all__ = [
    "emit_diagnostic",
    "get_logger",
    "setup_logging",
    "db_to_linear",
    "chunk_sizes",
    "chunk_list",
    "ordered_map",
    "parse_csv_list"
]
