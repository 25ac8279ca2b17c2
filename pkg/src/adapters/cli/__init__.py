"""Command-line adapter - ris-outage subcommands"""
from src.adapters.cli.app import run
from src.adapters.cli.parser import build_parser

__all__ = ["run", "build_parser"]
