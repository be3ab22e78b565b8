"""Command-line surface: argument parsing, subcommand handlers and report emission."""

from .main import build_parser, main, run
from .report import CommandResult, Report, Table, dumps, emit_json, write_csv

__all__ = ["CommandResult", "Report", "Table", "build_parser", "dumps", "emit_json", "main", "run", "write_csv"]
