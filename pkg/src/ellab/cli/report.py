"""
Run reports and their serialization.

JSON output is canonical: keys sorted, floats printed with 17 significant digits, non-finite
floats written as the strings "inf", "-inf", "nan". CSV tables use ',' separators, '.' decimal
points, LF line endings and a mandatory header row.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np
from pydantic import BaseModel, Field

from ellab.exceptions import ReportIOError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = ".17g"


class Report(BaseModel):
    """Top-level JSON document written by every subcommand."""

    command: str
    inputs: dict[str, Any] = Field(default_factory=dict)
    verdicts: list[dict[str, Any]] = Field(default_factory=list)
    values: dict[str, Any] = Field(default_factory=dict)
    witnesses: list[dict[str, Any]] = Field(default_factory=list)
    artifacts: list[str] = Field(default_factory=list)
    duration_ms: float | None = None
    version: str

    def to_json(self) -> str:
        return dumps(self.model_dump())


@dataclass
class Table:
    """A CSV artifact: header plus rows of scalars."""

    name: str
    header: Sequence[str]
    rows: Iterable[Sequence[Any]]


@dataclass
class CommandResult:
    """
    What a subcommand hands back to the runner.

    failed: the checker answered "no" or a solver did not deliver (exit status 1).
    """

    inputs: dict[str, Any] = field(default_factory=dict)
    values: dict[str, Any] = field(default_factory=dict)
    verdicts: list[dict[str, Any]] = field(default_factory=list)
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    tables: list[Table] = field(default_factory=list)
    failed: bool = False


# =====================================================================================================================
# JSON
# =====================================================================================================================


def _format_float(value: float) -> str:
    if math.isnan(value):
        return '"nan"'
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    return format(value, FLOAT_FORMAT)


def _write(obj: Any, out: list[str]) -> None:
    match obj:
        case None:
            out.append("null")
        case bool() | np.bool_():
            out.append("true" if obj else "false")
        case Enum():
            _write(obj.value, out)
        case int() | np.integer():
            out.append(str(int(obj)))
        case float() | np.floating():
            out.append(_format_float(float(obj)))
        case str():
            out.append(json.dumps(obj, ensure_ascii=False))
        case Path():
            out.append(json.dumps(str(obj), ensure_ascii=False))
        case dict():
            out.append("{")
            for i, key in enumerate(sorted(obj, key=str)):
                if i:
                    out.append(",")
                out.append(json.dumps(str(key), ensure_ascii=False))
                out.append(":")
                _write(obj[key], out)
            out.append("}")
        case np.ndarray():
            _write(obj.tolist(), out)
        case list() | tuple() | set() | frozenset():
            items = sorted(obj, key=str) if isinstance(obj, (set, frozenset)) else obj
            out.append("[")
            for i, item in enumerate(items):
                if i:
                    out.append(",")
                _write(item, out)
            out.append("]")
        case _:
            out.append(json.dumps(str(obj), ensure_ascii=False))


def dumps(obj: Any) -> str:
    """Canonical compact JSON text of `obj` (newline-terminated)."""
    out: list[str] = []
    _write(obj, out)
    out.append("\n")
    return "".join(out)


def emit_json(report: Report, path: Path | None = None, stream=None) -> None:
    """Write the report to `path`, or to `stream` (stdout by default)."""
    text = report.to_json()
    if path is None:
        (stream or sys.stdout).write(text)
        return
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ReportIOError(f"cannot write report: {exc.strerror or exc}", path=str(path)) from exc
    logger.debug("report.written", extra={"path": str(path), "bytes": len(text)})


# =====================================================================================================================
# CSV
# =====================================================================================================================


def _cell(value: Any) -> str:
    match value:
        case None:
            return ""
        case bool() | np.bool_():
            return "true" if value else "false"
        case Enum():
            return str(value.value)
        case int() | np.integer():
            return str(int(value))
        case float() | np.floating():
            value = float(value)
            return str(value) if not math.isfinite(value) else format(value, FLOAT_FORMAT)
        case _:
            return str(value)


def write_csv(table: Table, directory: Path, prefix: str) -> Path:
    """Write `table` to `directory/prefix_name.csv` and return the path."""
    path = directory / f"{prefix}_{table.name}.csv"
    try:
        directory.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(list(table.header))
            for row in table.rows:
                writer.writerow([_cell(v) for v in row])
    except OSError as exc:
        raise ReportIOError(f"cannot write CSV table {table.name!r}: {exc.strerror or exc}", path=str(path)) from exc
    logger.debug("report.csv_written", extra={"path": str(path), "table": table.name})
    return path
