# src/ellab/core/logging/formatters.py

"""
Logging formatters.

  - JsonFormatter: one JSON object per line, with run_id/service/env/version fields plus
    any ``extra={...}`` keys the caller attached (solver metadata, margins, witnesses).
  - ColorFormatter: compact ANSI-colored lines for interactive terminals.

The builder (dictConfig) picks one based on LOG_FORMAT.
"""

import json
import logging
from logging import LogRecord
from typing import Any

from ellab.utils.project import get_project_version

PROJECT_VERSION = get_project_version()

# LogRecord attributes that are not caller extras
_RESERVED = frozenset(
    vars(logging.LogRecord("", 0, "", 0, "", (), None)).keys()
) | {"message", "asctime", "run_id"}


class JsonFormatter(logging.Formatter):
    """
    Structured JSON formatter.

    Construction:
      - env: environment name (e.g. "development" | "testing").
      - service: logical service name (the project name).
      - datefmt: passed to logging.Formatter (used by formatTime).

    Non-serializable extras are stringified (``json.dumps(default=str)``); the formatter
    never raises.
    """

    def __init__(self, *, env: str | None = None, service: str = "ellab", datefmt: str | None = None):
        super().__init__(datefmt=datefmt)
        self.env = env
        self.service = service

    def format(self, record: LogRecord) -> str:
        log_record: dict[str, Any] = {
            "timestamp": self.formatTime(record, self.datefmt),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "pathname": record.pathname,
            "lineno": record.lineno,
            "run_id": getattr(record, "run_id", "-"),
            "service": self.service,
            "env": self.env,
            "version": PROJECT_VERSION,
        }

        if record.exc_info:
            log_record["exc_info"] = self.formatException(record.exc_info)
        if record.stack_info:
            log_record["stack_info"] = self.formatStack(record.stack_info)

        for k, v in record.__dict__.items():
            if k in _RESERVED or k in log_record or k.startswith("_"):
                continue
            try:
                json.dumps(v, allow_nan=False)
                log_record[k] = v
            except (TypeError, ValueError):
                log_record[k] = str(v)

        return json.dumps(log_record, ensure_ascii=False, default=str)


class ColorFormatter(logging.Formatter):
    """
    Development-friendly colored formatter: TIMESTAMP | LEVEL | LOGGER | RUN_ID | MESSAGE,
    with the level name colorized and the traceback appended when exc_info is set.
    """

    COLOR_CODES = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[1;41m",
        "RESET": "\033[0m",
    }

    def __init__(self, fmt: str | None = None, datefmt: str | None = None) -> None:
        super().__init__(fmt=fmt, datefmt=datefmt)

    def format(self, record: LogRecord) -> str:
        color = self.COLOR_CODES.get(record.levelname, "")
        # reset after the level name so the color does not bleed into the message
        reset = self.COLOR_CODES["RESET"]
        timestamp = self.formatTime(record, self.datefmt)

        base = (
            f"{timestamp} | {color}{record.levelname:<8}{reset} | "
            f"{record.name:<28} | "
            f"{getattr(record, 'run_id', '-'):<12} | "
            f"{record.getMessage()}"
        )

        if record.exc_info:
            base = base + "\n" + self.formatException(record.exc_info)

        return base
