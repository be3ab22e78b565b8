"""
Logging filters.

RunIdFilter guarantees every record carries ``run_id`` (the id of the CLI invocation or
sweep that produced it), read from a contextvar so worker threads started with a copied
context keep the id. NonFiniteFilter rewrites inf/nan extras as strings so JSON log lines
stay valid JSON.
"""

import contextvars
import logging
import math
from logging import LogRecord

_run_id_ctx: contextvars.ContextVar[str | None] = contextvars.ContextVar("run_id", default=None)


def set_run_id(run_id: str | None):
    """
    Set the run id in the current context and return the token for reset_run_id().
    """
    return _run_id_ctx.set(run_id)


def reset_run_id(token) -> None:
    _run_id_ctx.reset(token)


def get_run_id() -> str | None:
    return _run_id_ctx.get()


class RunIdFilter(logging.Filter):
    """
    Ensure ``record.run_id`` exists: an explicit ``extra={"run_id": ...}`` wins, then the
    contextvar, then the sentinel "-". Never drops a record.
    """

    def filter(self, record: LogRecord) -> bool:
        record.run_id = getattr(record, "run_id", None) or get_run_id() or "-"
        return True


class NonFiniteFilter(logging.Filter):
    """Replace non-finite float attributes by "inf", "-inf" or "nan"."""

    def filter(self, record: LogRecord) -> bool:
        for key, value in list(record.__dict__.items()):
            if isinstance(value, float) and not math.isfinite(value):
                record.__dict__[key] = str(value)
        return True
