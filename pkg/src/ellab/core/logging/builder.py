# src/ellab/core/logging/builder.py
"""
Logging builder: create and apply a dictConfig logging configuration and optionally
move the real handlers behind a QueueListener.

 - make_dict_config(settings) builds the dictConfig mapping
 - setup_logging(settings) applies it; with LOG_USE_QUEUE the handlers run in a background
   thread and producers (sweep worker threads under --jobs) only enqueue records
 - stop_queue_logging() flushes and stops the listener at exit

Settings knobs used: LOG_LEVEL, LOG_FORMAT, LOG_TO_STDOUT, LOG_DIR, LOG_MAX_BYTES,
LOG_BACKUP_COUNT, LOG_USE_QUEUE, ENV.
"""

from __future__ import annotations

import logging
import logging.config
import queue as _queue
from logging.handlers import QueueHandler, QueueListener
from pathlib import Path
from typing import Optional

from ellab.config.settings import Settings  # type: ignore
from ellab.utils.project import get_project_name

from .filters import NonFiniteFilter, RunIdFilter
from .formatters import ColorFormatter, JsonFormatter
from .handlers import (
    get_console_handler,
    get_error_console_handler,
    get_error_file_handler,
    get_file_handler,
)

_QUEUE_LISTENER: Optional[QueueListener] = None


def make_dict_config(settings: Settings) -> dict:
    """
    Build the dictConfig mapping using the provided settings.

    The mapping includes:
      - formatters: "standard" (color in text mode) and "json"
      - filters: "run_id", "non_finite"
      - handlers: console plus file/error_file when LOG_TO_STDOUT is off and LOG_DIR is set,
        otherwise console plus error_console
      - loggers: root, "ellab", "py.warnings" (numpy/scipy warnings routed through logging)
    """
    formatters = {
        "standard": {
            "()": ColorFormatter if settings.LOG_FORMAT == "text" else logging.Formatter,
            "format": "%(asctime)s | %(levelname)s | %(name)s | %(run_id)s | %(message)s",
        },
        "json": {
            "()": JsonFormatter,
            "env": settings.ENV,
            "service": get_project_name(),
        },
    }

    filters = {
        "run_id": {"()": RunIdFilter},
        "non_finite": {"()": NonFiniteFilter},
    }

    handlers: dict[str, dict] = {"console": get_console_handler(settings)}

    if (not settings.LOG_TO_STDOUT) and settings.LOG_DIR:
        handlers["file"] = get_file_handler(settings)
        handlers["error_file"] = get_error_file_handler(settings)
    else:
        handlers["error_console"] = get_error_console_handler(settings)

    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": formatters,
        "filters": filters,
        "handlers": handlers,
        "loggers": {
            "": {
                "handlers": list(handlers.keys()),
                "level": settings.LOG_LEVEL,
                "propagate": True,
            },
            "ellab": {
                "level": settings.LOG_LEVEL,
                "propagate": True,
            },
            "py.warnings": {
                "level": "WARNING",
                "propagate": True,
            },
        },
    }


def setup_logging(settings: Settings) -> None:
    """
    Initialize logging from settings.

    Steps:
      1. Create LOG_DIR when file logging is on.
      2. Apply dictConfig(make_dict_config(settings)).
      3. Route warnings.warn() (scipy IntegrationWarning, numpy RuntimeWarning) into logging.
      4. With LOG_USE_QUEUE, detach the root handlers, run them in a QueueListener and attach
         a QueueHandler carrying the producer-side filters (run id must be read in the
         producing thread's context).
    """
    global _QUEUE_LISTENER

    # a previous queue-mode setup would otherwise keep its listener thread alive
    stop_queue_logging()

    if (not settings.LOG_TO_STDOUT) and settings.LOG_DIR:
        Path(settings.LOG_DIR).mkdir(parents=True, exist_ok=True)

    logging.config.dictConfig(make_dict_config(settings))
    logging.captureWarnings(True)

    if not getattr(settings, "LOG_USE_QUEUE", False):
        return

    root_logger = logging.getLogger()
    real_handlers = list(root_logger.handlers)
    if not real_handlers:
        return
    for h in real_handlers:
        root_logger.removeHandler(h)

    log_queue: _queue.Queue = _queue.Queue()
    listener = QueueListener(log_queue, *real_handlers, respect_handler_level=True)
    listener.start()

    qh = QueueHandler(log_queue)
    qh.addFilter(RunIdFilter())
    qh.addFilter(NonFiniteFilter())
    root_logger.addHandler(qh)

    _QUEUE_LISTENER = listener


def stop_queue_logging() -> None:
    """
    Stop the QueueListener (flushing queued records) and detach the queue handler.
    """
    global _QUEUE_LISTENER
    listener = _QUEUE_LISTENER
    if listener is None:
        return

    try:
        listener.stop()
    except Exception:
        logging.getLogger(__name__).exception("logging.queue.stop_failed")
    finally:
        root_logger = logging.getLogger()
        for h in list(root_logger.handlers):
            if isinstance(h, QueueHandler):
                root_logger.removeHandler(h)
        _QUEUE_LISTENER = None
