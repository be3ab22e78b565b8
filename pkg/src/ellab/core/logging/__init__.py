# src/ellab/core/logging/
# ├─ __init__.py            # public API: setup_logging, set_run_id, ...
# ├─ builder.py             # make_dict_config(settings) + setup_logging(settings) + queue mode
# ├─ formatters.py          # JsonFormatter, ColorFormatter
# ├─ filters.py             # RunIdFilter (+ contextvar helpers), NonFiniteFilter
# └─ handlers.py            # handler dict factories (console/file/error)

from .builder import setup_logging, make_dict_config, stop_queue_logging
from .filters import set_run_id, get_run_id, reset_run_id, RunIdFilter, NonFiniteFilter

__all__ = [
    "setup_logging",
    "make_dict_config",
    "stop_queue_logging",
    "set_run_id",
    "get_run_id",
    "reset_run_id",
    "RunIdFilter",
    "NonFiniteFilter",
]
