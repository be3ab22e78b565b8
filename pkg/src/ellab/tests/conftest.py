"""
Core pytest configuration for the ellab test suite.

Only session-wide setup lives here (logging). Domain fixtures are kept in
tests/test_fixtures/ and imported at the bottom of this module:

- tests/test_fixtures/nonlin_fixtures.py: nonlinearities, scan configs, seeded Faker
- tests/test_fixtures/cli_fixtures.py: CLI runner helper
"""

from __future__ import annotations

import logging

# Quiet third-party loggers before importing anything that may initialize them.
NOISY_LOGGERS = (
    "faker",
    "faker.factory",
    "matplotlib",
    "numba",
)
for _name in NOISY_LOGGERS:
    logging.getLogger(_name).setLevel(logging.WARNING)

import pytest
from pytest import FixtureRequest

from ellab.config import get_settings
from ellab.core.logging.builder import setup_logging, stop_queue_logging

settings = get_settings()
logger = logging.getLogger(__name__)


@pytest.fixture(scope="session", autouse=True)
def configure_logging(request: FixtureRequest):
    """
    Install the tool's logging configuration once for the whole session.

    dictConfig drops pytest's capture handler, so it is re-attached to the root logger
    afterwards; tests asserting on ``caplog.records`` depend on it.
    """
    setup_logging(settings)

    try:
        caplog_plugin = request.config.pluginmanager.getplugin("logging")
        handler = getattr(caplog_plugin, "handler", None)
        if handler:
            logging.getLogger().addHandler(handler)
    except Exception:
        pass

    yield

    stop_queue_logging()


from .test_fixtures.nonlin_fixtures import (  # noqa: E402,F401
    fake,
    scan,
    coarse_scan,
    benchmark_f,
    power_f,
    log_f,
    random_power_exponent,
)
from .test_fixtures.cli_fixtures import run_cli  # noqa: E402,F401
