# src/ellab/tests/test_logging/test_filters.py
import logging
import math

from ellab.core.logging.filters import NonFiniteFilter, RunIdFilter, get_run_id, reset_run_id, set_run_id


def make_record():
    return logging.LogRecord("ellab", logging.INFO, __file__, 1, "margin %s", ("ok",), None)


def test_run_id_filter_defaults_to_dash():
    rec = make_record()
    token = set_run_id(None)
    try:
        assert RunIdFilter().filter(rec) is True
        assert rec.run_id == "-"
    finally:
        reset_run_id(token)


def test_run_id_filter_uses_contextvar():
    rec = make_record()
    token = set_run_id("run-42")
    try:
        RunIdFilter().filter(rec)
        assert rec.run_id == "run-42"
        assert get_run_id() == "run-42"
    finally:
        reset_run_id(token)
    assert get_run_id() is None


def test_run_id_filter_respects_record_extra():
    rec = make_record()
    rec.run_id = "explicit"
    token = set_run_id("context-id")
    try:
        RunIdFilter().filter(rec)
        assert rec.run_id == "explicit"
    finally:
        reset_run_id(token)


def test_non_finite_filter_stringifies_inf_and_nan():
    rec = make_record()
    rec.margin = math.inf
    rec.low = -math.inf
    rec.residual = math.nan
    rec.finite = 1.5
    assert NonFiniteFilter().filter(rec) is True
    assert rec.margin == "inf"
    assert rec.low == "-inf"
    assert rec.residual == "nan"
    assert rec.finite == 1.5
