# src/ellab/tests/test_logging/test_builder_setup.py
import logging

from ellab.core.logging.builder import make_dict_config, setup_logging, stop_queue_logging


# Minimal Settings-like object
class DummySettings:
    LOG_FORMAT = "json"
    LOG_LEVEL = "INFO"
    LOG_TO_STDOUT = False
    LOG_DIR = None  # set per test
    LOG_MAX_BYTES = 1000
    LOG_BACKUP_COUNT = 1
    LOG_USE_QUEUE = False
    ENV = "testing"


def test_make_dict_config_contains_file_handlers(tmp_path):
    settings = DummySettings()
    settings.LOG_DIR = tmp_path
    cfg = make_dict_config(settings)
    assert "console" in cfg["handlers"]
    # file logging requested: rotating file + error file, no error console
    assert "file" in cfg["handlers"]
    assert "error_file" in cfg["handlers"]
    assert "error_console" not in cfg["handlers"]
    assert cfg["handlers"]["file"]["filename"].endswith("ellab.log")
    assert cfg["handlers"]["error_file"]["filename"].endswith("errors.log")
    assert set(cfg["filters"]) == {"run_id", "non_finite"}
    assert "json" in cfg["formatters"]


def test_make_dict_config_stdout_only(tmp_path):
    settings = DummySettings()
    settings.LOG_TO_STDOUT = True
    settings.LOG_DIR = tmp_path
    cfg = make_dict_config(settings)
    assert set(cfg["handlers"]) == {"console", "error_console"}
    assert cfg["loggers"][""]["handlers"] == ["console", "error_console"]
    assert cfg["loggers"]["py.warnings"]["level"] == "WARNING"


def test_setup_logging_creates_log_dir(tmp_path):
    settings = DummySettings()
    settings.LOG_DIR = tmp_path / "logs"
    assert not settings.LOG_DIR.exists()
    try:
        setup_logging(settings)
        assert settings.LOG_DIR.exists()
        assert logging.getLogger().handlers
    finally:
        stop_queue_logging()
