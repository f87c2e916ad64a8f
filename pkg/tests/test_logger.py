import logging
import os
from unittest.mock import patch

import pytest

from utils.logger import Logger


@pytest.fixture
def temp_logger(tmp_path):
    """Create a fresh logger instance writing into a temporary directory."""
    log_file = str(tmp_path / "logs" / "test_app.log")

    Logger._instance = None
    logger = Logger(log_file=log_file, level=logging.DEBUG)

    if not logger.logger.hasHandlers():
        raise RuntimeError("Logger has no handlers after initialization!")

    yield logger

    Logger._instance = None
    Logger()


def test_log_file_creation(temp_logger):
    """Ensure the log directory and file are created and writable."""
    temp_logger.warning("Testing log file creation")

    file_handler = next(
        (h for h in temp_logger.logger.handlers if isinstance(h, logging.FileHandler)),
        None,
    )
    assert file_handler is not None, "Logger should have a file handler"

    file_handler.flush()
    assert os.path.exists(file_handler.baseFilename)
    with open(file_handler.baseFilename) as f:
        assert "Testing log file creation" in f.read()


def test_logging_levels(temp_logger):
    """Ensure messages are forwarded at the matching level."""
    with (
        patch.object(temp_logger.logger, "debug") as mock_debug,
        patch.object(temp_logger.logger, "info") as mock_info,
        patch.object(temp_logger.logger, "warning") as mock_warning,
        patch.object(temp_logger.logger, "error") as mock_error,
        patch.object(temp_logger.logger, "critical") as mock_critical,
    ):
        temp_logger.debug("Debug message")
        temp_logger.info("Info message")
        temp_logger.warning("Warning message")
        temp_logger.error("Error message")
        temp_logger.critical("Critical message")

        mock_debug.assert_called_once_with("Debug message")
        mock_info.assert_called_once_with("Info message")
        mock_warning.assert_called_once_with("Warning message")
        mock_error.assert_called_once_with("Error message")
        mock_critical.assert_called_once_with("Critical message")


def test_prevent_duplicate_handlers():
    """Ensure repeated construction returns the singleton without new handlers."""
    logger1 = Logger()
    initial_handler_count = len(logger1.logger.handlers)

    logger2 = Logger()
    assert logger1 is logger2
    assert len(logger2.logger.handlers) == initial_handler_count


def test_reinitialization_replaces_handlers(temp_logger, tmp_path):
    Logger._instance = None
    fresh = Logger(log_file=str(tmp_path / "other.log"))
    assert len(fresh.logger.handlers) == 2


def test_set_level(temp_logger):
    temp_logger.set_level(logging.ERROR)
    assert temp_logger.logger.level == logging.ERROR
    assert not temp_logger.logger.propagate
