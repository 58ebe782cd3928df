"""Tests for shared logging configuration."""
import logging

from rich.logging import RichHandler


def test_init_logging_returns_logger():
    """Test that init_logging returns a logger instance."""
    from parallax.log import init_logging

    logger = init_logging("test")
    assert isinstance(logger, logging.Logger)
    assert logger.name == "parallax.test"


def test_program_name_padding():
    """Test that program names are padded to 8 characters for alignment."""
    from parallax.log import init_logging

    init_logging("cli")
    handler = logging.getLogger().handlers[0]
    assert "[bold]cli     [/bold]" in handler.formatter._fmt

    init_logging("suite")
    handler = logging.getLogger().handlers[0]
    assert "[bold]suite   [/bold]" in handler.formatter._fmt


def test_different_colors():
    """Test that different programs can have different colors."""
    from parallax.log import init_logging

    init_logging("cli", color="dim cyan")
    assert "dim cyan" in logging.getLogger().handlers[0].formatter._fmt

    init_logging("suite", color="dim magenta")
    assert "dim magenta" in logging.getLogger().handlers[0].formatter._fmt


def test_rich_handler_on_stderr():
    """Test that the Rich handler writes to stderr, keeping stdout for reports."""
    from parallax.log import init_logging

    init_logging("test")
    handlers = logging.getLogger().handlers
    assert len(handlers) == 1
    assert isinstance(handlers[0], RichHandler)
    assert handlers[0].console.stderr


def test_format_includes_pid_tid_and_message():
    """Test that the format string carries PID, TID and the message."""
    from parallax.log import init_logging

    init_logging("test")
    format_str = logging.getLogger().handlers[0].formatter._fmt
    assert "%(process)d" in format_str
    assert "%(thread)d" in format_str
    assert "PID:" in format_str
    assert "TID:" in format_str
    assert "%(message)s" in format_str


def test_logging_level():
    """Test explicit levels, named levels and the configured default."""
    from parallax.config import get_config
    from parallax.log import init_logging

    init_logging("test", level=logging.DEBUG)
    assert logging.getLogger().level == logging.DEBUG

    init_logging("test", level="info")
    assert logging.getLogger().level == logging.INFO

    init_logging("test", level="not-a-level")
    assert logging.getLogger().level == logging.WARNING

    init_logging("test")
    assert logging.getLogger().level == logging.getLevelName(get_config().LOG_LEVEL.upper())


def test_module_loggers_share_hierarchy():
    """Test that library loggers live under the parallax namespace."""
    from parallax import geometry, numrange

    assert geometry.logger.name == "parallax.geometry"
    assert numrange.logger.name == "parallax.numrange"
