"""
Shared logging configuration for parallax.

Provides Rich-based logging with program name prefixes. Records go to stderr
so that machine-readable reports on stdout stay clean.
"""
import logging

from rich.console import Console
from rich.logging import RichHandler


def init_logging(program_name: str, color: str = "dim cyan", level: str | int | None = None):
    """
    Configure Rich logging with process/thread info and logger names.

    Args:
        program_name: Name of the program (e.g., "cli", "suite")
        color: Rich color for PID/TID display (e.g., "dim cyan", "dim magenta")
        level: Logging level; defaults to PARALLAX_LOG_LEVEL

    Returns:
        The `parallax.<program_name>` logger.
    """
    if level is None:
        from parallax.config import get_config
        level = get_config().LOG_LEVEL
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING

    # Pad program name to 8 characters for alignment
    padded_name = f"{program_name:<8}"

    logging.basicConfig(
        level=level,
        format=f"[bold]{padded_name}[/bold] [{color}][PID: %(process)d TID: %(thread)d][/{color}] %(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), markup=True, show_path=False)],
        force=True,
    )

    logger = logging.getLogger(f"parallax.{program_name}")
    logger.debug(f"Logging initialized for {program_name}")

    return logger
