"""Logging setup"""

import sys
from pathlib import Path
from loguru import logger

LOG_FORMAT = "{time:YYYY-MM-DD at HH:mm:ss} | {level} | {name}:{function}:{line} - {message}"


def setup_logging(
    logfile: str = "mahlerlab.log",
    level: str = "INFO",
    rotation: str = "10 MB",
    retention: str = "7 days",
    console_level: str = "WARNING",
) -> None:
    """Set up logging to both console and a log file."""
    logdir = Path("logs")
    logdir.mkdir(parents=True, exist_ok=True)

    logger.remove()
    logger.add(sys.stderr, level=console_level)

    # Logger setup with file rotation
    logger.add(
        logdir / logfile,
        rotation=rotation,
        retention=retention,
        level=level,
        format=LOG_FORMAT,
    )
