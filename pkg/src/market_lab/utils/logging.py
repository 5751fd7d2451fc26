import logging
import sys
from typing import TextIO


def setup_market_lab_logger(
    level: str = "INFO", format_string: str | None = None, stream: TextIO | None = None
) -> logging.Logger:
    """
    Set up and configure the market_lab namespace logger.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        format_string: Custom format string for log messages
        stream: Stream for the console handler, stderr when omitted so that
            command results written to stdout are never interleaved with logs

    Returns:
        Configured logger instance
    """
    if format_string is None:
        format_string = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Get or create the market_lab logger
    logger = logging.getLogger("market_lab")

    # Only configure if not already configured
    if not logger.handlers:
        # Set log level
        logger.setLevel(getattr(logging, level.upper()))

        # Create console handler on stderr unless told otherwise
        console_handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
        console_handler.setLevel(getattr(logging, level.upper()))

        # Create formatter
        formatter = logging.Formatter(format_string)
        console_handler.setFormatter(formatter)

        # Add handler to logger
        logger.addHandler(console_handler)

        # Prevent propagation to root logger
        logger.propagate = False

    return logger


def get_market_lab_logger(name: str) -> logging.Logger:
    """
    Get a child logger under the market_lab namespace.

    Args:
        name: Name for the child logger (e.g., 'cli', 'services.dsmc')

    Returns:
        Child logger instance
    """
    return logging.getLogger(f"market_lab.{name}")
