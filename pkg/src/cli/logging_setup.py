"""Logging configuration for the command line."""

import logging
import os
import sys

_COLOURS = {
    logging.DEBUG: "\033[36m",
    logging.INFO: "\033[32m",
    logging.WARNING: "\033[33m",
    logging.ERROR: "\033[31m",
    logging.CRITICAL: "\033[1;31m",
}
_RESET = "\033[0m"
_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class LevelColourFormatter(logging.Formatter):
    """Colours the level name; the message itself is left untouched."""

    def format(self, record: logging.LogRecord) -> str:
        original = record.levelname
        colour = _COLOURS.get(record.levelno)
        if colour:
            record.levelname = f"{colour}{original}{_RESET}"
        try:
            return super().format(record)
        finally:
            record.levelname = original


def use_colour(stream) -> bool:
    """Colour only on a terminal and only while NO_COLOR is unset."""
    if "NO_COLOR" in os.environ:
        return False
    isatty = getattr(stream, "isatty", None)
    return bool(isatty and isatty())


def configure_logging(level: str = "INFO", stream=None) -> logging.Handler:
    """
    Install a single stderr handler on the ``src`` logger tree.

    Args:
        level: logging level name
        stream: output stream, stderr by default

    Returns:
        The installed handler
    """
    stream = stream if stream is not None else sys.stderr
    handler = logging.StreamHandler(stream)
    formatter_cls = LevelColourFormatter if use_colour(stream) else logging.Formatter
    handler.setFormatter(formatter_cls(_FORMAT))
    root = logging.getLogger("src")
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(level.upper())
    return handler
