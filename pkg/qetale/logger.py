"""Logging setup.

Verbosity is read from ``QETALE_LOGGING_VERBOSITY`` once, when the first logger
is requested. Records go to stderr so stdout stays reserved for command output.
"""

from __future__ import annotations

import logging
import os
import sys

LOGGING_VERBOSITY_ENV = "QETALE_LOGGING_VERBOSITY"
_ROOT_NAME = "qetale"
_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

_configured = False


def get_logging_level() -> int:
    """Return the level named by the verbosity env variable.

    Returns:
        A ``logging`` level; unknown names fall back to ``WARNING``.
    """
    name = os.environ.get(LOGGING_VERBOSITY_ENV, "WARNING").strip().upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.WARNING


def _configure_root() -> None:
    global _configured
    root = logging.getLogger(_ROOT_NAME)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(_FORMAT))
    root.addHandler(handler)
    root.setLevel(get_logging_level())
    root.propagate = False
    _configured = True


def get_logger(name: str) -> logging.Logger:
    """Return a logger below the package root logger.

    Args:
        name: Usually ``__name__`` of the calling module.

    Returns:
        The configured logger.
    """
    if not _configured:
        _configure_root()
    if name != _ROOT_NAME and not name.startswith(_ROOT_NAME + "."):
        name = f"{_ROOT_NAME}.{name}"
    return logging.getLogger(name)
