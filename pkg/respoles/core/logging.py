import logging

from rich.console import Console
from rich.logging import RichHandler

LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "warning": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


def configure_logging(level: str = "warn") -> None:
    """Route the ``respoles`` loggers to standard error through rich."""
    logger = logging.getLogger("respoles")
    logger.setLevel(LEVELS.get(level.lower(), logging.WARNING))
    if not any(isinstance(handler, RichHandler) for handler in logger.handlers):
        handler = RichHandler(
            console=Console(stderr=True),
            show_path=False,
            rich_tracebacks=False,
        )
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        logger.addHandler(handler)
    logger.propagate = False
