"""Package loggers.

Every module holds one ``Logger("expendist.<module>")``. Records go to stderr through a
rich console handler so that results written to stdout stay machine readable; a run can
additionally mirror all package records into a plain-text log file.
"""

from __future__ import annotations

from contextlib import suppress
import logging
from pathlib import Path
import sys
from typing import Any

from rich.console import Console
from rich.logging import RichHandler

from expendist.core.errors import InvalidConfig, OutputError

LOG_LEVELS: dict[str, int] = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
}
PACKAGE = "expendist"
RICH_FORMAT = "[%(name)s] %(message)s"
PLAIN_FORMAT = "%(levelname)s [%(name)s] %(message)s"
FILE_FORMAT = "[%(asctime)s][%(name)s][%(levelname)s] %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
RUN_LOG = "run_log"


def level_number(level: str) -> int:
    """
    Numeric level of a case-insensitive level name.

    Raises:
        InvalidConfig: not one of debug, info, warning, error
    """
    try:
        return LOG_LEVELS[level.lower()]
    except (KeyError, AttributeError) as exc:
        allowed = tuple(LOG_LEVELS)
        raise InvalidConfig(f"log level must be one of {allowed}, got {level!r}") from exc


class Logger:
    """
    Named singleton logger writing to stderr.

    Constructing the same name twice returns the first instance untouched.

    Usage:
        log = Logger("expendist.estimation")
        log.info("fitted %s in %d starts", family, n)
    """

    _instances: dict[str, Logger] = {}
    _ready: bool = False

    def __new__(cls, name: str = PACKAGE, *args: Any, **kwargs: Any) -> Logger:
        if name not in cls._instances:
            instance = super().__new__(cls)
            cls._instances[name] = instance
        return cls._instances[name]

    def __init__(self, name: str = PACKAGE, rich: bool = True, level: str = "info") -> None:
        """
        Args:
            name: dotted module path
            rich: RichHandler on stderr; False gives a plain ``StreamHandler``
            level: initial level name
        """
        if self._ready:
            return
        self._log = logging.getLogger(name)
        self._log.propagate = False
        self._handlers: dict[str, logging.Handler] = {}
        self.add_handler("console", _console_handler(rich))
        self.set_level(level)
        self._ready = True

    @property
    def name(self) -> str:
        return self._log.name

    @property
    def level(self) -> int:
        return self._log.level

    def set_level(self, level: str) -> None:
        self._log.setLevel(level_number(level))

    def add_handler(self, name: str, handler: logging.Handler) -> None:
        """
        Register ``handler`` under ``name``.

        Raises:
            ValueError: the name is taken
        """
        if name in self._handlers:
            raise ValueError(f"Handler '{name}' already exists. Remove it first.")
        self._handlers[name] = handler
        self._log.addHandler(handler)

    def remove_handler(self, name: str) -> None:
        """
        Detach and close the handler registered under ``name``.

        Raises:
            KeyError: no such handler
        """
        if name not in self._handlers:
            raise KeyError(f"Handler '{name}' not found.")
        handler = self._handlers.pop(name)
        self._log.removeHandler(handler)
        handler.close()

    def has_handler(self, name: str) -> bool:
        return name in self._handlers

    def debug(self, msg: str, *args: Any, **kwargs: Any) -> None:
        self._log.debug(msg, *args, **kwargs)

    def info(self, msg: str, *args: Any, **kwargs: Any) -> None:
        self._log.info(msg, *args, **kwargs)

    def warning(self, msg: str, *args: Any, **kwargs: Any) -> None:
        self._log.warning(msg, *args, **kwargs)

    def error(self, msg: str, *args: Any, **kwargs: Any) -> None:
        self._log.error(msg, *args, **kwargs)

    def exception(self, msg: str, *args: Any, **kwargs: Any) -> None:
        kwargs.setdefault("exc_info", True)
        self._log.error(msg, *args, **kwargs)

    def __repr__(self) -> str:
        return f"Logger(name={self.name}, level={self.level}, handlers={list(self._handlers)})"


def _console_handler(rich: bool) -> logging.Handler:
    if rich:
        handler: logging.Handler = RichHandler(
            console=Console(stderr=True),
            show_path=False,
            rich_tracebacks=True,
            markup=False,
        )
        handler.setFormatter(logging.Formatter(RICH_FORMAT, DATE_FORMAT))
    else:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(PLAIN_FORMAT, DATE_FORMAT))
    return handler


def _package_loggers() -> list[Logger]:
    return [
        instance
        for name, instance in Logger._instances.items()
        if name == PACKAGE or name.startswith(f"{PACKAGE}.")
    ]


def set_package_level(level: str) -> None:
    """Apply ``level`` to every expendist logger created so far."""
    number = level_number(level)
    for instance in _package_loggers():
        instance._log.setLevel(number)


def start_run_log(path: str | Path) -> Path:
    """
    Mirror every expendist logger into ``path`` (appending), replacing any earlier run log.

    Raises:
        OutputError: the file cannot be opened
    """
    target = Path(path)
    stop_run_log()
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        handler = logging.FileHandler(target, mode="a", encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot open log file {target}: {exc}") from exc
    handler.setFormatter(logging.Formatter(FILE_FORMAT, DATE_FORMAT))
    for instance in _package_loggers():
        instance.add_handler(RUN_LOG, handler)
    return target


def stop_run_log() -> None:
    """Detach and close the run log, if one is open."""
    for instance in _package_loggers():
        if instance.has_handler(RUN_LOG):
            handler = instance._handlers.pop(RUN_LOG)
            instance._log.removeHandler(handler)
            with suppress(OSError):
                handler.close()
