"""Command-line interface utilities for expendist."""

from __future__ import annotations

import argparse
from collections.abc import Sequence
from typing import Any

from expendist.core.errors import EXIT_INPUT, ExpendistError


class CLIError(ExpendistError):
    """Argument definition or parsing failed."""

    error_code = EXIT_INPUT

    def __init__(self, message: str | None = None, error_code: int | None = None):
        super().__init__(message or "An error occurred in CLI", error_code)


class _RaisingParser(argparse.ArgumentParser):
    """ArgumentParser that raises CLIError instead of printing usage and exiting."""

    def error(self, message: str) -> Any:  # type: ignore[override]
        raise CLIError(f"{self.prog}: {message}")


class CLI:
    """
    Thin wrapper over argparse with optional subcommands.

    Attributes:
        parser (argparse.ArgumentParser): the wrapped parser (a subparser for commands)

    Examples:
        >>> cli = CLI(prog="expendist")
        >>> fit = cli.command("fit", help="fit a family")
        >>> fit.add("input")
        >>> fit.add("--family", default="mixture")
        >>> args = cli.get(["fit", "table.csv"])
        >>> args["command"], args["family"]
        ('fit', 'mixture')
    """

    def __init__(
        self,
        prog: str | None = None,
        description: str = "Command-Line Interface Utility",
        parser: argparse.ArgumentParser | None = None,
    ) -> None:
        self.parser = parser or _RaisingParser(prog=prog, description=description)
        self._subparsers: Any = None
        self.commands: dict[str, CLI] = {}

    def add(self, *args: Any, **kwargs: Any) -> None:
        """Add an argument; accepts everything ``ArgumentParser.add_argument`` does.

        Notes
        ----------
        ``action``: store, store_const, store_true, store_false, append, count, version
        ``nargs``: ``?`` optional single value, ``*`` zero or more, ``+`` one or more
        ``choices``: restrict the accepted values
        """
        try:
            self.parser.add_argument(*args, **kwargs)
        except argparse.ArgumentError as e:
            raise CLIError(f"Failed to add argument: {e}") from e

    def command(self, name: str, help: str = "") -> CLI:  # noqa: A002
        """Register subcommand ``name`` and return a CLI for its arguments."""
        if self._subparsers is None:
            self._subparsers = self.parser.add_subparsers(
                dest="command", required=True, parser_class=_RaisingParser
            )
        sub = self._subparsers.add_parser(name, help=help, description=help)
        cli = CLI(parser=sub)
        self.commands[name] = cli
        return cli

    def get(self, argv: Sequence[str] | None = None, allow_unknown: bool = False) -> dict[str, Any]:
        """Parse arguments and return them as a dictionary.

        Args:
            argv: arguments to parse; None reads ``sys.argv``
            allow_unknown: collect unknown arguments under ``"unknown"`` instead of failing

        Raises:
            CLIError: on parsing errors
            SystemExit: on --help/--version
        """
        try:
            if allow_unknown:
                args, unknown = self.parser.parse_known_args(argv)
                result = vars(args)
                result["unknown"] = unknown
                return result
            return vars(self.parser.parse_args(argv))
        except (argparse.ArgumentError, SystemExit) as e:
            if isinstance(e, SystemExit) and e.code == 0:
                raise
            raise CLIError(f"Failed to parse arguments: {e}") from e
