"""Human-readable formatting for log lines and console reports."""

from __future__ import annotations

from collections.abc import Generator, Iterable, Sequence, Sized
from datetime import timedelta
import math
from typing import Any, TypeVar, cast

from rich.console import Console
from rich.table import Table
from tqdm import tqdm

T = TypeVar("T")


def unit(n: int | float, unit_name: str, decimal: int = 0) -> str:
    """
    Format a number with its unit.

    Examples:
        >>> unit(1, "class")
        '1 class'
        >>> unit(12, "class")
        '12 classes'
    """
    if decimal < 0:
        raise ValueError("Decimal places cannot be negative")

    val = float(n)
    formatted_number = f"{val:.{decimal}f}"
    if "." in formatted_number:
        formatted_number = formatted_number.rstrip("0").rstrip(".")

    if val == 1.0:
        suffix = ""
    elif unit_name.endswith(("s", "x", "ch", "sh")):
        suffix = "es"
    else:
        suffix = "s"
    return f"{formatted_number} {unit_name}{suffix}"


def percent(value: float, decimal: int = 2) -> str:
    """Format a value already expressed in percent, e.g. ``percent(28.447) -> '28.45%'``."""
    return f"{value:.{decimal}f}%"


def number(value: float | None, digits: int = 4) -> str:
    """Compact numeric cell: fixed point for moderate magnitudes, scientific otherwise."""
    if value is None:
        return "undefined"
    if not math.isfinite(value):
        return str(value)
    if value != 0 and (abs(value) >= 1e6 or abs(value) < 10 ** (-digits)):
        return f"{value:.{digits - 1}e}"
    return f"{value:.{digits}f}"


def sec2str(s: float) -> str:
    """
    Convert seconds to human-readable string.

    Returns:
        String like "1.5s", "2 mins 30s", "1 hr 5 mins"
    """
    if s < 0:
        return f"-{sec2str(-s)}"

    if s < 0.001:
        return f"{s * 1e6:.0f}µs"
    if s < 1:
        return f"{s * 1e3:.0f}ms"
    if s < 60:
        return f"{s:.2f}s" if s < 10 else f"{s:.1f}s"

    delta = timedelta(seconds=int(s))
    hours, remainder = divmod(delta.seconds + delta.days * 86400, 3600)
    minutes, secs = divmod(remainder, 60)

    parts = []
    if hours > 0:
        parts.append(unit(hours, "hr"))
    if minutes > 0:
        parts.append(unit(minutes, "min"))
    if hours == 0 and secs > 0:
        parts.append(f"{secs}s")

    return " ".join(parts[:2])


def track_simple(
    sequence: Iterable[T] | int,
    msg: str = "Processing",
    total: int | None = None,
    disable: bool = False,
    **tqdm_kwargs: Any,
) -> Generator[T, None, None]:
    """Iterate with a tqdm progress bar on stderr."""
    items: Iterable[T] = (
        cast(Iterable[T], range(sequence)) if isinstance(sequence, int) else sequence
    )

    if total is None and isinstance(items, Sized):
        total = len(items)

    with tqdm(
        items,
        desc=msg,
        total=total,
        leave=False,
        dynamic_ncols=True,
        disable=disable,
        **tqdm_kwargs,
    ) as t:
        yield from t


def render_table(
    title: str,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    console: Console | None = None,
) -> Table:
    """
    Print a rich table (to stderr by default) and return it.

    Cells that are floats go through ``number``; everything else through ``str``.
    """
    table = Table(title=title, show_lines=False)
    for i, name in enumerate(columns):
        table.add_column(name, justify="left" if i == 0 else "right")
    for row in rows:
        table.add_row(*(number(c) if isinstance(c, float) else str(c) for c in row))
    (console or Console(stderr=True)).print(table)
    return table
