from collections.abc import Callable
import functools
import re
import time
from typing import Literal, ParamSpec, TypeVar

from expendist.core.errors import InputError

P = ParamSpec("P")
R = TypeVar("R")

TimeEncoding = Literal["midpoint", "start"]

ROUND_PATTERN = re.compile(r"^\s*(\d{4})(?:\s*[-/]\s*(\d{2}|\d{4}))?\s*$")


def timer(
    msg: str,
    reporter: Callable[[str], None] = print,
    threshold: float = 3.0,
    process_time: bool = False,
) -> Callable[[Callable[P, R]], Callable[P, R]]:
    """
    Performance analysis decorator to measure execution time.

    Args:
        msg: Message prefix for the report.
        reporter: Function to handle the output (defaults to print).
        threshold: Minimum seconds to trigger reporting.
        process_time: Use CPU process time if True, else wall-clock time.
    """
    timer_func = time.process_time if process_time else time.perf_counter

    def decorator(func: Callable[P, R]) -> Callable[P, R]:
        @functools.wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
            start_time = timer_func()
            result = func(*args, **kwargs)
            elapsed = timer_func() - start_time

            if elapsed >= threshold:
                from expendist.format import sec2str

                reporter(f"[{msg}] took {sec2str(elapsed)}")
            return result

        return wrapper

    return decorator


def round_years(label: str) -> tuple[int, int]:
    """
    First and last calendar year of a survey round label.

    Examples:
        >>> round_years("2006-07")
        (2006, 2007)
        >>> round_years("1999-00")
        (1999, 2000)
        >>> round_years("1983")
        (1983, 1983)

    Raises:
        InputError: the label is not ``YYYY``, ``YYYY-YY`` or ``YYYY-YYYY``
    """
    match = ROUND_PATTERN.match(str(label))
    if match is None:
        raise InputError(f"Unrecognised survey round label: {label!r}")

    first = int(match.group(1))
    tail = match.group(2)
    if tail is None:
        return first, first
    if len(tail) == 4:
        last = int(tail)
    else:
        last = first // 100 * 100 + int(tail)
        if last < first:
            last += 100
    if last < first:
        raise InputError(f"Survey round {label!r} ends before it starts")
    return first, last


def survey_midpoint(label: str, encoding: TimeEncoding | str = "midpoint") -> float:
    """
    Fractional-year time point of a survey round.

    ``midpoint``: a single year Y maps to Y + 0.5 and a range Y1-Y2 to (Y1 + Y2) / 2, so
    "2006-07" and "1983" become 2006.5 and 1983.5. ``start``: the first year.
    """
    first, last = round_years(label)
    if encoding == "start":
        return float(first)
    if encoding != "midpoint":
        raise InputError(f"Unknown time encoding: {encoding!r}")
    if first == last:
        return first + 0.5
    return (first + last) / 2.0
