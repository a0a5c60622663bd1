"""Time utilities module for expendist."""

from .api import (
    TimeEncoding,
    round_years,
    survey_midpoint,
    timer,
)

__all__ = [
    "TimeEncoding",
    "round_years",
    "survey_midpoint",
    "timer",
]
