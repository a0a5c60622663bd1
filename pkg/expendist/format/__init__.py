"""Formatting utilities for expendist.

This module provides human-readable formatting for numbers, durations, progress bars and
console tables.
"""

from .human import (
    number,
    percent,
    render_table,
    sec2str,
    track_simple,
    unit,
)

__all__ = [
    "number",
    "percent",
    "render_table",
    "sec2str",
    "track_simple",
    "unit",
]
