"""Type definitions for expendist."""

from .typing import SECTORS, UNITS, ArrayLike, PathLike

__all__ = [
    "SECTORS",
    "UNITS",
    "ArrayLike",
    "PathLike",
]
