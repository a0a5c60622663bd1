"""Type aliases for expendist.

This module provides common type aliases used throughout the expendist package
for type hinting and documentation purposes.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, TypeAlias

import numpy as np
import pandas as pd

# ==========================================
# Data Structure Types
# ==========================================

ArrayLike: TypeAlias = list[Any] | tuple[Any, ...] | np.ndarray | pd.Series

# ==========================================
# Survey Vocabulary
# ==========================================

UNITS: tuple[str, ...] = ("household", "person")
SECTORS: tuple[str, ...] = ("rural", "urban")

# ==========================================
# File System Types
# ==========================================

PathLike: TypeAlias = str | Path


__all__ = [
    "SECTORS",
    "UNITS",
    "ArrayLike",
    "PathLike",
]
