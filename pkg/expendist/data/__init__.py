"""Published NSSO tables shipped with expendist.

- ``rural_2006-07.csv`` / ``urban_2006-07.csv``: grouped MPCE tables for the 2006-07 round
- ``mixture_rural.csv`` / ``mixture_urban.csv``: published mixture parameters per round and unit
- ``gini_series.csv``: published grouped Gini coefficients per round
"""

import importlib.resources
from pathlib import Path

FIXTURES = (
    "rural_2006-07.csv",
    "urban_2006-07.csv",
    "mixture_rural.csv",
    "mixture_urban.csv",
    "gini_series.csv",
)


def fixture_path(name: str) -> Path:
    """Absolute path of a shipped fixture file.

    Raises:
        FileNotFoundError: ``name`` is not one of the shipped fixtures
    """
    if name not in FIXTURES:
        raise FileNotFoundError(f"Unknown fixture '{name}'. Available: {', '.join(FIXTURES)}")
    return Path(str(importlib.resources.files(__package__) / name))


__all__ = ["FIXTURES", "fixture_path"]
