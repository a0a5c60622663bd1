from collections.abc import Callable

import pytest

from expendist.data import fixture_path
from expendist.distributions import Mixture
from expendist.grouped import GroupedSample, load_grouped_csv
from expendist.trends import load_parameter_table

# published χ² and KS of the 2006-07 mixture fits, keyed (sector, unit)
PUBLISHED_CHI2 = {
    ("rural", "household"): 3.6661,
    ("rural", "person"): 3.1909,
    ("urban", "household"): 3.6169,
    ("urban", "person"): 4.0303,
}
PUBLISHED_KS = {
    ("rural", "household"): 0.0095,
    ("rural", "person"): 0.0074,
    ("urban", "household"): 0.0100,
    ("urban", "person"): 0.0069,
}
PUBLISHED_GINI = {
    ("rural", "household"): 29.28,
    ("rural", "person"): 28.45,
    ("urban", "household"): 36.90,
    ("urban", "person"): 36.36,
}
CASES = list(PUBLISHED_CHI2)


@pytest.fixture
def table() -> Callable[[str, str], GroupedSample]:
    """Loader for the shipped 2006-07 tables: ``table("rural", "person")``."""

    def load(sector: str, unit: str = "household") -> GroupedSample:
        return load_grouped_csv(fixture_path(f"{sector}_2006-07.csv"), unit=unit)

    return load


@pytest.fixture
def published() -> Callable[[str, str, str], Mixture]:
    """Published mixture parameters: ``published("urban", "household", "2006-07")``."""

    def lookup(sector: str, unit: str, round_label: str = "2006-07") -> Mixture:
        frame = load_parameter_table(fixture_path(f"mixture_{sector}.csv"))
        row = frame[(frame["round_label"] == round_label) & (frame["unit"] == unit)].iloc[0]
        return Mixture(
            x_M=float(row["x_M"]),
            sigma2=float(row["sigma2"]),
            nu=float(row["nu"]),
            x0=float(row["x0"]),
            pi=float(row["pi"]),
        )

    return lookup


@pytest.fixture
def rural(table: Callable[[str, str], GroupedSample]) -> GroupedSample:
    return table("rural", "household")


@pytest.fixture
def urban(table: Callable[[str, str], GroupedSample]) -> GroupedSample:
    return table("urban", "household")
