"""Grouped expenditure tables in the NSSO per-1000 layout."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
import math

import numpy as np
import pandas as pd

from expendist.core.errors import (
    FrequencySumMismatch,
    InputError,
    InvalidConfig,
    MalformedRow,
    MeanOutsideClass,
    MissingClassMeans,
    NonContiguousClasses,
    TooFewClasses,
)
from expendist.types import SECTORS, UNITS

N_EFFECTIVE = 1000
MIN_CLASSES = 3
COLUMNS = ("lower", "upper", "class_mean", "freq_households", "freq_persons")


def allowed_slack(n_classes: int, rounding_slack: int | str = "published") -> int:
    """
    Largest accepted |Σ freq − 1000| for a table with ``n_classes`` classes.

    Published per-1000 columns are rounded class by class, so "published" allows half a
    unit per class (floor(k/2)); an integer is used as given and 0 is the strict rule.
    """
    if rounding_slack == "published":
        return n_classes // 2
    if isinstance(rounding_slack, str):
        raise InvalidConfig(f"rounding_slack must be 'published' or an integer: {rounding_slack!r}")
    if rounding_slack < 0:
        raise InvalidConfig("rounding_slack cannot be negative")
    return int(rounding_slack)


def _check_unit(unit: str) -> str:
    if unit not in UNITS:
        raise InputError(f"unit must be one of {UNITS}, got {unit!r}")
    return unit


@dataclass(frozen=True)
class ExpenditureClass:
    """
    One row of a grouped table: MPCE class limits, class mean and per-1000 frequencies.

    Attributes:
        lower: lower class limit (rupees/month, >= 0)
        upper: upper class limit, ``math.inf`` for the open top class
        class_mean: average MPCE within the class, None when not published
        freq_households: households per 1000
        freq_persons: persons per 1000
    """

    lower: float
    upper: float
    class_mean: float | None
    freq_households: float
    freq_persons: float

    def __post_init__(self) -> None:
        values = (self.lower, self.upper, self.freq_households, self.freq_persons)
        if any(math.isnan(v) for v in values):
            raise MalformedRow(f"NaN in class {self}")
        if self.lower < 0 or math.isinf(self.lower):
            raise MalformedRow(f"lower limit must be finite and >= 0, got {self.lower}")
        if not self.lower < self.upper:
            raise NonContiguousClasses(f"class [{self.lower}, {self.upper}] has lower >= upper")
        if self.freq_households < 0 or self.freq_persons < 0:
            raise MalformedRow(f"negative frequency in class [{self.lower}, {self.upper}]")
        if self.class_mean is not None and not self.lower <= self.class_mean <= self.upper:
            raise MeanOutsideClass(
                f"class mean {self.class_mean} outside [{self.lower}, {self.upper}]"
            )

    @property
    def is_open(self) -> bool:
        return math.isinf(self.upper)

    def frequency(self, unit: str) -> float:
        return self.freq_households if _check_unit(unit) == "household" else self.freq_persons


@dataclass(frozen=True)
class GroupedSample:
    """
    Validated grouped table for one sector, survey round and unit.

    Immutable once constructed. ``unit`` selects the frequency column every downstream
    statistic uses unless told otherwise.

    Attributes:
        classes: contiguous classes in ascending expenditure order
        sector: "rural", "urban" or None when unknown
        unit: "household" or "person"
        round_label: survey round, e.g. "2006-07"
        survey_midpoint: fractional-year time point used by trend regressions
        rounding_slack: accepted deviation of the frequency total from 1000
    """

    classes: tuple[ExpenditureClass, ...]
    sector: str | None = None
    unit: str = "household"
    round_label: str = ""
    survey_midpoint: float | None = None
    rounding_slack: int | str = field(default="published", compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "classes", tuple(self.classes))
        _check_unit(self.unit)
        if self.sector is not None and self.sector not in SECTORS:
            raise InputError(f"sector must be one of {SECTORS}, got {self.sector!r}")

        k = len(self.classes)
        if k < MIN_CLASSES:
            raise TooFewClasses(f"a grouped sample needs at least {MIN_CLASSES} classes, got {k}")

        for i, (left, right) in enumerate(zip(self.classes[:-1], self.classes[1:], strict=True)):
            if left.is_open:
                raise NonContiguousClasses(f"only the last class may be open (class {i + 1})")
            if left.upper != right.lower:
                raise NonContiguousClasses(
                    f"class {i + 1} ends at {left.upper} but class {i + 2} starts at {right.lower}"
                )

        total = self.total()
        slack = allowed_slack(k, self.rounding_slack)
        if abs(total - N_EFFECTIVE) > slack:
            raise FrequencySumMismatch(
                f"{self.unit} frequencies sum to {total:g}, expected {N_EFFECTIVE} "
                f"(rounding slack {slack})"
            )

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def limits(self) -> np.ndarray:
        """All k + 1 class boundaries z_0 < z_1 < ... < z_k (z_k may be inf)."""
        return np.array([c.lower for c in self.classes] + [self.classes[-1].upper], dtype=float)

    @property
    def interior_limits(self) -> np.ndarray:
        """The k − 1 boundaries shared by adjacent classes."""
        return self.limits[1:-1]

    @property
    def has_means(self) -> bool:
        return all(c.class_mean is not None for c in self.classes)

    @property
    def class_means(self) -> np.ndarray:
        """
        Raises:
            MissingClassMeans: at least one class has no published mean
        """
        if not self.has_means:
            raise MissingClassMeans(f"round {self.round_label or '?'} has classes without means")
        return np.array([c.class_mean for c in self.classes], dtype=float)

    def frequencies(self, unit: str | None = None) -> np.ndarray:
        u = unit or self.unit
        return np.array([c.frequency(u) for c in self.classes], dtype=float)

    def total(self, unit: str | None = None) -> float:
        return float(self.frequencies(unit).sum())

    def proportions(self, unit: str | None = None) -> np.ndarray:
        """Frequencies divided by their actual column total."""
        freq = self.frequencies(unit)
        return freq / freq.sum()

    def with_unit(self, unit: str) -> GroupedSample:
        """Same table with another frequency column selected (re-validated)."""
        return replace(self, unit=_check_unit(unit))

    def with_classes(self, classes: Iterable[ExpenditureClass]) -> GroupedSample:
        return replace(self, classes=tuple(classes))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                (c.lower, c.upper, c.class_mean, c.freq_households, c.freq_persons)
                for c in self.classes
            ],
            columns=list(COLUMNS),
        )


@dataclass(frozen=True)
class DeflatorSeries:
    """Price index per survey round, base period = 1."""

    entries: Mapping[str, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", dict(self.entries))
        for label, value in self.entries.items():
            if not value > 0 or math.isinf(value):
                raise InputError(f"deflator for {label!r} must be positive and finite, got {value}")

    def __contains__(self, label: object) -> bool:
        return label in self.entries

    def __getitem__(self, label: str) -> float:
        return self.entries[label]


@dataclass(frozen=True)
class SectorWeights:
    """Census anchors ``(year, rural_count, urban_count)`` in strictly increasing year order."""

    anchors: tuple[tuple[float, float, float], ...]

    def __post_init__(self) -> None:
        anchors = tuple((float(y), float(r), float(u)) for y, r, u in self.anchors)
        object.__setattr__(self, "anchors", anchors)
        for year, rural, urban in anchors:
            if not (rural > 0 and urban > 0):
                raise InputError(f"population counts must be positive (year {year})")
        years = [a[0] for a in anchors]
        if any(b <= a for a, b in zip(years[:-1], years[1:], strict=True)):
            raise InputError("sector weight anchor years must be strictly increasing")

    @property
    def years(self) -> np.ndarray:
        return np.array([a[0] for a in self.anchors])

    @property
    def rural_counts(self) -> np.ndarray:
        return np.array([a[1] for a in self.anchors])

    @property
    def urban_counts(self) -> np.ndarray:
        return np.array([a[2] for a in self.anchors])
