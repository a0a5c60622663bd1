"""Reading, writing, deflating and pooling grouped expenditure tables."""

from __future__ import annotations

import math
from pathlib import Path
import re

import numpy as np
import pandas as pd

from expendist.core import Logger, read_table, write_text
from expendist.core.errors import InputError, MalformedRow, MissingDeflator
from expendist.timeutils import survey_midpoint as midpoint_of
from expendist.types import PathLike

from .sample import (
    COLUMNS,
    N_EFFECTIVE,
    DeflatorSeries,
    ExpenditureClass,
    GroupedSample,
    SectorWeights,
)

log = Logger("expendist.grouped")

STEM_PATTERN = re.compile(r"^(rural|urban)[_-](.+)$", re.IGNORECASE)


def _number(cell: str, column: str, row: int, allow_empty: bool = False) -> float | None:
    text = cell.strip()
    if not text:
        if allow_empty:
            return None
        raise MalformedRow(f"row {row}: empty {column}")
    try:
        value = float(text)
    except ValueError as exc:
        raise MalformedRow(f"row {row}: non-numeric {column} {cell!r}") from exc
    if math.isnan(value):
        raise MalformedRow(f"row {row}: {column} is NaN")
    return value


def _check_header(frame: pd.DataFrame, expected: tuple[str, ...], path: PathLike) -> None:
    header = tuple(str(c).strip() for c in frame.columns)
    if header != expected:
        raise MalformedRow(f"{path}: header {','.join(header)} != {','.join(expected)}")


def infer_metadata(path: PathLike) -> tuple[str | None, str]:
    """
    Sector and round label from a file named ``<sector>_<round>.csv``.

    Examples:
        >>> infer_metadata("data/rural_2006-07.csv")
        ('rural', '2006-07')
        >>> infer_metadata("table2.csv")
        (None, '')
    """
    match = STEM_PATTERN.match(Path(path).stem)
    if match is None:
        return None, ""
    return match.group(1).lower(), match.group(2)


def load_grouped_csv(
    path: PathLike,
    unit: str = "household",
    sector: str | None = None,
    round_label: str | None = None,
    survey_midpoint: float | None = None,
    rounding_slack: int | str = "published",
) -> GroupedSample:
    """
    Load a grouped table with header ``lower,upper,class_mean,freq_households,freq_persons``.

    Sector and round default to what the file name says (``rural_2006-07.csv``); the survey
    midpoint defaults to the round label's midpoint encoding when it parses.

    Raises:
        FileNotFoundError: the file does not exist
        MalformedRow: wrong header or a non-numeric cell
        NonContiguousClasses / FrequencySumMismatch / MeanOutsideClass / TooFewClasses
    """
    frame = read_table(path)
    _check_header(frame, COLUMNS, path)

    classes = []
    for i, row in enumerate(frame.itertuples(index=False), start=2):
        lower, upper, mean, fh, fp = (str(v) for v in row)
        classes.append(
            ExpenditureClass(
                lower=_number(lower, "lower", i),  # type: ignore[arg-type]
                upper=_number(upper, "upper", i),  # type: ignore[arg-type]
                class_mean=_number(mean, "class_mean", i, allow_empty=True),
                freq_households=_number(fh, "freq_households", i),  # type: ignore[arg-type]
                freq_persons=_number(fp, "freq_persons", i),  # type: ignore[arg-type]
            )
        )

    inferred_sector, inferred_round = infer_metadata(path)
    label = round_label if round_label is not None else inferred_round
    if survey_midpoint is None and label:
        try:
            survey_midpoint = midpoint_of(label)
        except InputError:
            log.debug("No survey midpoint for round label %r", label)

    sample = GroupedSample(
        classes=tuple(classes),
        sector=sector or inferred_sector,
        unit=unit,
        round_label=label,
        survey_midpoint=survey_midpoint,
        rounding_slack=rounding_slack,
    )
    total = sample.total()
    if total != N_EFFECTIVE:
        log.warning(
            "%s: %s frequencies sum to %g, accepted within rounding slack",
            Path(path).name,
            unit,
            total,
        )
    log.info(
        "Loaded %s: %d classes, sector=%s, round=%s, unit=%s",
        Path(path).name,
        len(sample),
        sample.sector,
        sample.round_label or "?",
        unit,
    )
    return sample


def _cell(value: float | None) -> str:
    if value is None:
        return ""
    if math.isinf(value):
        return "inf"
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def write_grouped_csv(sample: GroupedSample, path: PathLike) -> Path:
    """Write ``sample`` in the layout ``load_grouped_csv`` reads."""
    lines = [",".join(COLUMNS)]
    for c in sample.classes:
        lines.append(
            ",".join(
                _cell(v)
                for v in (c.lower, c.upper, c.class_mean, c.freq_households, c.freq_persons)
            )
        )
    return write_text(path, "\n".join(lines) + "\n")


def deflate(sample: GroupedSample, series: DeflatorSeries) -> GroupedSample:
    """
    Express ``sample`` in constant rupees: limits and means divided by the round's index.

    Raises:
        MissingDeflator: no index for ``sample.round_label``
    """
    if sample.round_label not in series:
        raise MissingDeflator(f"no deflator for round {sample.round_label!r}")
    index = series[sample.round_label]
    classes = [
        ExpenditureClass(
            lower=c.lower / index,
            upper=c.upper / index,
            class_mean=None if c.class_mean is None else c.class_mean / index,
            freq_households=c.freq_households,
            freq_persons=c.freq_persons,
        )
        for c in sample.classes
    ]
    log.debug("Deflated round %s by %g", sample.round_label, index)
    return sample.with_classes(classes)


def sector_weight(weights: SectorWeights, year: float) -> tuple[float, float]:
    """
    Rural and urban population shares at ``year``.

    Counts are interpolated linearly between census anchors and extrapolated along the
    nearest segment outside them.

    Raises:
        InputError: fewer than two anchors, or the extrapolated counts are not positive
    """
    years = weights.years
    if len(years) < 2:
        raise InputError("sector_weight needs at least two census anchors")

    seg = int(np.clip(np.searchsorted(years, year, side="right") - 1, 0, len(years) - 2))
    t = (year - years[seg]) / (years[seg + 1] - years[seg])
    r, u = weights.rural_counts, weights.urban_counts
    rural = r[seg] + t * (r[seg + 1] - r[seg])
    urban = u[seg] + t * (u[seg + 1] - u[seg])
    if rural < 0 or urban < 0 or rural + urban <= 0:
        raise InputError(f"extrapolated population counts at {year} are not positive")
    total = rural + urban
    return float(rural / total), float(urban / total)


def load_deflators(path: PathLike) -> DeflatorSeries:
    """Read a ``round_label,index`` CSV."""
    frame = read_table(path)
    _check_header(frame, ("round_label", "index"), path)
    entries = {
        str(label).strip(): _number(str(value), "index", i)
        for i, (label, value) in enumerate(frame.itertuples(index=False), start=2)
    }
    return DeflatorSeries(entries)  # type: ignore[arg-type]


def load_sector_weights(path: PathLike) -> SectorWeights:
    """Read a ``year,rural_count,urban_count`` CSV."""
    frame = read_table(path)
    _check_header(frame, ("year", "rural_count", "urban_count"), path)
    anchors = tuple(
        tuple(_number(str(v), name, i) for v, name in zip(row, frame.columns, strict=True))
        for i, row in enumerate(frame.itertuples(index=False), start=2)
    )
    return SectorWeights(anchors)  # type: ignore[arg-type]
