"""Grouped (binned) expenditure tables: ingestion, validation, deflation and pooling."""

from .api import (
    deflate,
    infer_metadata,
    load_deflators,
    load_grouped_csv,
    load_sector_weights,
    sector_weight,
    write_grouped_csv,
)
from .sample import (
    COLUMNS,
    MIN_CLASSES,
    N_EFFECTIVE,
    DeflatorSeries,
    ExpenditureClass,
    GroupedSample,
    SectorWeights,
    allowed_slack,
)

__all__ = [
    "COLUMNS",
    "MIN_CLASSES",
    "N_EFFECTIVE",
    "DeflatorSeries",
    "ExpenditureClass",
    "GroupedSample",
    "SectorWeights",
    "allowed_slack",
    "deflate",
    "infer_metadata",
    "load_deflators",
    "load_grouped_csv",
    "load_sector_weights",
    "sector_weight",
    "write_grouped_csv",
]
