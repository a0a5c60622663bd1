"""Monte-Carlo goodness-of-fit tests for grouped tables."""

from .api import (
    STATISTICS,
    GofReport,
    bin_sample,
    ks_from_counts,
    ks_grouped,
    mc_pvalue,
)

__all__ = [
    "STATISTICS",
    "GofReport",
    "bin_sample",
    "ks_from_counts",
    "ks_grouped",
    "mc_pvalue",
]
