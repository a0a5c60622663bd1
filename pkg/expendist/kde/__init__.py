"""Grouped-data kernel density estimation on the log scale."""

from .api import (
    SCALES,
    KdeCurve,
    default_grid,
    grouped_kde,
    kde_series,
    log_density_function,
    log_sigma,
    pool_national,
    pooled_bandwidth,
    pooled_log_sigma,
    silverman_bandwidth,
    write_curve,
)

__all__ = [
    "SCALES",
    "KdeCurve",
    "default_grid",
    "grouped_kde",
    "kde_series",
    "log_density_function",
    "log_sigma",
    "pool_national",
    "pooled_bandwidth",
    "pooled_log_sigma",
    "silverman_bandwidth",
    "write_curve",
]
