"""Minimum-χ² estimation for grouped tables and the Weibull grid regression."""

from .chi2 import (
    SPARSE_THRESHOLD,
    chi2_at,
    chi2_statistic,
    class_masses,
    expected_class_counts,
    merge_sparse,
)
from .fit import (
    FitResult,
    boundary_params,
    compare_families,
    fit_chi2,
    from_unconstrained,
    starting_points,
    to_unconstrained,
)
from .weibull import DEFAULT_K_GRID, WeibullGridFit, empirical_log_density, fit_weibull_grid

__all__ = [
    "DEFAULT_K_GRID",
    "SPARSE_THRESHOLD",
    "FitResult",
    "WeibullGridFit",
    "boundary_params",
    "chi2_at",
    "chi2_statistic",
    "class_masses",
    "compare_families",
    "empirical_log_density",
    "expected_class_counts",
    "fit_chi2",
    "fit_weibull_grid",
    "from_unconstrained",
    "merge_sparse",
    "starting_points",
    "to_unconstrained",
]
