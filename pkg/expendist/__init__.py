"""expendist - Heavy-tailed models for grouped expenditure survey data."""

__version__ = "1.0.0"

# ==========================================
# Submodules
# ==========================================
from . import (
    config,
    core,
    distributions,
    estimation,
    format,
    gof,
    grouped,
    inequality,
    kde,
    microfoundation,
    timeutils,
    trends,
    types,
)

# ==========================================
# Core utilities (from core module)
# ==========================================
from .core import CLI, CLIError, ExpendistError, InputError, Logger, NumericError, OutputError

# ==========================================
# Domain API
# ==========================================
from .distributions import Distribution, Lognormal, Mixture, Pareto, make_spec
from .estimation import FitResult, chi2_statistic, fit_chi2, fit_weibull_grid
from .gof import GofReport, mc_pvalue
from .grouped import GroupedSample, load_grouped_csv
from .inequality import gini_from_lorenz, gini_pairwise, lorenz_from_grouped
from .kde import grouped_kde
from .microfoundation import AgentModelConfig, simulate_consumption
from .trends import TrendResult, linear_trend, trend_report

# ==========================================
# Type definitions (from types module)
# ==========================================
from .types import ArrayLike, PathLike

# ==========================================
# Exports
# ==========================================
__all__ = [
    "__version__",
    # Submodules
    "config",
    "core",
    "distributions",
    "estimation",
    "format",
    "gof",
    "grouped",
    "inequality",
    "kde",
    "microfoundation",
    "timeutils",
    "trends",
    "types",
    # Core
    "CLI",
    "CLIError",
    "ExpendistError",
    "InputError",
    "NumericError",
    "OutputError",
    "Logger",
    # Domain
    "AgentModelConfig",
    "Distribution",
    "FitResult",
    "GofReport",
    "GroupedSample",
    "Lognormal",
    "Mixture",
    "Pareto",
    "TrendResult",
    "chi2_statistic",
    "fit_chi2",
    "fit_weibull_grid",
    "gini_from_lorenz",
    "gini_pairwise",
    "grouped_kde",
    "linear_trend",
    "load_grouped_csv",
    "lorenz_from_grouped",
    "make_spec",
    "mc_pvalue",
    "simulate_consumption",
    "trend_report",
    # Types
    "ArrayLike",
    "PathLike",
]
