"""Time trends of fitted parameters and Gini coefficients."""

from .api import (
    DEGREES,
    GINI_COLUMNS,
    MIXTURE_PARAMETERS,
    PARAMETER_COLUMNS,
    SIGNIFICANCE,
    TrendResult,
    gini_trend_inputs,
    linear_trend,
    load_gini_series,
    load_parameter_table,
    parameter_series,
    trend_frame,
    trend_report,
    trend_table,
)

__all__ = [
    "DEGREES",
    "GINI_COLUMNS",
    "MIXTURE_PARAMETERS",
    "PARAMETER_COLUMNS",
    "SIGNIFICANCE",
    "TrendResult",
    "gini_trend_inputs",
    "linear_trend",
    "load_gini_series",
    "load_parameter_table",
    "parameter_series",
    "trend_frame",
    "trend_report",
    "trend_table",
]
