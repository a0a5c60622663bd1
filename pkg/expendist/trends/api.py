"""Least-squares time trends of fitted parameters and Gini coefficients."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
import math
from typing import Any

import numpy as np
import pandas as pd
import statsmodels.api as sm

from expendist.config import CONFIG
from expendist.core import Logger, read_table
from expendist.core.errors import (
    DegenerateDesign,
    InvalidParams,
    LengthMismatch,
    MalformedRow,
    MixedFamilies,
)
from expendist.distributions import Distribution, Mixture
from expendist.estimation import FitResult
from expendist.timeutils import survey_midpoint
from expendist.types import ArrayLike, PathLike

log = Logger("expendist.trends")

MIXTURE_PARAMETERS = ("x_M", "sigma2", "nu", "x0", "pi")
PARAMETER_COLUMNS = ("round_label", "unit", *MIXTURE_PARAMETERS)
GINI_COLUMNS = (
    "round_label",
    "urban_household",
    "rural_household",
    "urban_person",
    "rural_person",
)
DEGREES = (1, 2)
SIGNIFICANCE = 0.05

FitLike = FitResult | Distribution


@dataclass(frozen=True)
class TrendResult:
    """
    OLS trend of a series on time.

    For ``degree == 2`` times are centred on their mean, so ``intercept`` is the fitted value
    at the mean time and ``slope`` the derivative there; ``curvature`` is the t² coefficient.

    Attributes:
        intercept: value at t = 0 (linear) or at the mean time (quadratic)
        slope: change per year
        slope_p_value: two-sided p-value of slope = 0
        r2: coefficient of determination
        f_stat: overall F statistic
        ci95: 95% confidence interval of the slope
        error_variance: residual variance SSR / (n − p)
        n: observations
        degree: polynomial degree in t
        curvature: quadratic coefficient, 0 for a linear trend
    """

    intercept: float
    slope: float
    slope_p_value: float
    r2: float
    f_stat: float
    ci95: tuple[float, float]
    error_variance: float
    n: int
    degree: int = 1
    curvature: float = 0.0

    @property
    def significant(self) -> bool:
        return self.slope_p_value < SIGNIFICANCE

    @property
    def sign(self) -> int:
        return int(np.sign(self.slope))

    def to_dict(self) -> dict[str, Any]:
        return {
            "intercept": self.intercept,
            "slope": self.slope,
            "slope_p_value": self.slope_p_value,
            "r2": self.r2,
            "f_stat": self.f_stat,
            "ci95": list(self.ci95),
            "error_variance": self.error_variance,
            "n": self.n,
            "degree": self.degree,
            "curvature": self.curvature,
        }


def _flat_trend(t: np.ndarray, y: np.ndarray, degree: int) -> TrendResult:
    level = float(y[0])
    return TrendResult(
        intercept=level,
        slope=0.0,
        slope_p_value=1.0,
        r2=0.0,
        f_stat=0.0,
        ci95=(0.0, 0.0),
        error_variance=0.0,
        n=len(t),
        degree=degree,
    )


def linear_trend(times: ArrayLike, values: ArrayLike, degree: int = 1) -> TrendResult:
    """
    Regress ``values`` on a polynomial of ``times`` by OLS.

    The slope test is a two-sided t-test with n − degree − 1 degrees of freedom and the
    interval comes from the same t distribution. A constant series returns slope 0, p = 1.

    Raises:
        LengthMismatch: times and values differ in length
        DegenerateDesign: too few observations for the degree, or all times equal
        InvalidParams: degree other than 1 or 2
    """
    if degree not in DEGREES:
        raise InvalidParams(f"degree must be one of {DEGREES}, got {degree}")
    t = np.asarray(times, dtype=float).ravel()
    y = np.asarray(values, dtype=float).ravel()
    if len(t) != len(y):
        raise LengthMismatch(f"{len(t)} times but {len(y)} values")
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(y))):
        raise InvalidParams("times and values must be finite")
    if len(t) < degree + 2:
        raise DegenerateDesign(f"{len(t)} observations cannot fit a degree-{degree} trend")
    if np.ptp(t) == 0:
        raise DegenerateDesign("all times are equal")
    if np.ptp(y) == 0:
        return _flat_trend(t, y, degree)

    if degree == 1:
        design = sm.add_constant(t[:, None], has_constant="add")
    else:
        c = t - t.mean()
        design = sm.add_constant(np.column_stack([c, c**2]), has_constant="add")
    model = sm.OLS(y, design).fit()

    params = np.asarray(model.params)
    ci = np.asarray(model.conf_int(alpha=0.05))[1]
    with np.errstate(divide="ignore", invalid="ignore"):
        p_value = float(np.asarray(model.pvalues)[1])
        f_stat = float(model.fvalue)
    if math.isnan(p_value):
        p_value = 0.0
    if math.isnan(f_stat):
        f_stat = math.inf

    return TrendResult(
        intercept=float(params[0]),
        slope=float(params[1]),
        slope_p_value=min(max(p_value, 0.0), 1.0),
        r2=min(max(float(model.rsquared), 0.0), 1.0),
        f_stat=f_stat,
        ci95=(float(ci[0]), float(ci[1])),
        error_variance=float(model.scale),
        n=len(t),
        degree=degree,
        curvature=float(params[2]) if degree == 2 else 0.0,
    )


def _spec_of(fit: FitLike) -> Distribution:
    return fit.spec if isinstance(fit, FitResult) else fit


def trend_report(
    fit_series: Sequence[tuple[float, FitLike]], parameter: str, degree: int = 1
) -> TrendResult:
    """
    Trend of one fitted parameter across survey rounds.

    Args:
        fit_series: (survey midpoint, fit) pairs; fits may be FitResult or bare distributions
        parameter: parameter name, e.g. "x_M" or "pi"
        degree: 1 for a linear trend, 2 for the quadratic variant

    Raises:
        MixedFamilies: fits differ in family or frequency unit
        InvalidParams: the family has no such parameter
        DegenerateDesign: fewer than three fits or all midpoints equal
    """
    specs = [_spec_of(fit) for _, fit in fit_series]
    if len({s.family for s in specs}) > 1:
        raise MixedFamilies(f"fits span families {sorted({s.family for s in specs})}")
    units = {fit.unit for _, fit in fit_series if isinstance(fit, FitResult)}
    if len(units) > 1:
        raise MixedFamilies(f"fits span units {sorted(units)}")
    if specs and parameter not in specs[0].params():
        raise InvalidParams(f"{specs[0].family} has no parameter {parameter!r}")

    times = [t for t, _ in fit_series]
    values = [s.params()[parameter] for s in specs]
    return linear_trend(times, values, degree)


def _numeric_frame(frame: pd.DataFrame, columns: Sequence[str], path: PathLike) -> pd.DataFrame:
    out = frame.copy()
    for column in columns:
        try:
            out[column] = pd.to_numeric(out[column].str.strip(), errors="raise")
        except ValueError as exc:
            raise MalformedRow(f"{path}: non-numeric value in column {column}") from exc
    return out


def _checked(path: PathLike, expected: tuple[str, ...]) -> pd.DataFrame:
    frame = read_table(path)
    header = tuple(str(c).strip() for c in frame.columns)
    if header != expected:
        raise MalformedRow(f"{path}: header {','.join(header)} != {','.join(expected)}")
    frame.columns = list(expected)
    frame["round_label"] = frame["round_label"].str.strip()
    return frame


def load_parameter_table(path: PathLike) -> pd.DataFrame:
    """
    Published mixture parameters per round, header ``round_label,unit,x_M,sigma2,nu,x0,pi``.

    Raises:
        MalformedRow: wrong header, unknown unit or non-numeric parameter
    """
    frame = _numeric_frame(_checked(path, PARAMETER_COLUMNS), MIXTURE_PARAMETERS, path)
    frame["unit"] = frame["unit"].str.strip()
    bad = set(frame["unit"]) - {"household", "person"}
    if bad:
        raise MalformedRow(f"{path}: unknown unit(s) {sorted(bad)}")
    log.debug("Loaded %d parameter rows from %s", len(frame), path)
    return frame


def load_gini_series(path: PathLike) -> pd.DataFrame:
    """
    Published Gini coefficients per round, one column per population.

    Raises:
        MalformedRow: wrong header or non-numeric Gini
    """
    return _numeric_frame(_checked(path, GINI_COLUMNS), GINI_COLUMNS[1:], path)


def parameter_series(
    table: pd.DataFrame, unit: str = "household", encoding: str | None = None
) -> list[tuple[float, Mixture]]:
    """(survey midpoint, mixture) pairs for one unit of a parameter table, in time order."""
    encoding = CONFIG.time_encoding if encoding is None else encoding
    rows = table[table["unit"] == unit]
    series = [
        (
            survey_midpoint(row.round_label, encoding),
            Mixture(
                x_M=float(row.x_M),
                sigma2=float(row.sigma2),
                nu=float(row.nu),
                x0=float(row.x0),
                pi=float(row.pi),
            ),
        )
        for row in rows.itertuples(index=False)
    ]
    return sorted(series, key=lambda pair: pair[0])


def gini_trend_inputs(
    table: pd.DataFrame, population: str, encoding: str | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Midpoints and Gini values of one population column."""
    if population not in GINI_COLUMNS[1:]:
        raise InvalidParams(f"population must be one of {GINI_COLUMNS[1:]}, got {population!r}")
    encoding = CONFIG.time_encoding if encoding is None else encoding
    times = np.array([survey_midpoint(label, encoding) for label in table["round_label"]])
    return times, table[population].to_numpy(dtype=float)


def trend_table(
    series_by_population: Mapping[str, Sequence[tuple[float, FitLike]]],
    parameters: Sequence[str] = MIXTURE_PARAMETERS,
    degree: int = 1,
) -> dict[str, dict[str, TrendResult]]:
    """
    Trend of every parameter for every population, keyed ``[parameter][population]``.
    """
    table: dict[str, dict[str, TrendResult]] = {}
    for parameter in parameters:
        table[parameter] = {}
        for population, series in series_by_population.items():
            result = trend_report(series, parameter, degree)
            table[parameter][population] = result
            log.debug(
                "%s %s: slope %.4g (p=%.4f)",
                population,
                parameter,
                result.slope,
                result.slope_p_value,
            )
    return table


def trend_frame(table: Mapping[str, Mapping[str, TrendResult]]) -> pd.DataFrame:
    """Long-format view: one row per (parameter, population)."""
    return pd.DataFrame(
        [
            {"parameter": parameter, "population": population, **result.to_dict()}
            for parameter, row in table.items()
            for population, result in row.items()
        ]
    )
