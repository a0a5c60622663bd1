"""Weibull shape search by regressing the log empirical density on log x and x^k."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
import math

import numpy as np
import statsmodels.api as sm

from expendist.core import Logger
from expendist.core.errors import InvalidParams, SingularRegression
from expendist.grouped import N_EFFECTIVE, GroupedSample

log = Logger("expendist.estimation.weibull")

DEFAULT_K_GRID = tuple(round(1.0 + 0.1 * i, 1) for i in range(41))


@dataclass(frozen=True)
class WeibullGridFit:
    """
    Best grid point of the Weibull regression.

    Unpacks as ``k, lam, r2``; ``r2_by_k`` keeps the whole R² profile (NaN where the
    x^k coefficient is not negative and λ is undefined).
    """

    k: float
    lam: float
    r2: float
    r2_by_k: dict[float, float] = field(default_factory=dict, compare=False)
    tie_shape: bool = False

    def __iter__(self) -> Iterator[float]:
        return iter((self.k, self.lam, self.r2))

    def to_dict(self) -> dict[str, object]:
        return {"k": self.k, "lambda": self.lam, "r2": self.r2, "tie_shape": self.tie_shape}


def empirical_log_density(
    sample: GroupedSample, unit: str | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """
    Class means and log(freq / (1000 · width)) over the closed, non-empty classes.

    Raises:
        MissingClassMeans: the table has no class means
    """
    x = sample.class_means
    freq = sample.frequencies(unit)
    lims = sample.limits
    width = np.diff(lims)
    keep = np.isfinite(width) & (freq > 0)
    return x[keep], np.log(freq[keep] / (N_EFFECTIVE * width[keep]))


def fit_weibull_grid(
    sample: GroupedSample,
    unit: str | None = None,
    k_grid: Sequence[float] | None = None,
    tie_shape: bool = False,
) -> WeibullGridFit:
    """
    Choose the Weibull shape k by the R² of an OLS of log density on log x and x^k.

    The Weibull log density is log(k/λ^k) + (k − 1)·log x − λ^(−k)·x^k, so for each k the
    x^k coefficient c gives λ = (−c)^(−1/k). The regressor is (x / x_max)^k, which keeps the
    design well conditioned up to k = 5, and λ = x_max · (−c)^(−1/k) for its coefficient.
    With ``tie_shape`` the log x coefficient is held at k − 1 and only x^k is regressed; R²
    is then measured on the log density itself so values stay comparable across k.

    Raises:
        MissingClassMeans: the table has no class means
        InvalidParams: empty grid or k outside [1, 5]
        SingularRegression: too few usable classes, a rank-deficient design, or no k with a
            negative x^k coefficient
    """
    grid = tuple(float(k) for k in (k_grid if k_grid is not None else DEFAULT_K_GRID))
    if not grid:
        raise InvalidParams("k_grid is empty")
    if any(not 1.0 <= k <= 5.0 for k in grid):
        raise InvalidParams("k_grid values must lie in [1, 5]")

    x, y = empirical_log_density(sample, unit)
    x_ref = float(x.max())
    n_regressors = 2 if tie_shape else 3
    if len(x) <= n_regressors:
        raise SingularRegression(
            f"{len(x)} usable classes cannot identify {n_regressors} coefficients"
        )

    sst = float(np.sum((y - y.mean()) ** 2))
    profile: dict[float, float] = {}
    lams: dict[float, float] = {}
    for k in grid:
        xk = (x / x_ref) ** k
        if tie_shape:
            design = sm.add_constant(xk[:, None], has_constant="add")
            target = y - (k - 1.0) * np.log(x)
        else:
            design = sm.add_constant(np.column_stack([np.log(x), xk]), has_constant="add")
            target = y
        if np.linalg.matrix_rank(design / np.linalg.norm(design, axis=0)) < design.shape[1]:
            raise SingularRegression(f"design matrix is rank deficient at k={k}")

        model = sm.OLS(target, design).fit()
        c = float(model.params[-1])
        if c >= 0:
            profile[k] = math.nan
            continue
        profile[k] = 1.0 - float(model.ssr) / sst
        lams[k] = x_ref * (-c) ** (-1.0 / k)
        log.debug("k=%.2f: R2=%.6f lambda=%.4g", k, profile[k], lams[k])

    if not lams:
        raise SingularRegression("no k in the grid gives a negative x^k coefficient")

    best = max(lams, key=lambda k: (profile[k], -k))
    log.info(
        "Weibull grid (%s): k=%.2f lambda=%.4g R2=%.4f",
        "tied shape" if tie_shape else "free",
        best,
        lams[best],
        profile[best],
    )
    return WeibullGridFit(
        k=best, lam=lams[best], r2=profile[best], r2_by_k=profile, tie_shape=tie_shape
    )
