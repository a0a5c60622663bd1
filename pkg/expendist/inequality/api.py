"""Lorenz curves, Gini coefficients and top shares."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from expendist.core import Logger, write_frame
from expendist.core.errors import DegenerateSample, InputError, InvalidParams, UndefinedMean
from expendist.distributions import Distribution
from expendist.distributions.families import SeedLike
from expendist.grouped import GroupedSample
from expendist.types import ArrayLike, PathLike

log = Logger("expendist.inequality")

METHODS = ("grouped_trapezoid", "pairwise_sample")
DEFAULT_SCENARIOS: dict[str, dict[str, float]] = {
    "baseline": {},
    "nu=2.5": {"nu": 2.5},
    "pi=0.15": {"pi": 0.15},
    "nu=1.1": {"nu": 1.1},
}
_TOL = 1e-12


@dataclass(frozen=True)
class LorenzCurve:
    """
    Piecewise-linear Lorenz curve through (P_i, Q_i), from (0, 0) to (1, 1).

    Attributes:
        P: cumulative population shares
        Q: cumulative expenditure shares, expenditure ordered ascending
    """

    P: np.ndarray
    Q: np.ndarray

    def __post_init__(self) -> None:
        P, Q = np.asarray(self.P, dtype=float), np.asarray(self.Q, dtype=float)
        if P.shape != Q.shape or P.ndim != 1 or len(P) < 2:
            raise InputError("Lorenz curve needs matching P and Q with at least two points")
        if abs(P[0]) > _TOL or abs(Q[0]) > _TOL or abs(P[-1] - 1) > 1e-9 or abs(Q[-1] - 1) > 1e-9:
            raise InputError("Lorenz curve must run from (0, 0) to (1, 1)")
        if np.any(np.diff(P) < -_TOL) or np.any(np.diff(Q) < -_TOL):
            raise InputError("Lorenz curve coordinates must be nondecreasing")
        if np.any(Q > P + 1e-9):
            raise InputError("Lorenz curve lies above the line of equality")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)

    @property
    def points(self) -> list[tuple[float, float]]:
        return [(float(p), float(q)) for p, q in zip(self.P, self.Q, strict=True)]

    def __len__(self) -> int:
        return len(self.P)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"P": self.P, "Q": self.Q})


@dataclass(frozen=True)
class GiniEstimate:
    """Gini coefficient in percent and the method that produced it."""

    value: float
    method: str = "grouped_trapezoid"

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise InvalidParams(f"method must be one of {METHODS}, got {self.method!r}")
        if not 0.0 <= self.value <= 100.0:
            raise InvalidParams(f"Gini must lie in [0, 100], got {self.value}")

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        return f"{self.value:.2f}"

    def to_dict(self) -> dict[str, Any]:
        return {"gini": self.value, "method": self.method}


def _curve(P: np.ndarray, Q: np.ndarray) -> LorenzCurve:
    P = np.concatenate(([0.0], P))
    Q = np.concatenate(([0.0], Q))
    P[-1] = Q[-1] = 1.0
    return LorenzCurve(P, Q)


def lorenz_from_grouped(sample: GroupedSample, unit: str | None = None) -> LorenzCurve:
    """
    Lorenz points of a grouped table: P_i = Σ p_j, Q_i = Σ p_j x̄_j / Σ p_j x̄_j (j ≤ i).

    Shares p_j are the class frequencies over their actual column total.

    Raises:
        MissingClassMeans: the table has classes without means
    """
    x = sample.class_means
    p = sample.proportions(unit)
    q = p * x
    return _curve(np.cumsum(p), np.cumsum(q) / q.sum())


def _validated(values: ArrayLike) -> np.ndarray:
    x = np.asarray(values, dtype=float).ravel()
    if len(x) < 2:
        raise DegenerateSample(f"need at least two values, got {len(x)}")
    if np.any(~np.isfinite(x)) or np.any(x < 0):
        raise InputError("values must be finite and nonnegative")
    if not x.sum() > 0:
        raise DegenerateSample("values sum to zero")
    return x


def lorenz_from_sample(values: ArrayLike) -> LorenzCurve:
    """Step Lorenz curve of a raw sample: (i/n, share of the i smallest values)."""
    x = np.sort(_validated(values))
    n = len(x)
    return _curve(np.arange(1, n + 1) / n, np.cumsum(x) / x.sum())


def gini_from_lorenz(curve: LorenzCurve) -> GiniEstimate:
    """(1 − 2A)·100 with A the trapezoid area under the piecewise-linear curve."""
    area = float(np.sum(np.diff(curve.P) * (curve.Q[1:] + curve.Q[:-1]) / 2.0))
    return GiniEstimate(min(max((1.0 - 2.0 * area) * 100.0, 0.0), 100.0), "grouped_trapezoid")


def gini_pairwise(values: ArrayLike) -> GiniEstimate:
    """
    Mean absolute difference over twice the mean, in percent.

    Uses the sorted form G = 2 Σ i·x_(i) / (n Σ x) − (n + 1)/n, which equals the double sum
    (1/2μ)(1/n²) Σ_ij |x_i − x_j| exactly.

    Raises:
        DegenerateSample: fewer than two values or all zero

    Time Complexity: O(n log n)
    """
    x = np.sort(_validated(values))
    n = len(x)
    ranks = np.arange(1, n + 1, dtype=float)
    g = 2.0 * np.sum(ranks * x) / (n * x.sum()) - (n + 1.0) / n
    return GiniEstimate(min(max(g * 100.0, 0.0), 100.0), "pairwise_sample")


def top_share_of_sample(values: ArrayLike, fraction: float) -> float:
    """Share of the total held by the largest round(fraction · n) values."""
    if not 0.0 < fraction < 1.0:
        raise InvalidParams(f"fraction must lie in (0, 1), got {fraction}")
    x = np.sort(_validated(values))
    m = max(1, int(round(fraction * len(x))))
    return float(x[-m:].sum() / x.sum())


def _require_mean(spec: Distribution) -> None:
    if spec.mean() is None:
        raise UndefinedMean(f"{spec} has no finite mean")


def top_share(
    spec: Distribution, fraction: float, n: int = 1_000_000, seed: SeedLike = None
) -> float:
    """
    Monte-Carlo share of total expenditure held by the top ``fraction`` of ``n`` draws.

    Raises:
        UndefinedMean: the distribution has no finite mean
    """
    _require_mean(spec)
    return top_share_of_sample(spec.sample(n, seed), fraction)


def simulation_gini(spec: Distribution, n: int = 1_000_000, seed: SeedLike = None) -> GiniEstimate:
    """
    Pairwise Gini of ``n`` draws from ``spec``.

    Raises:
        UndefinedMean: the distribution has no finite mean
    """
    _require_mean(spec)
    return gini_pairwise(spec.sample(n, seed))


@dataclass(frozen=True)
class SimulationStudy:
    """Repeated simulation Gini: the runs and their average."""

    spec: Distribution
    n: int
    seed: int
    values: tuple[float, ...] = field(default=())

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def std(self) -> float:
        return float(np.std(self.values, ddof=1)) if len(self.values) > 1 else 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "spec": self.spec.to_dict(),
            "n": self.n,
            "seed": self.seed,
            "gini_mean": self.mean,
            "gini_runs": list(self.values),
        }


def simulation_study(
    spec: Distribution, n: int = 1_000_000, seed: int = 0, repeats: int = 1
) -> SimulationStudy:
    """
    ``repeats`` independent simulation Ginis; run r draws from ``default_rng([seed, r])``.

    Raises:
        UndefinedMean: the distribution has no finite mean
        InvalidParams: repeats < 1
    """
    if repeats < 1:
        raise InvalidParams(f"repeats must be >= 1, got {repeats}")
    values = tuple(
        simulation_gini(spec, n, np.random.default_rng([seed, r])).value for r in range(repeats)
    )
    study = SimulationStudy(spec=spec, n=n, seed=seed, values=values)
    log.info("Simulated Gini for %s: %.2f over %d run(s)", spec, study.mean, repeats)
    return study


def simulation_scenarios(
    base: Distribution,
    n: int = 1_000_000,
    seed: int = 0,
    repeats: int = 1,
    scenarios: Mapping[str, Mapping[str, float]] | None = None,
) -> dict[str, SimulationStudy]:
    """
    Simulation studies for counterfactual parameter changes of ``base``.

    ``scenarios`` maps a name to parameter overrides; the default set varies ν to 2.5 and
    1.1 and π to 0.15 around the baseline.
    """
    results = {}
    for name, overrides in (scenarios or DEFAULT_SCENARIOS).items():
        try:
            spec = replace(base, **overrides)
        except TypeError as exc:
            raise InvalidParams(f"scenario {name!r}: {exc}") from exc
        results[name] = simulation_study(spec, n, seed, repeats)
    return results


def write_lorenz(curve: LorenzCurve, path: PathLike) -> Path:
    """Two-column ``P,Q`` CSV."""
    return write_frame(path, curve.to_frame(), float_format="%.12g")
