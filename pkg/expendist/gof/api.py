"""Monte-Carlo goodness-of-fit for grouped tables.

The null distribution of a statistic is built by drawing synthetic samples from the fitted
model, binning them into the table's own class limits and recomputing the statistic, so
observed and simulated values are always computed on the same grouped footing.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from expendist.config import CONFIG
from expendist.core import Logger
from expendist.core.errors import InvalidParams
from expendist.distributions import Distribution
from expendist.estimation import chi2_statistic, class_masses
from expendist.format import track_simple
from expendist.grouped import N_EFFECTIVE, GroupedSample
from expendist.timeutils import timer
from expendist.types import ArrayLike

log = Logger("expendist.gof")

STATISTICS = ("ks", "chi2")
MIN_REPORTABLE_REPLICATES = 100


@dataclass(frozen=True)
class GofReport:
    """
    Monte-Carlo test outcome.

    Attributes:
        statistic_name: "ks" or "chi2"
        observed_value: statistic of the published table against the model
        p_value: share of replicates whose statistic strictly exceeds the observed one
        replicates: number of synthetic tables
        mc_sample_size: observations per synthetic table
        seed: master seed; replicate i uses ``default_rng([seed, i])``
    """

    statistic_name: str
    observed_value: float
    p_value: float
    replicates: int
    mc_sample_size: int
    seed: int

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def summary(self) -> str:
        return (
            f"{self.statistic_name.upper()} = {self.observed_value:.4f}, "
            f"p = {self.p_value:.4f} ({self.replicates} replicates of {self.mc_sample_size}, "
            f"seed {self.seed})"
        )


def bin_sample(values: ArrayLike, limits: ArrayLike) -> np.ndarray:
    """
    Counts of ``values`` per class for boundaries z_0 < ... < z_k.

    Classes are closed below and open above; anything under z_1 lands in the first class and
    anything at or beyond z_{k-1} in the last (open) class.
    """
    z = np.asarray(limits, dtype=float)
    idx = np.searchsorted(z[1:-1], np.asarray(values, dtype=float), side="right")
    return np.bincount(idx, minlength=len(z) - 1).astype(float)


def ks_from_counts(counts: ArrayLike, masses: ArrayLike, total: float) -> float:
    """max over interior limits of |cumulative count / total − model cdf|."""
    empirical = np.cumsum(np.asarray(counts, dtype=float))[:-1] / total
    model = np.cumsum(np.asarray(masses, dtype=float))[:-1]
    return float(np.max(np.abs(empirical - model)))


def ks_grouped(sample: GroupedSample, spec: Distribution, unit: str | None = None) -> float:
    """
    Kolmogorov–Smirnov distance evaluated only at the interior class limits.

    The empirical cdf at z_i is the cumulative frequency through class i divided by 1000.
    """
    masses = class_masses(spec, sample.limits)
    return ks_from_counts(sample.frequencies(unit), masses, N_EFFECTIVE)


def _statistic(name: str, counts: np.ndarray, masses: np.ndarray, total: float) -> float:
    if name == "ks":
        return ks_from_counts(counts, masses, total)
    return chi2_statistic(counts, total * masses)


def _replicate(
    spec: Distribution,
    limits: np.ndarray,
    masses: np.ndarray,
    name: str,
    size: int,
    seed: int,
    index: int,
) -> float:
    draws = spec.sample(size, np.random.default_rng([seed, index]))
    return _statistic(name, bin_sample(draws, limits), masses, size)


@timer("mc_pvalue", reporter=log.info)
def mc_pvalue(
    sample: GroupedSample,
    spec: Distribution,
    unit: str | None = None,
    statistic_name: str = "ks",
    replicates: int | None = None,
    seed: int | None = None,
    mc_sample_size: int | None = None,
    threads: int | None = None,
    progress: bool = False,
) -> GofReport:
    """
    Monte-Carlo p-value of a grouped KS or χ² statistic at fixed model parameters.

    Replicate ``i`` seeds its own generator from ``(seed, i)``, so the result does not depend
    on ``threads``. Ties with the observed value count as not exceeding.

    Args:
        sample: published grouped table
        spec: fitted model
        unit: frequency column, default ``sample.unit``
        statistic_name: "ks" or "chi2"
        replicates: synthetic tables, default from config (1000)
        seed: master seed, default from config
        mc_sample_size: draws per synthetic table, default from config (1000)
        threads: worker threads, default from config
        progress: show a progress bar

    Raises:
        InvalidParams: unknown statistic or non-positive replicate count
    """
    if statistic_name not in STATISTICS:
        raise InvalidParams(f"statistic must be one of {STATISTICS}, got {statistic_name!r}")
    replicates = CONFIG.replicates if replicates is None else replicates
    seed = CONFIG.seed if seed is None else seed
    size = CONFIG.mc_sample_size if mc_sample_size is None else mc_sample_size
    threads = CONFIG.threads if threads is None else threads
    if replicates < 1 or size < 1:
        raise InvalidParams("replicates and mc_sample_size must be >= 1")
    if replicates < MIN_REPORTABLE_REPLICATES:
        log.warning("%d replicates is too few for a reportable p-value", replicates)

    limits = sample.limits
    masses = class_masses(spec, limits)
    if statistic_name == "ks":
        observed = ks_grouped(sample, spec, unit)
    else:
        observed = chi2_statistic(sample.frequencies(unit), N_EFFECTIVE * masses)

    def run(index: int) -> float:
        return _replicate(spec, limits, masses, statistic_name, size, seed, index)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        stats = np.fromiter(
            track_simple(
                executor.map(run, range(replicates)),
                msg=f"{statistic_name} replicates",
                total=replicates,
                disable=not progress,
            ),
            dtype=float,
            count=replicates,
        )

    p_value = float(np.mean(stats > observed))
    report = GofReport(
        statistic_name=statistic_name,
        observed_value=float(observed),
        p_value=p_value,
        replicates=int(replicates),
        mc_sample_size=int(size),
        seed=int(seed),
    )
    log.info("%s: %s", spec.family, report.summary())
    return report
