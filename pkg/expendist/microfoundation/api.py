"""Agent-based consumption model.

Every agent spends a necessity amount κ on the first good and, for each further good, a
random multiple of it: c = κ(1 + Σ ratios) over τ − 1 goods. Many small ratios give a
lognormal body; a geometric number of goods thickens the upper tail.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from scipy import stats

from expendist.config import CONFIG
from expendist.core import Logger, write_frame
from expendist.core.errors import InsufficientTail, InvalidConfig, InvalidParams
from expendist.timeutils import timer
from expendist.types import ArrayLike, PathLike

log = Logger("expendist.microfoundation")

RATIO_KINDS = ("uniform", "point", "exponential")
TAU_MODES = ("fixed", "geometric")
FORMS = ("additive", "exponential")
PARTITION = 10_000
MIN_TAIL = 100
HILL_FRACTIONS = (0.2, 0.1, 0.05, 0.02, 0.01)
# log-scale spread below which a sample counts as constant
LOG_SPREAD_TOL = 1e-9


@dataclass(frozen=True)
class RatioDistribution:
    """
    Law of the expenditure ratio of each extra good to the first.

    ``value`` is the upper end u of uniform(0, u), the point r of a point mass, or the mean
    of an exponential.
    """

    kind: str = "uniform"
    value: float = 0.01

    def __post_init__(self) -> None:
        if self.kind not in RATIO_KINDS:
            raise InvalidConfig(f"ratio kind must be one of {RATIO_KINDS}, got {self.kind!r}")
        if not (math.isfinite(self.value) and self.value > 0):
            raise InvalidConfig(f"ratio parameter must be finite and > 0, got {self.value}")

    @classmethod
    def parse(cls, text: str) -> RatioDistribution:
        """
        Parse ``kind:value``, e.g. ``uniform:0.01`` or ``exponential:0.05``.

        Raises:
            InvalidConfig: unknown kind or unparsable value
        """
        kind, _, raw = text.partition(":")
        try:
            return cls(kind.strip().lower(), float(raw))
        except ValueError as exc:
            raise InvalidConfig(f"cannot parse ratio distribution {text!r}") from exc

    @property
    def mean(self) -> float:
        if self.kind == "uniform":
            return self.value / 2.0
        return self.value

    @property
    def variance(self) -> float:
        if self.kind == "uniform":
            return self.value**2 / 12.0
        if self.kind == "point":
            return 0.0
        return self.value**2

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "uniform":
            return rng.uniform(0.0, self.value, size)
        if self.kind == "point":
            return np.full(size, self.value)
        return rng.exponential(self.value, size)

    def __str__(self) -> str:
        return f"{self.kind}:{self.value:g}"


@dataclass(frozen=True)
class AgentModelConfig:
    """
    Simulation settings.

    Attributes:
        n_agents: number of consumers
        kappa: necessity expenditure κ
        tau_mode: "fixed" (every agent buys ``tau`` goods) or "geometric" (mean ``tau_mean``,
            support 1, 2, ...)
        tau: goods per agent in fixed mode
        tau_mean: mean number of goods in geometric mode
        ratio: law of the ratios
        form: "additive" c = κ(1 + Σ), or "exponential" c = κ·exp(Σ)
        seed: master seed; partition j of 10,000 agents uses ``default_rng([seed, j])``
        threads: worker threads
    """

    n_agents: int = 100_000
    kappa: float = 1.0
    tau_mode: str = "fixed"
    tau: int = 400
    tau_mean: float = 10.0
    ratio: RatioDistribution = field(default_factory=RatioDistribution)
    form: str = "additive"
    seed: int = field(default_factory=lambda: CONFIG.seed)
    threads: int = 1

    def validate(self) -> None:
        """
        Raises:
            InvalidConfig: any setting out of range
        """
        if self.n_agents < 1:
            raise InvalidConfig(f"n_agents must be >= 1, got {self.n_agents}")
        if not (math.isfinite(self.kappa) and self.kappa > 0):
            raise InvalidConfig(f"kappa must be > 0, got {self.kappa}")
        if self.tau_mode not in TAU_MODES:
            raise InvalidConfig(f"tau_mode must be one of {TAU_MODES}, got {self.tau_mode!r}")
        if self.tau_mode == "fixed" and self.tau < 2:
            raise InvalidConfig(f"fixed tau must be >= 2, got {self.tau}")
        if self.tau_mode == "geometric" and not self.tau_mean > 1:
            raise InvalidConfig(f"tau_mean must be > 1, got {self.tau_mean}")
        if self.form not in FORMS:
            raise InvalidConfig(f"form must be one of {FORMS}, got {self.form!r}")
        if self.threads < 1:
            raise InvalidConfig(f"threads must be >= 1, got {self.threads}")

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "n_agents": self.n_agents,
            "kappa": self.kappa,
            "tau_mode": self.tau_mode,
            "ratio": str(self.ratio),
            "form": self.form,
            "seed": self.seed,
        }
        if self.tau_mode == "fixed":
            out["tau"] = self.tau
        else:
            out["tau_mean"] = self.tau_mean
        return out


def _partition(config: AgentModelConfig, index: int, size: int) -> np.ndarray:
    rng = np.random.default_rng([config.seed, index])
    if config.tau_mode == "fixed":
        goods = np.full(size, config.tau, dtype=np.int64)
    else:
        goods = rng.geometric(1.0 / config.tau_mean, size)
    extra = goods - 1
    draws = config.ratio.draw(rng, int(extra.sum()))
    owner = np.repeat(np.arange(size), extra)
    sums = np.bincount(owner, weights=draws, minlength=size)
    if config.form == "additive":
        return config.kappa * (1.0 + sums)
    return config.kappa * np.exp(sums)


@timer("simulate_consumption", reporter=log.info)
def simulate_consumption(config: AgentModelConfig) -> np.ndarray:
    """
    Consumption of every agent under ``config``.

    Output depends only on the config (seed included), not on ``threads``.

    Raises:
        InvalidConfig: invalid settings
    """
    config.validate()
    sizes = [
        min(PARTITION, config.n_agents - start) for start in range(0, config.n_agents, PARTITION)
    ]
    with ThreadPoolExecutor(max_workers=config.threads) as executor:
        parts = list(
            executor.map(lambda item: _partition(config, *item), enumerate(sizes))
        )
    values = np.concatenate(parts)
    log.info(
        "Simulated %d agents (%s tau, %s ratios, %s form): mean %.4g",
        config.n_agents,
        config.tau_mode,
        config.ratio,
        config.form,
        float(values.mean()),
    )
    return values


def tail_exponent_hill(values: ArrayLike, top_fraction: float = 0.05) -> float:
    """
    Hill estimate of the upper-tail exponent from the largest ⌊top_fraction · n⌋ values.

    α̂ = 1 / mean(log(x_(i) / x_(k+1))), i = 1..k, over the descending order statistics.

    Raises:
        InvalidParams: top_fraction outside (0, 1) or non-positive values
        InsufficientTail: fewer than 100 tail values
    """
    if not 0.0 < top_fraction < 1.0:
        raise InvalidParams(f"top_fraction must lie in (0, 1), got {top_fraction}")
    x = np.asarray(values, dtype=float).ravel()
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise InvalidParams("Hill estimation needs finite positive values")
    k = int(math.floor(top_fraction * len(x)))
    if k < MIN_TAIL or k >= len(x):
        raise InsufficientTail(f"{k} tail values, need at least {MIN_TAIL}")
    desc = np.sort(x)[::-1]
    logs = np.log(desc[:k] / desc[k])
    mean_log = float(logs.mean())
    if mean_log <= LOG_SPREAD_TOL:
        raise InsufficientTail("tail values are all equal to the threshold")
    return 1.0 / mean_log


def hill_curve(
    values: ArrayLike, fractions: tuple[float, ...] = HILL_FRACTIONS
) -> pd.DataFrame:
    """Hill estimates over several tail fractions; fractions with too few values are skipped."""
    rows = []
    n = np.asarray(values).size
    for fraction in fractions:
        try:
            alpha = tail_exponent_hill(values, fraction)
        except InsufficientTail:
            log.debug("Skipping top fraction %g: too few tail values", fraction)
            continue
        rows.append({"top_fraction": fraction, "k": int(fraction * n), "alpha": alpha})
    return pd.DataFrame(rows, columns=["top_fraction", "k", "alpha"])


@dataclass(frozen=True)
class LogNormality:
    """Shape of log consumption: skewness and KS distance of its standardized form to N(0, 1)."""

    skewness: float
    ks_distance: float

    def to_dict(self) -> dict[str, float]:
        return {"log_skewness": self.skewness, "log_ks_distance": self.ks_distance}


def log_normality(values: ArrayLike) -> LogNormality:
    """
    Raises:
        InvalidParams: non-positive values or a constant sample
    """
    x = np.asarray(values, dtype=float).ravel()
    if np.any(x <= 0):
        raise InvalidParams("log-normality check needs positive values")
    logs = np.log(x)
    if len(logs) < 2 or np.ptp(logs) <= LOG_SPREAD_TOL:
        raise InvalidParams("log consumption is constant")
    sd = float(logs.std(ddof=1))
    z = (logs - logs.mean()) / sd
    return LogNormality(
        skewness=float(stats.skew(logs)),
        ks_distance=float(stats.kstest(z, "norm").statistic),
    )


def write_consumption(values: ArrayLike, path: PathLike) -> Path:
    """One-column ``consumption`` CSV."""
    frame = pd.DataFrame({"consumption": np.asarray(values, dtype=float)})
    return write_frame(path, frame, float_format="%.10g")
