"""Parametric expenditure distributions.

Every family is a frozen dataclass whose fields are its parameters. Subclasses provide the
vectorised ``_pdf``, ``_cdf``, ``_sf`` and ``_ppf`` on arrays; the public methods take
scalars or arrays, validate inputs and return the same shape they were given.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, fields
import math
from typing import Any, ClassVar

import numpy as np
from scipy import optimize, special

from expendist.core.errors import InvalidParams
from expendist.types import ArrayLike

SeedLike = int | np.random.Generator | np.random.SeedSequence | list[int] | tuple[int, ...] | None

# parameter kinds drive the unconstrained transforms used when fitting
POSITIVE = "positive"
UNIT = "unit"


def _as_array(x: float | ArrayLike) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def _shape(values: np.ndarray, scalar: bool) -> Any:
    return float(values[0]) if scalar else values


def rng_from(seed: SeedLike) -> np.random.Generator:
    """``np.random.default_rng`` that passes existing generators through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class Distribution(ABC):
    """
    Base class of the expenditure families.

    Class attributes:
        family: tag used in JSON and on the command line
        param_kinds: free parameters in fitting order mapped to "positive" or "unit"
        json_names: field name -> JSON key where they differ
    """

    family: ClassVar[str] = ""
    param_kinds: ClassVar[dict[str, str]] = {}
    json_names: ClassVar[dict[str, str]] = {}

    def __post_init__(self) -> None:
        for name, kind in self.param_kinds.items():
            value = getattr(self, name)
            if not isinstance(value, int | float) or not math.isfinite(value):
                raise InvalidParams(f"{self.family}: {name} must be a finite number, got {value!r}")
            if kind == POSITIVE and not value > 0:
                raise InvalidParams(f"{self.family}: {name} must be > 0, got {value}")
            if kind == UNIT and not 0.0 <= value <= 1.0:
                raise InvalidParams(f"{self.family}: {name} must lie in [0, 1], got {value}")

    # --- parameter plumbing -------------------------------------------------------------

    @property
    def free_params(self) -> tuple[str, ...]:
        return tuple(self.param_kinds)

    @property
    def n_params(self) -> int:
        return len(self.param_kinds)

    def params(self) -> dict[str, float]:
        """Parameters keyed by their JSON names."""
        return {
            self.json_names.get(f.name, f.name): float(getattr(self, f.name)) for f in fields(self)
        }

    def to_vector(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in self.param_kinds], dtype=float)

    @classmethod
    def from_vector(cls, values: ArrayLike) -> Distribution:
        return cls(**{name: float(v) for name, v in zip(cls.param_kinds, values, strict=True)})

    def to_dict(self) -> dict[str, Any]:
        return {"family": self.family, "params": self.params()}

    # --- family-specific pieces ---------------------------------------------------------

    @abstractmethod
    def _pdf(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _cdf(self, x: np.ndarray) -> np.ndarray: ...

    def _sf(self, x: np.ndarray) -> np.ndarray:
        return 1.0 - self._cdf(x)

    @abstractmethod
    def _ppf(self, p: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def mean(self) -> float | None:
        """Expected value, None when it does not exist."""

    def _generate_random(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self._ppf(rng.random(n))

    # --- public API ---------------------------------------------------------------------

    def pdf(self, x: float | ArrayLike) -> Any:
        arr, scalar = _as_array(x)
        out = np.zeros_like(arr)
        pos = arr > 0
        out[pos] = self._pdf(arr[pos])
        return _shape(out, scalar)

    def cdf(self, x: float | ArrayLike) -> Any:
        arr, scalar = _as_array(x)
        out = np.zeros_like(arr)
        pos = arr > 0
        out[pos] = np.clip(self._cdf(arr[pos]), 0.0, 1.0)
        return _shape(out, scalar)

    def sf(self, x: float | ArrayLike) -> Any:
        """Survival function 1 − cdf, computed without cancellation in the upper tail."""
        arr, scalar = _as_array(x)
        out = np.ones_like(arr)
        pos = arr > 0
        out[pos] = np.clip(self._sf(arr[pos]), 0.0, 1.0)
        return _shape(out, scalar)

    def quantile(self, p: float | ArrayLike) -> Any:
        """
        Raises:
            InvalidParams: some p outside (0, 1)
        """
        arr, scalar = _as_array(p)
        if np.any((arr <= 0) | (arr >= 1)) or np.any(np.isnan(arr)):
            raise InvalidParams("quantile needs 0 < p < 1")
        return _shape(self._ppf(arr), scalar)

    def sample(self, n: int, seed: SeedLike = None) -> np.ndarray:
        """
        Draw ``n`` values by inverse-CDF sampling; equal seeds give equal draws.

        Raises:
            InvalidParams: n < 1
        """
        if n < 1:
            raise InvalidParams(f"sample size must be >= 1, got {n}")
        return self._generate_random(rng_from(seed), int(n))

    def __str__(self) -> str:
        inner = ", ".join(f"{k}={v:.6g}" for k, v in self.params().items())
        return f"{self.family}({inner})"


@dataclass(frozen=True)
class Lognormal(Distribution):
    """Lognormal with median ``x_M`` (= e^μ) and log-variance ``sigma2``."""

    x_M: float
    sigma2: float

    family: ClassVar[str] = "lognormal"
    param_kinds: ClassVar[dict[str, str]] = {"x_M": POSITIVE, "sigma2": POSITIVE}

    @property
    def mu(self) -> float:
        return math.log(self.x_M)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    def _z(self, x: np.ndarray) -> np.ndarray:
        return (np.log(x) - self.mu) / (self.sigma * math.sqrt(2.0))

    def _pdf(self, x: np.ndarray) -> np.ndarray:
        return np.exp(-self._z(x) ** 2) / (x * self.sigma * math.sqrt(2.0 * math.pi))

    def _cdf(self, x: np.ndarray) -> np.ndarray:
        return 0.5 * special.erfc(-self._z(x))

    def _sf(self, x: np.ndarray) -> np.ndarray:
        return 0.5 * special.erfc(self._z(x))

    def _ppf(self, p: np.ndarray) -> np.ndarray:
        return np.exp(self.mu + self.sigma * special.ndtri(p))

    def mean(self) -> float:
        return self.x_M * math.exp(self.sigma2 / 2.0)


@dataclass(frozen=True)
class Pareto(Distribution):
    """Pareto tail with exponent ``nu`` above the cutoff ``x0``."""

    nu: float
    x0: float

    family: ClassVar[str] = "pareto"
    param_kinds: ClassVar[dict[str, str]] = {"nu": POSITIVE, "x0": POSITIVE}

    def _pdf(self, x: np.ndarray) -> np.ndarray:
        above = x >= self.x0
        out = np.zeros_like(x)
        out[above] = self.nu / self.x0 * (x[above] / self.x0) ** (-self.nu - 1.0)
        return out

    def _cdf(self, x: np.ndarray) -> np.ndarray:
        return 1.0 - self._sf(x)

    def _sf(self, x: np.ndarray) -> np.ndarray:
        return np.where(x <= self.x0, 1.0, (self.x0 / np.maximum(x, self.x0)) ** self.nu)

    def _ppf(self, p: np.ndarray) -> np.ndarray:
        return self.x0 * (1.0 - p) ** (-1.0 / self.nu)

    def mean(self) -> float | None:
        if self.nu <= 1:
            return None
        return self.nu * self.x0 / (self.nu - 1.0)


@dataclass(frozen=True)
class Mixture(Distribution):
    """
    Lognormal body plus Pareto tail: f = π·f_pareto + (1 − π)·f_lognormal.

    No continuity is imposed at ``x0``; the density may jump there.
    """

    x_M: float
    sigma2: float
    nu: float
    x0: float
    pi: float

    family: ClassVar[str] = "mixture"
    param_kinds: ClassVar[dict[str, str]] = {
        "x_M": POSITIVE,
        "sigma2": POSITIVE,
        "nu": POSITIVE,
        "x0": POSITIVE,
        "pi": UNIT,
    }

    @property
    def body(self) -> Lognormal:
        return Lognormal(self.x_M, self.sigma2)

    @property
    def tail(self) -> Pareto:
        return Pareto(self.nu, self.x0)

    def _pdf(self, x: np.ndarray) -> np.ndarray:
        return self.pi * self.tail._pdf(x) + (1.0 - self.pi) * self.body._pdf(x)

    def _cdf(self, x: np.ndarray) -> np.ndarray:
        return self.pi * self.tail._cdf(x) + (1.0 - self.pi) * self.body._cdf(x)

    def _sf(self, x: np.ndarray) -> np.ndarray:
        return self.pi * self.tail._sf(x) + (1.0 - self.pi) * self.body._sf(x)

    def _ppf(self, p: np.ndarray) -> np.ndarray:
        if self.pi == 0.0:
            return self.body._ppf(p)
        if self.pi == 1.0:
            return self.tail._ppf(p)
        body_q = self.body._ppf(p)
        tail_q = self.tail._ppf(p)
        out = np.empty_like(p)
        for i, (target, a, b) in enumerate(zip(p, body_q, tail_q, strict=True)):
            lo, hi = min(a, b), max(a, b)
            if target <= 0.0:
                out[i] = 0.0
            elif lo == hi:
                out[i] = lo
            else:
                # the cdf is a convex combination, so it crosses p between the component quantiles
                out[i] = optimize.brentq(
                    lambda x, t=target: float(self._cdf(np.array([x]))[0]) - t,
                    lo,
                    hi,
                    xtol=1e-300,
                    rtol=4 * np.finfo(float).eps,
                    maxiter=500,
                )
        return out

    def _generate_random(self, rng: np.random.Generator, n: int) -> np.ndarray:
        in_tail = rng.random(n) < self.pi
        u = rng.random(n)
        return np.where(in_tail, self.tail._ppf(u), self.body._ppf(u))

    def mean(self) -> float | None:
        if self.pi == 0.0:
            return self.body.mean()
        tail_mean = self.tail.mean()
        if tail_mean is None:
            return None
        return self.pi * tail_mean + (1.0 - self.pi) * self.body.mean()


@dataclass(frozen=True)
class DoublePareto(Distribution):
    """
    Double Pareto kinked at ``scale``: density ∝ (x/s)^(β−1) below and (x/s)^(−α−1) above.

    The normalising constant is αβ/(α+β) and the CDF at the kink is α/(α+β).
    """

    alpha: float
    beta: float
    scale: float = 1.0

    family: ClassVar[str] = "double_pareto"
    param_kinds: ClassVar[dict[str, str]] = {
        "alpha": POSITIVE,
        "beta": POSITIVE,
        "scale": POSITIVE,
    }

    @property
    def kink_mass(self) -> float:
        return self.alpha / (self.alpha + self.beta)

    def _pdf(self, x: np.ndarray) -> np.ndarray:
        c = self.alpha * self.beta / (self.alpha + self.beta)
        r = x / self.scale
        return np.where(r <= 1.0, r ** (self.beta - 1.0), r ** (-self.alpha - 1.0)) * c / self.scale

    def _cdf(self, x: np.ndarray) -> np.ndarray:
        r = x / self.scale
        lower = self.kink_mass * np.minimum(r, 1.0) ** self.beta
        return np.where(r <= 1.0, lower, 1.0 - self._sf(x))

    def _sf(self, x: np.ndarray) -> np.ndarray:
        r = x / self.scale
        upper = (1.0 - self.kink_mass) * np.maximum(r, 1.0) ** (-self.alpha)
        return np.where(r <= 1.0, 1.0 - self.kink_mass * np.minimum(r, 1.0) ** self.beta, upper)

    def _ppf(self, p: np.ndarray) -> np.ndarray:
        k = self.kink_mass
        low = self.scale * (np.minimum(p, k) / k) ** (1.0 / self.beta)
        high = self.scale * (np.maximum(1.0 - p, 1e-300) / (1.0 - k)) ** (-1.0 / self.alpha)
        return np.where(p <= k, low, high)

    def mean(self) -> float | None:
        if self.alpha <= 1:
            return None
        c = self.alpha * self.beta / (self.alpha + self.beta)
        return self.scale * c * (1.0 / (self.beta + 1.0) + 1.0 / (self.alpha - 1.0))


@dataclass(frozen=True)
class Exponential(Distribution):
    rate: float

    family: ClassVar[str] = "exponential"
    param_kinds: ClassVar[dict[str, str]] = {"rate": POSITIVE}

    def _pdf(self, x: np.ndarray) -> np.ndarray:
        return self.rate * np.exp(-self.rate * x)

    def _cdf(self, x: np.ndarray) -> np.ndarray:
        return -np.expm1(-self.rate * x)

    def _sf(self, x: np.ndarray) -> np.ndarray:
        return np.exp(-self.rate * x)

    def _ppf(self, p: np.ndarray) -> np.ndarray:
        return -np.log1p(-p) / self.rate

    def mean(self) -> float:
        return 1.0 / self.rate


@dataclass(frozen=True)
class Gamma(Distribution):
    """Gamma with ``shape`` and ``scale``; CDF from the regularised incomplete gamma function."""

    shape: float
    scale: float

    family: ClassVar[str] = "gamma"
    param_kinds: ClassVar[dict[str, str]] = {"shape": POSITIVE, "scale": POSITIVE}

    def _pdf(self, x: np.ndarray) -> np.ndarray:
        z = x / self.scale
        return np.exp((self.shape - 1.0) * np.log(z) - z - special.gammaln(self.shape)) / self.scale

    def _cdf(self, x: np.ndarray) -> np.ndarray:
        return special.gammainc(self.shape, x / self.scale)

    def _sf(self, x: np.ndarray) -> np.ndarray:
        return special.gammaincc(self.shape, x / self.scale)

    def _ppf(self, p: np.ndarray) -> np.ndarray:
        return self.scale * special.gammaincinv(self.shape, p)

    def mean(self) -> float:
        return self.shape * self.scale


@dataclass(frozen=True)
class Weibull(Distribution):
    """Weibull with shape ``k`` and scale ``lam`` (JSON key ``lambda``)."""

    k: float
    lam: float

    family: ClassVar[str] = "weibull"
    param_kinds: ClassVar[dict[str, str]] = {"k": POSITIVE, "lam": POSITIVE}
    json_names: ClassVar[dict[str, str]] = {"lam": "lambda"}

    def _pdf(self, x: np.ndarray) -> np.ndarray:
        z = x / self.lam
        return (self.k / self.lam) * z ** (self.k - 1.0) * np.exp(-(z**self.k))

    def _cdf(self, x: np.ndarray) -> np.ndarray:
        return -np.expm1(-((x / self.lam) ** self.k))

    def _sf(self, x: np.ndarray) -> np.ndarray:
        return np.exp(-((x / self.lam) ** self.k))

    def _ppf(self, p: np.ndarray) -> np.ndarray:
        return self.lam * (-np.log1p(-p)) ** (1.0 / self.k)

    def mean(self) -> float:
        return self.lam * math.gamma(1.0 + 1.0 / self.k)


FAMILIES: dict[str, type[Distribution]] = {
    cls.family: cls
    for cls in (Lognormal, Pareto, Mixture, DoublePareto, Exponential, Gamma, Weibull)
}

DistributionSpec = Distribution
