"""Kernel density estimation from grouped tables.

Each class contributes one Gaussian kernel on the log scale, centred at the log class mean
and weighted by the class's share of the frequency column. The truncated variant confines
every kernel to its own class limits and rescales it to keep the class's share.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from scipy import integrate, special

from expendist.config import CONFIG
from expendist.core import Logger, write_frame
from expendist.core.errors import GridMismatch, InvalidBandwidth, InvalidParams, MissingClassMeans
from expendist.grouped import N_EFFECTIVE, GroupedSample
from expendist.types import ArrayLike, PathLike

log = Logger("expendist.kde")

SCALES = ("level", "log")
GRID_PAD = 3.0


@dataclass(frozen=True)
class KdeCurve:
    """
    Density evaluated on an ascending grid.

    Attributes:
        grid: evaluation points, log expenditure when ``scale == "log"``
        density: density values on ``grid``
        bandwidth: kernel bandwidth on the log scale
        scale: "log" or "level"
        label: free text, usually the survey round
    """

    grid: np.ndarray
    density: np.ndarray
    bandwidth: float
    scale: str = "log"
    label: str = ""

    def __post_init__(self) -> None:
        if self.scale not in SCALES:
            raise InvalidParams(f"scale must be one of {SCALES}, got {self.scale!r}")
        if self.grid.shape != self.density.shape:
            raise GridMismatch("grid and density lengths differ")

    def mass(self) -> float:
        """Trapezoid integral of the density over the grid."""
        return float(integrate.trapezoid(self.density, self.grid))

    def to_level(self) -> KdeCurve:
        """Change of variables f_X(x) = f_log(log x) / x."""
        if self.scale == "level":
            return self
        x = np.exp(self.grid)
        return KdeCurve(x, self.density / x, self.bandwidth, "level", self.label)

    def to_log(self) -> KdeCurve:
        if self.scale == "log":
            return self
        x = self.grid
        return KdeCurve(np.log(x), self.density * x, self.bandwidth, "log", self.label)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.grid, "density": self.density})


def silverman_bandwidth(sigma_log: float, n: int) -> float:
    """
    Gaussian rule of thumb 0.9 · σ · n^(−1/5).

    Raises:
        InvalidBandwidth: sigma_log <= 0 or n < 2
    """
    if not sigma_log > 0:
        raise InvalidBandwidth(f"sigma_log must be > 0, got {sigma_log}")
    if n < 2:
        raise InvalidBandwidth(f"n must be >= 2, got {n}")
    return 0.9 * sigma_log * n ** (-0.2)


def _log_points(
    samples: Sequence[GroupedSample], unit: str | None
) -> tuple[np.ndarray, np.ndarray]:
    logs = np.concatenate([np.log(s.class_means) for s in samples])
    weights = np.concatenate([s.proportions(unit) for s in samples])
    return logs, weights / weights.sum()


def log_sigma(sample: GroupedSample, unit: str | None = None) -> float:
    """Frequency-weighted standard deviation of log class means."""
    return pooled_log_sigma([sample], unit)


def pooled_log_sigma(samples: Sequence[GroupedSample], unit: str | None = None) -> float:
    logs, w = _log_points(samples, unit)
    centre = float(np.sum(w * logs))
    return float(np.sqrt(np.sum(w * (logs - centre) ** 2)))


def pooled_bandwidth(samples: Sequence[GroupedSample], unit: str | None = None) -> float:
    """
    Silverman bandwidth over several tables.

    σ is the weighted spread of all log class means with every table weighted equally; n
    counts each table as an effective sample of 1000.
    """
    if not samples:
        raise InvalidBandwidth("pooled_bandwidth needs at least one table")
    return silverman_bandwidth(pooled_log_sigma(samples, unit), N_EFFECTIVE * len(samples))


def default_grid(
    samples: Sequence[GroupedSample], bandwidth: float, points: int | None = None
) -> np.ndarray:
    """
    Equally spaced log grid from the lowest positive limit or mean minus 3h up to
    log(2 · largest class mean) plus 3h.
    """
    points = CONFIG.kde_grid_points if points is None else points
    lows, highs = [], []
    for s in samples:
        lims = s.limits[:-1]
        positive = lims[lims > 0]
        lowest = np.log(positive).min() if positive.size else np.inf
        lows.append(min(lowest, np.log(s.class_means).min()))
        highs.append(np.log(2.0 * s.class_means.max()))
    return np.linspace(min(lows) - GRID_PAD * bandwidth, max(highs) + GRID_PAD * bandwidth, points)


def log_density_function(
    sample: GroupedSample, unit: str | None, bandwidth: float, truncated: bool = False
) -> Callable[[np.ndarray], np.ndarray]:
    """
    The log-scale density as a vectorised callable.

    Raises:
        MissingClassMeans: the table has classes without means
        InvalidBandwidth: bandwidth <= 0
    """
    if not bandwidth > 0:
        raise InvalidBandwidth(f"bandwidth must be > 0, got {bandwidth}")
    centres = np.log(sample.class_means)
    weights = sample.proportions(unit)
    h = float(bandwidth)

    with np.errstate(divide="ignore"):
        lo = np.log(sample.limits[:-1])
    hi = np.log(sample.limits[1:])
    if truncated:
        kept = special.ndtr((hi - centres) / h) - special.ndtr((lo - centres) / h)
        scale = weights / kept
    else:
        scale = weights

    def density(g: np.ndarray) -> np.ndarray:
        g = np.atleast_1d(np.asarray(g, dtype=float))
        z = (g[:, None] - centres[None, :]) / h
        kernels = np.exp(-0.5 * z**2) / (h * np.sqrt(2.0 * np.pi))
        if truncated:
            inside = (g[:, None] >= lo[None, :]) & (g[:, None] < hi[None, :])
            kernels = np.where(inside, kernels, 0.0)
        return kernels @ scale

    return density


def grouped_kde(
    sample: GroupedSample,
    unit: str | None = None,
    bandwidth: float | None = None,
    grid: ArrayLike | None = None,
    truncated: bool = False,
    points: int | None = None,
) -> KdeCurve:
    """
    Log-scale KDE of a grouped table.

    density(g) = Σ_i w_i · φ((g − log x̄_i) / h) / h with w_i the class share of the frequency
    column. ``bandwidth`` defaults to the Silverman rule on this table; ``grid`` to
    ``default_grid``.

    Raises:
        MissingClassMeans: the table has classes without means
        InvalidBandwidth: bandwidth <= 0
    """
    if bandwidth is None:
        bandwidth = silverman_bandwidth(log_sigma(sample, unit), N_EFFECTIVE)
    h = bandwidth
    g = default_grid([sample], h, points) if grid is None else np.asarray(grid, dtype=float)
    density = log_density_function(sample, unit, h, truncated)(g)
    curve = KdeCurve(g, density, float(h), "log", sample.round_label)
    log.debug(
        "KDE %s (%s, h=%.4f, truncated=%s): mass %.4f",
        sample.round_label or "?",
        unit or sample.unit,
        h,
        truncated,
        curve.mass(),
    )
    return curve


def pool_national(rural: KdeCurve, urban: KdeCurve, rural_share: float) -> KdeCurve:
    """
    Pointwise mixture rural_share · rural + (1 − rural_share) · urban.

    Raises:
        GridMismatch: different grids or scales
        InvalidParams: rural_share outside [0, 1]
    """
    if rural.scale != urban.scale or not np.array_equal(rural.grid, urban.grid):
        raise GridMismatch("rural and urban curves must share grid and scale")
    if not 0.0 <= rural_share <= 1.0:
        raise InvalidParams(f"rural_share must lie in [0, 1], got {rural_share}")
    density = rural_share * rural.density + (1.0 - rural_share) * urban.density
    bandwidth = rural_share * rural.bandwidth + (1.0 - rural_share) * urban.bandwidth
    return KdeCurve(rural.grid, density, bandwidth, rural.scale, "national")


def kde_series(
    samples: Sequence[GroupedSample],
    unit: str | None = None,
    bandwidth: float | None = None,
    truncated: bool = False,
    points: int | None = None,
) -> dict[str, KdeCurve]:
    """
    Curves for several rounds on one shared grid and bandwidth.

    Rounds without class means are skipped with a warning. The bandwidth defaults to
    ``pooled_bandwidth`` over the kept rounds.
    """
    kept = []
    for s in samples:
        if s.has_means:
            kept.append(s)
        else:
            log.warning("Skipping round %s: no class means", s.round_label or "?")
    if not kept:
        raise MissingClassMeans("no table in the series has class means")

    h = pooled_bandwidth(kept, unit) if bandwidth is None else bandwidth
    grid = default_grid(kept, h, points)
    return {
        s.round_label or str(i): grouped_kde(s, unit, h, grid, truncated)
        for i, s in enumerate(kept)
    }


def write_curve(curve: KdeCurve, path: PathLike, scale: str = "level") -> Path:
    """Two-column ``x,density`` CSV in the requested scale."""
    if scale not in SCALES:
        raise InvalidParams(f"scale must be one of {SCALES}, got {scale!r}")
    out = curve.to_level() if scale == "level" else curve.to_log()
    return write_frame(path, out.to_frame())
