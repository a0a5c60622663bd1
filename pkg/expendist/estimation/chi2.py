"""Expected class counts and the grouped χ² statistic."""

from __future__ import annotations

import numpy as np

from expendist.core.errors import DegeneratePrediction, LengthMismatch
from expendist.distributions import Distribution
from expendist.grouped import N_EFFECTIVE, GroupedSample
from expendist.types import ArrayLike

SPARSE_THRESHOLD = 1e-6


def class_masses(spec: Distribution, limits: ArrayLike) -> np.ndarray:
    """
    Probability mass of each class for boundaries z_0 < ... < z_k.

    The first class collects all mass below z_1 and the last class the whole tail above
    z_{k-1}, whatever z_0 and z_k are, so the masses always sum to one. Differences of the
    survival function keep small upper-tail masses accurate.
    """
    z = np.asarray(limits, dtype=float)
    if z.ndim != 1 or len(z) < 2:
        raise LengthMismatch("need at least two class limits")
    survival = np.concatenate(([1.0], np.atleast_1d(spec.sf(z[1:-1])), [0.0]))
    return np.clip(-np.diff(survival), 0.0, None)


def expected_class_counts(
    spec: Distribution, sample: GroupedSample, unit: str | None = None
) -> np.ndarray:
    """
    Counts per class predicted by ``spec`` for an effective sample of 1000.

    The prediction depends only on the class limits, so ``unit`` does not change it.
    """
    return N_EFFECTIVE * class_masses(spec, sample.limits)


def merge_sparse(
    observed: ArrayLike,
    predicted: ArrayLike,
    threshold: float = SPARSE_THRESHOLD,
    min_classes: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Fold classes whose predicted count is below ``threshold`` into a neighbour.

    The sparsest class goes first; the first class merges into the next one, the last into
    the previous one and any other class into whichever neighbour predicts more.

    Raises:
        DegeneratePrediction: fewer than ``min_classes`` classes remain, or nothing is predicted
    """
    obs = list(np.asarray(observed, dtype=float))
    pred = list(np.asarray(predicted, dtype=float))

    while len(pred) > 1 and min(pred) < threshold:
        i = int(np.argmin(pred))
        if i == 0:
            j = 1
        elif i == len(pred) - 1:
            j = i - 1
        else:
            j = i - 1 if pred[i - 1] >= pred[i + 1] else i + 1
        obs[j] += obs[i]
        pred[j] += pred[i]
        del obs[i], pred[i]

    if len(pred) < min_classes:
        raise DegeneratePrediction(
            f"only {len(pred)} classes keep a predicted count >= {threshold:g}, need {min_classes}"
        )
    if pred[0] <= 0:
        raise DegeneratePrediction("model predicts no mass in any class")
    return np.array(obs), np.array(pred)


def chi2_statistic(observed: ArrayLike, predicted: ArrayLike, min_classes: int = 1) -> float:
    """
    Σ (observed − predicted)² / predicted after merging sparse classes.

    Examples:
        >>> chi2_statistic([12, 8], [10, 10])
        0.8

    Raises:
        LengthMismatch: inputs of different length
        DegeneratePrediction: see ``merge_sparse``
    """
    obs = np.asarray(observed, dtype=float)
    pred = np.asarray(predicted, dtype=float)
    if obs.shape != pred.shape or obs.ndim != 1:
        raise LengthMismatch(f"observed has {obs.size} classes, predicted {pred.size}")
    obs, pred = merge_sparse(obs, pred, min_classes=min_classes)
    return float(np.sum((obs - pred) ** 2 / pred))


def chi2_at(spec: Distribution, sample: GroupedSample, unit: str | None = None) -> float:
    """χ² of ``sample``'s frequencies against ``spec``'s expected counts."""
    return chi2_statistic(sample.frequencies(unit), expected_class_counts(spec, sample))
