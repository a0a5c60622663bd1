"""Functional front end over the distribution families and their JSON form."""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from expendist.core import read_file
from expendist.core.errors import InvalidParams
from expendist.types import ArrayLike, PathLike

from .families import FAMILIES, Distribution, SeedLike


def make_spec(family: str, **params: float) -> Distribution:
    """
    Build a family from keyword parameters (JSON names accepted, e.g. ``lambda``).

    Raises:
        InvalidParams: unknown family, missing or unexpected parameters, invalid values
    """
    if family not in FAMILIES:
        raise InvalidParams(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    cls = FAMILIES[family]
    renamed = {v: k for k, v in cls.json_names.items()}
    kwargs = {renamed.get(k, k): v for k, v in params.items()}
    try:
        return cls(**{k: float(v) for k, v in kwargs.items()})
    except TypeError as exc:
        raise InvalidParams(f"{family}: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, InvalidParams):
            raise
        raise InvalidParams(f"{family}: non-numeric parameter ({exc})") from exc


def spec_from_dict(data: dict[str, Any]) -> Distribution:
    """Inverse of ``spec_to_dict``: ``{"family": ..., "params": {...}}``."""
    if not isinstance(data, dict) or "family" not in data or "params" not in data:
        raise InvalidParams('distribution JSON needs "family" and "params"')
    return make_spec(str(data["family"]), **dict(data["params"]))


def spec_to_dict(spec: Distribution) -> dict[str, Any]:
    return spec.to_dict()


def load_spec(source: PathLike | str) -> Distribution:
    """Parse a distribution from inline JSON text or a ``.json`` file."""
    text = str(source).strip()
    if not text.startswith("{"):
        text = str(read_file(source, engine="base"))
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidParams(f"invalid distribution JSON: {exc}") from exc
    return spec_from_dict(data)


def pdf(spec: Distribution, x: float | ArrayLike) -> Any:
    return spec.pdf(x)


def cdf(spec: Distribution, x: float | ArrayLike) -> Any:
    return spec.cdf(x)


def quantile(spec: Distribution, p: float | ArrayLike) -> Any:
    return spec.quantile(p)


def sample(spec: Distribution, n: int, seed: SeedLike = None) -> np.ndarray:
    return spec.sample(n, seed)


def mean(spec: Distribution) -> float | None:
    return spec.mean()
