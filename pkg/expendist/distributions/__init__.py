"""Parametric families: lognormal, Pareto, lognormal+Pareto mixture, double Pareto,
exponential, gamma and Weibull."""

from .api import (
    cdf,
    load_spec,
    make_spec,
    mean,
    pdf,
    quantile,
    sample,
    spec_from_dict,
    spec_to_dict,
)
from .families import (
    FAMILIES,
    POSITIVE,
    UNIT,
    Distribution,
    DistributionSpec,
    DoublePareto,
    Exponential,
    Gamma,
    Lognormal,
    Mixture,
    Pareto,
    SeedLike,
    Weibull,
    rng_from,
)

__all__ = [
    "FAMILIES",
    "POSITIVE",
    "UNIT",
    "Distribution",
    "DistributionSpec",
    "DoublePareto",
    "Exponential",
    "Gamma",
    "Lognormal",
    "Mixture",
    "Pareto",
    "SeedLike",
    "Weibull",
    "cdf",
    "load_spec",
    "make_spec",
    "mean",
    "pdf",
    "quantile",
    "rng_from",
    "sample",
    "spec_from_dict",
    "spec_to_dict",
]
