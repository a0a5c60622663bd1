"""Agent-based consumption simulator and tail diagnostics."""

from .api import (
    FORMS,
    HILL_FRACTIONS,
    PARTITION,
    RATIO_KINDS,
    TAU_MODES,
    AgentModelConfig,
    LogNormality,
    RatioDistribution,
    hill_curve,
    log_normality,
    simulate_consumption,
    tail_exponent_hill,
    write_consumption,
)

__all__ = [
    "FORMS",
    "HILL_FRACTIONS",
    "PARTITION",
    "RATIO_KINDS",
    "TAU_MODES",
    "AgentModelConfig",
    "LogNormality",
    "RatioDistribution",
    "hill_curve",
    "log_normality",
    "simulate_consumption",
    "tail_exponent_hill",
    "write_consumption",
]
