"""Inequality measures: Lorenz curves, Gini coefficients, top shares and simulation studies."""

from .api import (
    DEFAULT_SCENARIOS,
    METHODS,
    GiniEstimate,
    LorenzCurve,
    SimulationStudy,
    gini_from_lorenz,
    gini_pairwise,
    lorenz_from_grouped,
    lorenz_from_sample,
    simulation_gini,
    simulation_scenarios,
    simulation_study,
    top_share,
    top_share_of_sample,
    write_lorenz,
)

__all__ = [
    "DEFAULT_SCENARIOS",
    "METHODS",
    "GiniEstimate",
    "LorenzCurve",
    "SimulationStudy",
    "gini_from_lorenz",
    "gini_pairwise",
    "lorenz_from_grouped",
    "lorenz_from_sample",
    "simulation_gini",
    "simulation_scenarios",
    "simulation_study",
    "top_share",
    "top_share_of_sample",
    "write_lorenz",
]
