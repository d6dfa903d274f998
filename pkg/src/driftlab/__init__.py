"""Drift-analysis workbench.

Catalog of stochastic processes, potential-function transforms,
drift-theorem bound calculators, exact hitting-time oracles and a
seeded Monte Carlo engine for cross-validating them against each
other.
"""

from . import acceptance, bounds, montecarlo, oracle, potentials, processes, report
from .bounds import BoundReport, DriftFunction, LevelProfile
from .montecarlo import ConditionReport, RunStats, simulate_hitting, simulate_trajectory
from .oracle import HittingTimeSolution, hitting_time_exact
from .potentials import Potential, lift
from .processes import (
    CnfInstance,
    FiniteChain,
    GraphInstance,
    Process,
    make_ea_process,
    make_graph_process,
    make_simple_chain,
    make_sorting_process,
    make_two_sat_process,
    to_finite_chain,
)

from .report import ComparisonRow

__all__ = [
    "BoundReport",
    "ComparisonRow",
    "acceptance",
    "report",
    "CnfInstance",
    "ConditionReport",
    "DriftFunction",
    "FiniteChain",
    "GraphInstance",
    "HittingTimeSolution",
    "LevelProfile",
    "Potential",
    "Process",
    "RunStats",
    "bounds",
    "hitting_time_exact",
    "lift",
    "make_ea_process",
    "make_graph_process",
    "make_simple_chain",
    "make_sorting_process",
    "make_two_sat_process",
    "montecarlo",
    "oracle",
    "potentials",
    "processes",
    "simulate_hitting",
    "simulate_trajectory",
    "to_finite_chain",
]
