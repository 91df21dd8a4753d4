"""Optimal and near-optimal placement of unreliable sensors on [0, 1]."""

from .cost_exact import (
    CostReport,
    c0_circle,
    c0_line,
    expected_cost,
    expected_cost_dp,
    expected_cost_enumeration,
    expected_subgradient,
)
from .kernels import BACKEND
from .model import (
    ActiveSet,
    Cortes,
    Geometry,
    Independent,
    Placement,
    make_placement,
    probability_of_active_set,
)

__version__ = "0.1.0"

__all__ = [
    "ActiveSet",
    "BACKEND",
    "Cortes",
    "CostReport",
    "Geometry",
    "Independent",
    "Placement",
    "c0_circle",
    "c0_line",
    "expected_cost",
    "expected_cost_dp",
    "expected_cost_enumeration",
    "expected_subgradient",
    "make_placement",
    "probability_of_active_set",
]
