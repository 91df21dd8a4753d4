"""Coverage cost of a fixed placement: deterministic and expected values.

Two independent routes to the expected cost are provided: brute-force
enumeration over all 2^n active sets, and a polynomial survival-function
dynamic program. They are used to cross-check each other.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import kernels
from .model import Cortes, FailureModel, Geometry, Independent, TooLarge, make_placement

ENUM_LIMIT = 25
SUBGRADIENT_LIMIT = 20
# above this many sensors the DP drops pairs separated by runs that are
# (union-bound) too unlikely to matter; see ``_span_for``
DP_EXACT_LIMIT = 200
DEFAULT_TAIL_TOL = 1e-15


class Method(enum.Enum):
    ENUMERATION = "enumeration"
    SURVIVAL_DP = "survival_dp"


@dataclass(frozen=True)
class CostReport:
    expected_cost: float
    empty_set_mass: float
    threshold_count: int
    method: Method
    truncation_bound: float = 0.0
    thresholds: np.ndarray | None = field(default=None, repr=False, compare=False)
    cdf: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __float__(self) -> float:
        return self.expected_cost

    def as_dict(self) -> dict:
        return {
            "expected_cost": self.expected_cost,
            "empty_set_mass": self.empty_set_mass,
            "threshold_count": self.threshold_count,
            "method": self.method.value,
            "truncation_bound": self.truncation_bound,
        }


def c0_line(x_active) -> float:
    """Largest distance from a point of [0, 1] to the nearest active sensor."""
    xa = np.asarray(x_active, dtype=float)
    if xa.size == 0:
        return 1.0
    best = max(xa[0], 1.0 - xa[-1])
    if xa.size > 1:
        best = max(best, float(np.max(np.diff(xa))) / 2.0)
    return float(best)


def c0_circle(x_active) -> float:
    """Same as :func:`c0_line` on the circle of circumference 1."""
    xa = np.asarray(x_active, dtype=float)
    if xa.size == 0:
        return 1.0
    best = (1.0 - xa[-1] + xa[0]) / 2.0
    if xa.size > 1:
        best = max(best, float(np.max(np.diff(xa))) / 2.0)
    return float(best)


def c0(x_active, geom: Geometry | str = Geometry.INTERVAL) -> float:
    if Geometry.parse(geom) is Geometry.CIRCLE:
        return c0_circle(x_active)
    return c0_line(x_active)


def _weights(model: FailureModel, n: int) -> np.ndarray:
    return model.cardinality_weights(n)


def _empty_mass(model: FailureModel, n: int) -> float:
    if isinstance(model, Independent):
        return model.p**n
    return 0.0


def expected_cost_enumeration(x, model: FailureModel, geom: Geometry | str = Geometry.INTERVAL) -> CostReport:
    pl = make_placement(x)
    if pl.n > ENUM_LIMIT:
        raise TooLarge(f"enumeration needs n <= {ENUM_LIMIT}, got {pl.n}")
    circle = Geometry.parse(geom) is Geometry.CIRCLE
    value = kernels.enum_cost(pl.positions, _weights(model, pl.n), circle)
    return CostReport(float(value), _empty_mass(model, pl.n), 0, Method.ENUMERATION)


def _span_for(n: int, p: float, tail_tol: float) -> int:
    """Smallest index distance s with n * p**s <= tail_tol (-1: keep all)."""
    if p <= 0.0:
        return 1
    if p >= 1.0 or tail_tol <= 0.0:
        return -1
    s = math.ceil(math.log(tail_tol / n) / math.log(p))
    return -1 if s >= n else max(s, 1)


def candidate_thresholds(positions: np.ndarray, circle: bool, span: int = -1) -> np.ndarray:
    """Every value C0 can take on a non-empty active set, plus 1."""
    x = np.asarray(positions, dtype=float)
    n = x.shape[0]
    parts = [np.array([1.0])]
    if span < 0 or span >= n:
        i, j = np.triu_indices(n, k=1)
    else:
        i, j = _banded_pairs(n, span)
    parts.append((x[j] - x[i]) / 2.0)
    if circle:
        ii, jj = np.triu_indices(n, k=0)
        parts.append((1.0 - x[jj] + x[ii]) / 2.0)
    else:
        parts.append(x)
        parts.append(1.0 - x)
    return np.unique(np.concatenate(parts))


def _banded_pairs(n: int, span: int):
    d = np.arange(1, span + 1)
    i = np.concatenate([np.arange(n - k) for k in d])
    j = np.concatenate([np.arange(k, n) for k in d])
    return i, j


def _integrate_cdf(v: np.ndarray, F: np.ndarray) -> float:
    """Integral over [0, 1] of 1 - F, F right-continuous step on ``v``."""
    widths = np.diff(np.concatenate([[0.0], v]))
    before = np.concatenate([[0.0], F[:-1]])
    return math.fsum((widths * (1.0 - before)).tolist())


def expected_cost_dp(
    x,
    model: FailureModel,
    geom: Geometry | str = Geometry.INTERVAL,
    tail_tol: float | None = None,
) -> CostReport:
    """Exact expected cost in polynomial time.

    ``F(v) = Pr(C0 <= v)`` is evaluated at every candidate value ``v`` by a
    left-to-right recursion over the sorted sensors (probability-weighted for
    independent failures, count-augmented for the Cortes law), then
    ``E = integral of (1 - F)``.

    For n above ``DP_EXACT_LIMIT`` and independent failures, pairs of active
    sensors separated by a run of ``s`` failures with ``n * p**s <= tail_tol``
    are dropped; ``truncation_bound`` reports that bound on the error.
    """
    pl = make_placement(x)
    n = pl.n
    circle = Geometry.parse(geom) is Geometry.CIRCLE
    if isinstance(model, Independent):
        p = model.p
        if tail_tol is None:
            tail_tol = DEFAULT_TAIL_TOL if n > DP_EXACT_LIMIT else 0.0
        span = _span_for(n, p, tail_tol)
        bound = n * p**span if span > 0 else 0.0
        v = candidate_thresholds(pl.positions, circle, span)
        F = kernels.dp_cdf_indep(pl.positions, p, circle, v, span)
        empty = p**n
    elif isinstance(model, Cortes):
        model.cardinality_weights(n)  # validates n
        span, bound = -1, 0.0
        v = candidate_thresholds(pl.positions, circle)
        F = kernels.dp_count_cdf(pl.positions, model.active, circle, v) * (1.0 / comb(n, model.active))
        empty = 0.0
    else:
        raise TypeError(f"unknown failure model {model!r}")
    F = np.asarray(F, dtype=float).copy()
    F[-1] += empty  # the all-failed atom sits at v = 1
    value = _integrate_cdf(v, F)
    return CostReport(float(value), float(empty), int(v.shape[0]), Method.SURVIVAL_DP, float(bound), v, F)


def expected_cost(x, model: FailureModel, geom: Geometry | str = Geometry.INTERVAL) -> float:
    return expected_cost_dp(x, model, geom).expected_cost


def expected_subgradient(x, model: FailureModel, geom: Geometry | str = Geometry.INTERVAL) -> np.ndarray:
    """Subgradient of C at the sorted placement ``x``.

    For each active set the gradient of one maximising term is taken, ties
    resolved in the order: left border (wrap term on the circle), interior
    half-gaps left to right, right border.
    """
    pl = make_placement(x)
    if pl.n > SUBGRADIENT_LIMIT:
        raise TooLarge(f"subgradient enumeration needs n <= {SUBGRADIENT_LIMIT}, got {pl.n}")
    circle = Geometry.parse(geom) is Geometry.CIRCLE
    return np.asarray(kernels.enum_subgradient(pl.positions, _weights(model, pl.n), circle), dtype=float)
