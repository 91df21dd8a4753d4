"""Optimal placements.

Three routes: the exact epigraph LP (n <= 12), Kelley's cutting-plane
method on the convex expected cost (n <= 20, needs exact subgradients), and
a sweep over the failure probability built on either of them.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import simplex
from .cost_exact import SUBGRADIENT_LIMIT, expected_cost, expected_subgradient
from .lp_formulation import GE, LpProblem, Row, build_lp
from .model import CoverError, FailureModel, Geometry, Independent, Placement, TooLarge, make_placement

log = logging.getLogger(__name__)

OPT_LP_LIMIT = 12
# dense tableau up to this many LP variables (n = 8 has 263), HiGHS above
DENSE_VAR_LIMIT = 300


class NoConvergence(CoverError, RuntimeError):
    """Cutting planes hit ``max_rounds``; carries the best point found."""

    def __init__(self, msg: str, placement: Placement, cost: float, gap: float):
        super().__init__(msg)
        self.placement = placement
        self.cost = cost
        self.gap = gap


def thread_count() -> int:
    raw = os.environ.get("COVERPLACE_THREADS", "")
    try:
        k = int(raw)
    except ValueError:
        k = 0
    return k if k > 0 else (os.cpu_count() or 1)


def equispaced(n: int) -> np.ndarray:
    return (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)


def canonical(x, geom: Geometry | str = Geometry.INTERVAL) -> np.ndarray:
    """Sorted positions; on the circle rotated so that x1 = 0."""
    pos = np.array(make_placement(x).positions, dtype=float)
    if Geometry.parse(geom) is Geometry.CIRCLE:
        pos = pos - pos[0]
    return pos


def solve_lp(lp: LpProblem) -> simplex.LpSolution:
    method = "auto" if lp.num_vars <= DENSE_VAR_LIMIT else "highs"
    sol = simplex.solve(lp, method=method)
    if sol.status is not simplex.Status.OPTIMAL:
        raise CoverError(f"LP solve ended with status {sol.status.value}")
    return sol


def optimize_lp(n: int, model: FailureModel, geom: Geometry | str = Geometry.INTERVAL) -> tuple[Placement, float]:
    """Exact optimum from the epigraph LP: (x*, C(x*))."""
    if n > OPT_LP_LIMIT:
        raise TooLarge(f"LP route limited to n <= {OPT_LP_LIMIT}, got {n}")
    lp = build_lp(n, model, geom)
    sol = solve_lp(lp)
    x = np.clip(sol.primal_values[:n], 0.0, 1.0)
    return make_placement(x), float(sol.objective_value + lp.objective_constant)


def _master(n: int, cuts: list[tuple[np.ndarray, float]], circle: bool) -> LpProblem:
    # variables x1..xn, t ; minimise t
    t = n
    rows = [Row(((i + 1, 1.0), (i, -1.0)), GE, 0.0) for i in range(n - 1)]
    for g, b in cuts:
        terms = [(t, 1.0)] + [(i, -float(g[i])) for i in range(n) if g[i] != 0.0]
        rows.append(Row(tuple(terms), GE, b))
    lower = np.zeros(n + 1)
    upper = np.ones(n + 1)
    upper[t] = np.inf
    if circle:
        upper[0] = 0.0  # translation invariance: pin x1
    obj = np.zeros(n + 1)
    obj[t] = 1.0
    names = tuple(f"x{i + 1}" for i in range(n)) + ("t",)
    return LpProblem(obj, tuple(rows), lower, upper, names, n)


def optimize_cutting_plane(
    n: int,
    model: FailureModel,
    geom: Geometry | str = Geometry.INTERVAL,
    gap_tol: float = 1e-6,
    max_rounds: int = 2000,
) -> tuple[Placement, float, float]:
    """Kelley's method on the convex cost, started at the equispaced point.

    Returns (best placement, its exact cost, certified gap) where the gap is
    best cost minus the master LP lower bound.
    """
    if n > SUBGRADIENT_LIMIT:
        raise TooLarge(f"cutting planes need exact subgradients, n <= {SUBGRADIENT_LIMIT}, got {n}")
    if n < 1:
        raise ValueError("n must be >= 1")
    g = Geometry.parse(geom)
    circle = g is Geometry.CIRCLE
    x = equispaced(n)
    if circle:
        x = x - x[0]
    cuts: list[tuple[np.ndarray, float]] = []
    best_x, best_c = x, np.inf
    lower = -np.inf
    for rnd in range(max_rounds):
        c = expected_cost(x, model, g)
        sg = expected_subgradient(x, model, g)
        if c < best_c:
            best_x, best_c = x, c
        cuts.append((sg, c - float(sg @ x)))
        sol = simplex.solve(_master(n, cuts, circle))
        if sol.status is not simplex.Status.OPTIMAL:
            raise CoverError(f"master LP ended with status {sol.status.value}")
        lower = max(lower, sol.objective_value)
        if best_c - lower <= gap_tol:
            log.debug("cutting planes converged in %d rounds", rnd + 1)
            return make_placement(best_x), float(best_c), float(max(best_c - lower, 0.0))
        x = np.clip(sol.primal_values[:n], 0.0, 1.0)
    gap = float(best_c - lower)
    raise NoConvergence(f"gap {gap:.3g} after {max_rounds} rounds", make_placement(best_x), float(best_c), gap)


@dataclass(frozen=True)
class SweepResult:
    p_grid: np.ndarray
    placements: np.ndarray  # grid x n, canonical form
    costs: np.ndarray  # DP cost of each reported placement
    solver_costs: np.ndarray
    segment_ids: np.ndarray
    breakpoints: tuple[tuple[float, float], ...]  # p-range of each segment

    @property
    def n_segments(self) -> int:
        return len(self.breakpoints)


def segments(placements: np.ndarray, match_tol: float) -> np.ndarray:
    """Segment id per row; a new segment starts when a placement moves by
    more than ``match_tol`` (max-norm) from its predecessor."""
    ids = np.zeros(len(placements), dtype=int)
    for i in range(1, len(placements)):
        jump = np.max(np.abs(placements[i] - placements[i - 1])) > match_tol
        ids[i] = ids[i - 1] + int(jump)
    return ids


def sweep_p(
    n: int,
    p_grid,
    geom: Geometry | str = Geometry.INTERVAL,
    match_tol: float = 1e-5,
    threads: int | None = None,
) -> SweepResult:
    grid = np.asarray(p_grid, dtype=float).reshape(-1)
    if grid.size == 0:
        raise ValueError("empty p grid")
    if np.any(grid <= 0.0) or np.any(grid >= 1.0):
        raise ValueError("grid values must lie in (0, 1)")
    if np.any(np.diff(grid) < 0.0):
        raise ValueError("grid must be sorted")
    g = Geometry.parse(geom)

    def one(p: float):
        model = Independent(float(p))
        if n <= OPT_LP_LIMIT:
            pl, cost = optimize_lp(n, model, g)
        else:
            pl, cost, _ = optimize_cutting_plane(n, model, g)
        x = canonical(pl, g)
        return x, cost, expected_cost(x, model, g)

    workers = threads or thread_count()
    if workers > 1 and grid.size > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            out = list(ex.map(one, grid.tolist()))
    else:
        out = [one(p) for p in grid.tolist()]
    X = np.array([o[0] for o in out])
    solver_costs = np.array([o[1] for o in out])
    costs = np.array([o[2] for o in out])
    ids = segments(X, match_tol)
    bps = tuple((float(grid[ids == s][0]), float(grid[ids == s][-1])) for s in range(int(ids[-1]) + 1))
    return SweepResult(grid, X, costs, solver_costs, ids, bps)
