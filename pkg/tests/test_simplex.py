import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

from coverplace.lp_formulation import EQ, GE, LE, LpProblem, Row, build_lp
from coverplace.model import Independent
from coverplace.simplex import Status, solve


def make_lp(c, rows, lo, hi):
    names = tuple(f"v{i}" for i in range(len(c)))
    return LpProblem(np.asarray(c, float), tuple(rows), np.asarray(lo, float), np.asarray(hi, float), names)


def row(coefs, rel, rhs):
    return Row(tuple((j, float(v)) for j, v in enumerate(coefs) if v != 0.0), rel, float(rhs))


def test_single_sensor_lp():
    sol = solve(build_lp(1, Independent(0.4)))
    assert sol.status is Status.OPTIMAL
    assert sol.primal_values[0] == pytest.approx(0.5)
    assert sol.objective_value == pytest.approx(0.3)


def test_trivial_bound_lp():
    sol = solve(make_lp([1.0], [row([1.0], GE, 0.25), row([1.0], LE, 1.0)], [0.0], [np.inf]))
    assert sol.status is Status.OPTIMAL and sol.objective_value == pytest.approx(0.25)


def test_infeasible_and_unbounded():
    bad = make_lp([1.0], [row([1.0], GE, 0.6), row([1.0], LE, 0.4)], [0.0], [np.inf])
    assert solve(bad).status is Status.INFEASIBLE
    unb = make_lp([-1.0, 0.0], [row([1.0, -1.0], LE, 1.0)], [0.0, 0.0], [np.inf, np.inf])
    assert solve(unb).status is Status.UNBOUNDED


def test_max_iters_guard():
    with pytest.raises(ValueError):
        solve(build_lp(2, Independent(0.5)), max_iters=0)
    assert solve(build_lp(5, Independent(0.5)), max_iters=1).status is Status.ITERATION_LIMIT


def vertex_optimum(c, A, b, rels, lo, hi):
    """Brute force over all bases: every choice of len(c) tight constraints."""
    n = len(c)
    G, h = [], []  # G y >= h
    for a, bb, r in zip(A, b, rels):
        if r in (GE, EQ):
            G.append(a), h.append(bb)
        if r in (LE, EQ):
            G.append(-a), h.append(-bb)
    for i in range(n):
        e = np.eye(n)[i]
        G.append(e), h.append(lo[i])
        if np.isfinite(hi[i]):
            G.append(-e), h.append(-hi[i])
    G, h = np.array(G), np.array(h)
    best = np.inf
    for idx in itertools.combinations(range(len(G)), n):
        M = G[list(idx)]
        if abs(np.linalg.det(M)) < 1e-10:
            continue
        y = np.linalg.solve(M, h[list(idx)])
        if np.all(G @ y >= h - 1e-9):
            best = min(best, float(c @ y))
    return best


def random_lp(rng, n, m):
    """Random bounded LP built around a known feasible point."""
    y0 = rng.uniform(0.0, 1.0, n)
    A = rng.normal(size=(m, n)).round(2)
    rels = rng.choice([LE, GE, EQ], size=m, p=[0.45, 0.45, 0.1])
    slack = rng.uniform(0.0, 0.5, m)
    b = A @ y0 + np.where(rels == LE, slack, np.where(rels == GE, -slack, 0.0))
    c = rng.normal(size=n).round(2)
    lo = np.zeros(n)
    hi = np.where(rng.random(n) < 0.5, 2.0, np.inf)
    # keep it bounded: a cap on the sum of free-above variables
    A = np.vstack([A, np.ones(n)])
    b = np.append(b, 3.0 * n)
    rels = np.append(rels, LE)
    return c, A, b, rels, lo, hi


@pytest.mark.parametrize("seed", range(100))
def test_matches_vertex_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    m = int(rng.integers(1, 6))
    c, A, b, rels, lo, hi = random_lp(rng, n, m)
    lp = make_lp(c, [row(a, r, bb) for a, r, bb in zip(A, rels, b)], lo, hi)
    sol = solve(lp)
    want = vertex_optimum(c, A, b, rels, lo, hi)
    assert sol.status is Status.OPTIMAL
    assert sol.objective_value == pytest.approx(want, abs=1e-7)
    assert lp.is_feasible(sol.primal_values, 1e-7)


@pytest.mark.parametrize("seed", range(100))
def test_matches_highs_on_larger_lps(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(2, 21))
    m = int(rng.integers(1, 40))
    c, A, b, rels, lo, hi = random_lp(rng, n, m)
    lp = make_lp(c, [row(a, r, bb) for a, r, bb in zip(A, rels, b)], lo, hi)
    sol = solve(lp)
    ub = [i for i, r in enumerate(rels) if r != EQ]
    eq = [i for i, r in enumerate(rels) if r == EQ]
    sign = np.where(rels[ub] == LE, 1.0, -1.0)
    ref = linprog(
        c,
        A_ub=A[ub] * sign[:, None],
        b_ub=b[ub] * sign,
        A_eq=A[eq] if eq else None,
        b_eq=b[eq] if eq else None,
        bounds=list(zip(lo, [None if not np.isfinite(v) else v for v in hi])),
        method="highs",
    )
    assert ref.status == 0
    assert sol.status is Status.OPTIMAL
    assert sol.objective_value == pytest.approx(ref.fun, abs=1e-7)


@pytest.mark.parametrize("method", ["primal", "dual", "highs"])
def test_routes_agree_on_coverage_lp(method):
    lp = build_lp(5, Independent(0.45))
    ref = solve(lp, method="primal")
    sol = solve(lp, method=method)
    assert sol.status is Status.OPTIMAL
    assert sol.objective_value == pytest.approx(ref.objective_value, abs=1e-9)
    assert lp.is_feasible(sol.primal_values, 1e-8)


def test_dual_route_rejects_equalities():
    lp = make_lp([1.0, 1.0], [row([1.0, 1.0], EQ, 1.0)], [0, 0], [np.inf, np.inf])
    with pytest.raises(ValueError):
        solve(lp, method="dual")
    assert solve(lp).objective_value == pytest.approx(1.0)


def test_deterministic():
    lp = build_lp(6, Independent(0.3))
    a, b = solve(lp), solve(lp)
    assert a.basis == b.basis
    assert np.array_equal(a.primal_values, b.primal_values)
    assert a.iterations == b.iterations


def test_degenerate_lp_terminates():
    # many tight rows at the optimum: the coverage LP with p near 1
    sol = solve(build_lp(6, Independent(0.99)))
    assert sol.status is Status.OPTIMAL
    assert np.allclose(sol.primal_values[:6], 0.5)
