"""Dense two-phase primal simplex.

Tableau method with Dantzig pricing, switching to Bland's rule (smallest
index entering and leaving) after a run of degenerate pivots so that the
method cannot cycle. Deterministic for identical input.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np

from .lp_formulation import EQ, GE, LE, LpProblem

log = logging.getLogger(__name__)

DEGENERATE_RUN = 25


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


@dataclass
class LpSolution:
    status: Status
    primal_values: np.ndarray
    objective_value: float
    iterations: int
    basis: tuple[int, ...] = ()

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class _Tableau:
    def __init__(self, A: np.ndarray, b: np.ndarray, basis: list[int], feas_tol: float, opt_tol: float):
        m, N = A.shape
        self.T = np.zeros((m + 1, N + 1))
        self.T[:m, :N] = A
        self.T[:m, N] = b
        self.basis = basis
        self.m, self.N = m, N
        self.feas_tol, self.opt_tol = feas_tol, opt_tol
        self.iterations = 0

    def set_costs(self, c: np.ndarray) -> None:
        # reduced costs row: c - c_B B^-1 A, stored as last row
        self.T[-1, : self.N] = c
        self.T[-1, self.N] = 0.0
        for r, j in enumerate(self.basis):
            if self.T[-1, j] != 0.0:
                self.T[-1] -= self.T[-1, j] * self.T[r]

    def pivot(self, r: int, e: int) -> None:
        T = self.T
        T[r] /= T[r, e]
        col = T[:, e].copy()
        col[r] = 0.0
        nz = np.nonzero(col)[0]
        if nz.size:
            prow = T[r]
            live = np.nonzero(prow)[0]
            T[np.ix_(nz, live)] -= np.outer(col[nz], prow[live])
        T[nz, e] = 0.0
        self.basis[r] = e
        self.iterations += 1

    def run(self, allowed: np.ndarray, max_iters: int) -> Status:
        T = self.T
        degenerate = 0
        while True:
            if self.iterations >= max_iters:
                return Status.ITERATION_LIMIT
            d = T[-1, : self.N]
            cand = np.nonzero(allowed & (d < -self.opt_tol))[0]
            if cand.size == 0:
                return Status.OPTIMAL
            bland = degenerate >= DEGENERATE_RUN
            e = int(cand[0]) if bland else int(cand[np.argmin(d[cand])])
            col = T[: self.m, e]
            pos = np.nonzero(col > self.feas_tol)[0]
            if pos.size == 0:
                return Status.UNBOUNDED
            ratios = T[pos, self.N] / col[pos]
            best = ratios.min()
            ties = pos[ratios <= best + 1e-12 * max(1.0, abs(best))]
            if ties.size > 1:
                # smallest basic variable index; ties broken by row otherwise
                bvars = np.array([self.basis[r] for r in ties])
                r = int(ties[np.argmin(bvars)])
            else:
                r = int(ties[0])
            degenerate = degenerate + 1 if best <= self.feas_tol else 0
            self.pivot(r, e)


def _standard_form(lp: LpProblem):
    """Map lp to  min c.z  s.t.  A z (rel) b,  z >= 0.

    Returns (A, rels, b, c, c0, recover) where ``recover(z)`` gives y.
    """
    Ad, rels, b = lp.dense()
    lo, hi = lp.lower, lp.upper
    nv = lp.num_vars
    cols = []  # per original variable: list of (z column, sign); y = offset + sum sign*z
    offset = np.zeros(nv)
    ncols = 0
    extra_rows = []
    for j in range(nv):
        if np.isfinite(lo[j]):
            offset[j] = lo[j]
            cols.append([(ncols, 1.0)])
            ncols += 1
            if np.isfinite(hi[j]):
                extra_rows.append((ncols - 1, hi[j] - lo[j]))
        elif np.isfinite(hi[j]):
            offset[j] = hi[j]
            cols.append([(ncols, -1.0)])
            ncols += 1
        else:
            cols.append([(ncols, 1.0), (ncols + 1, -1.0)])
            ncols += 2
    M = np.zeros((Ad.shape[0] + len(extra_rows), ncols))
    c = np.zeros(ncols)
    for j, parts in enumerate(cols):
        for k, s in parts:
            M[: Ad.shape[0], k] = s * Ad[:, j]
            c[k] = s * lp.objective[j]
    rhs = np.concatenate([b - Ad @ offset, [u for _, u in extra_rows]])
    for i, (k, _) in enumerate(extra_rows):
        M[Ad.shape[0] + i, k] = 1.0
    all_rels = list(rels) + [LE] * len(extra_rows)
    c0 = float(lp.objective @ offset)

    def recover(z):
        y = offset.copy()
        for j, parts in enumerate(cols):
            for k, s in parts:
                y[j] += s * z[k]
        return y

    return M, all_rels, rhs, c, c0, recover


def _solve_dual(M, rels, rhs, c, recover, lp, feas_tol, opt_tol, max_iters):
    """min c.z, G z >= h, z >= 0 with c >= 0, through its dual.

    The dual  max h.u, G^T u <= c, u >= 0  starts feasible at u = 0, so no
    phase 1 is needed; the primal vertex is read off the reduced costs of
    the dual slack columns.
    """
    sign = np.array([1.0 if r == GE else -1.0 for r in rels])
    G = M * sign[:, None]
    h = rhs * sign
    m, nz = G.shape
    A = np.zeros((nz, m + nz))
    A[:, :m] = G.T
    A[:, m:] = np.eye(nz)
    tab = _Tableau(A, c.astype(float).copy(), list(range(m, m + nz)), feas_tol, opt_tol)
    cost = np.zeros(m + nz)
    cost[:m] = -h
    tab.set_costs(cost)
    status = tab.run(np.ones(m + nz, dtype=bool), max_iters)
    if status is Status.UNBOUNDED:
        return LpSolution(Status.INFEASIBLE, np.full(lp.num_vars, np.nan), np.nan, tab.iterations)
    z = np.maximum(tab.T[-1, m : m + nz], 0.0)
    y = recover(z)
    obj = float(lp.objective @ y)
    return LpSolution(status, y, obj, tab.iterations, tuple(tab.basis))


def _solve_highs(lp: LpProblem, max_iters: int) -> LpSolution:
    """Sparse route through scipy's HiGHS (interior point plus crossover,
    so the returned point is still a vertex)."""
    from scipy.optimize import linprog
    from scipy.sparse import csr_matrix

    ub_r, ub_c, ub_v, ub_b = [], [], [], []
    eq_r, eq_c, eq_v, eq_b = [], [], [], []
    for row in lp.rows:
        if row.rel == EQ:
            k = len(eq_b)
            for j, c in row.terms:
                eq_r.append(k); eq_c.append(j); eq_v.append(c)
            eq_b.append(row.rhs)
        else:
            s = 1.0 if row.rel == LE else -1.0
            k = len(ub_b)
            for j, c in row.terms:
                ub_r.append(k); ub_c.append(j); ub_v.append(s * c)
            ub_b.append(s * row.rhs)
    nv = lp.num_vars
    A_ub = csr_matrix((ub_v, (ub_r, ub_c)), shape=(len(ub_b), nv)) if ub_b else None
    A_eq = csr_matrix((eq_v, (eq_r, eq_c)), shape=(len(eq_b), nv)) if eq_b else None
    bounds = [(None if np.isinf(lo) else lo, None if np.isinf(hi) else hi) for lo, hi in zip(lp.lower, lp.upper)]
    res = linprog(
        lp.objective,
        A_ub=A_ub,
        b_ub=np.array(ub_b) if ub_b else None,
        A_eq=A_eq,
        b_eq=np.array(eq_b) if eq_b else None,
        bounds=bounds,
        method="highs-ipm",
        options={"maxiter": max_iters},
    )
    status = {0: Status.OPTIMAL, 1: Status.ITERATION_LIMIT, 2: Status.INFEASIBLE, 3: Status.UNBOUNDED}.get(
        res.status, Status.ITERATION_LIMIT
    )
    if res.x is None:
        return LpSolution(status, np.full(nv, np.nan), np.nan, int(res.nit or 0))
    y = np.asarray(res.x, dtype=float)
    return LpSolution(status, y, float(lp.objective @ y), int(res.nit or 0))


def solve(
    lp: LpProblem,
    feas_tol: float = 1e-9,
    opt_tol: float = 1e-9,
    max_iters: int = 200_000,
    method: str = "auto",
) -> LpSolution:
    """Solve ``lp``.

    ``method`` is ``"primal"`` (two-phase on the LP itself), ``"dual"`` (on
    its dual; needs only inequality rows and non-negative standard-form
    costs), ``"auto"`` (dual when applicable) or ``"highs"`` (scipy's sparse
    HiGHS backend, for LPs too large for a dense tableau).
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    if method == "highs":
        return _solve_highs(lp, max_iters)
    M, rels, rhs, c, c0, recover = _standard_form(lp)
    dual_ok = EQ not in rels and bool(np.all(c >= 0.0))
    if method == "dual" and not dual_ok:
        raise ValueError("dual route needs inequality rows and non-negative costs")
    if method == "dual" or (method == "auto" and dual_ok):
        return _solve_dual(M, rels, rhs, c, recover, lp, feas_tol, opt_tol, max_iters)
    keep = np.any(M != 0.0, axis=1)
    for i in np.nonzero(~keep)[0]:
        # empty row: 0 (rel) rhs must hold on its own
        ok = {LE: 0.0 <= rhs[i] + feas_tol, GE: 0.0 >= rhs[i] - feas_tol, EQ: abs(rhs[i]) <= feas_tol}[rels[i]]
        if not ok:
            return LpSolution(Status.INFEASIBLE, np.full(lp.num_vars, np.nan), np.nan, 0)
    M, rhs = M[keep], rhs[keep]
    rels = [r for r, k in zip(rels, keep) if k]
    m, nz = M.shape

    # slacks: +s for <=, -s for >=; then flip rows with negative rhs
    n_slack = sum(1 for r in rels if r != EQ)
    A = np.zeros((m, nz + n_slack))
    A[:, :nz] = M
    slack_of = {}
    k = nz
    for i, r in enumerate(rels):
        if r == LE:
            A[i, k] = 1.0
        elif r == GE:
            A[i, k] = -1.0
        if r != EQ:
            slack_of[i] = k
            k += 1
    b = rhs.copy()
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    basis = []
    art_rows = []
    for i in range(m):
        s = slack_of.get(i)
        if s is not None and A[i, s] == 1.0:
            basis.append(s)
        else:
            basis.append(-1)
            art_rows.append(i)
    n_art = len(art_rows)
    total = nz + n_slack + n_art
    A_full = np.zeros((m, total))
    A_full[:, : nz + n_slack] = A
    for a, i in enumerate(art_rows):
        A_full[i, nz + n_slack + a] = 1.0
        basis[i] = nz + n_slack + a

    tab = _Tableau(A_full, b, basis, feas_tol, opt_tol)
    allowed = np.ones(total, dtype=bool)
    if n_art:
        c1 = np.zeros(total)
        c1[nz + n_slack :] = 1.0
        tab.set_costs(c1)
        status = tab.run(allowed, max_iters)
        if status is Status.ITERATION_LIMIT:
            return LpSolution(status, np.full(lp.num_vars, np.nan), np.nan, tab.iterations)
        if -tab.T[-1, -1] > feas_tol * max(1.0, float(np.abs(b).max(initial=0.0))):
            return LpSolution(Status.INFEASIBLE, np.full(lp.num_vars, np.nan), np.nan, tab.iterations)
        # drive remaining artificials out of the basis
        first_art = nz + n_slack
        drop_rows = []
        for r in range(m):
            if tab.basis[r] >= first_art:
                row = tab.T[r, :first_art]
                cand = np.nonzero(np.abs(row) > feas_tol)[0]
                if cand.size:
                    tab.pivot(r, int(cand[0]))
                else:
                    drop_rows.append(r)
        if drop_rows:
            keep_rows = [r for r in range(m) if r not in set(drop_rows)]
            tab.T = np.vstack([tab.T[keep_rows], tab.T[-1:]])
            tab.basis = [tab.basis[r] for r in keep_rows]
            tab.m = len(keep_rows)
        allowed[first_art:] = False
    c2 = np.zeros(total)
    c2[:nz] = c
    tab.set_costs(c2)
    status = tab.run(allowed, max_iters)
    z = np.zeros(total)
    for r, j in enumerate(tab.basis):
        z[j] = tab.T[r, -1]
    y = recover(z[:nz])
    obj = float(lp.objective @ y)
    if status is not Status.OPTIMAL:
        log.debug("simplex stopped with %s after %d iterations", status, tab.iterations)
    return LpSolution(status, y, obj, tab.iterations, tuple(tab.basis))
