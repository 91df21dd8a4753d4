"""Verification registry.

Each check reproduces one acceptance criterion and returns a ``CheckResult``.
The CLI ``verify`` command and the acceptance tests both run from here, so
tolerances live in one place (``TOL``).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import catalog, cortes, random_placement, run_statistics
from .cost_exact import c0_circle, c0_line, expected_cost, expected_cost_dp, expected_cost_enumeration
from .model import Independent, make_placement
from .optimizer import canonical, optimize_cutting_plane, optimize_lp, sweep_p

TOL = {
    "oracle": 1e-10,
    "lp_vs_random": 1e-7,
    "cutting_plane": 1e-5,
    "chain": 1e-9,
    "eq7": 1e-9,
    "eq6": 10.0,
    "lemma1_slack": 0.05,
    "circle_floor": 1e-10,
    "circle_strict": 1e-9,
    "endpoint": 1e-4,
    "mc_sigmas": 4.0,
    "cortes_c": 1e-9,
    "sweep_match": 1e-5,
}

P_GRID = tuple(round(0.1 * i, 1) for i in range(1, 10))
P_ODD = (0.1, 0.3, 0.5, 0.7, 0.9)
ALT_WITNESS = (10, 5.0)  # (n, c) with p = c / n, frozen from catalog.alt_witness_search


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.criterion:2d} {self.name}: {self.detail} ({self.seconds:.1f}s)"


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    fn: Callable[[int], tuple[bool, str]]
    full_only: bool = False


def _rng(seed: int, tag: int) -> np.random.Generator:
    return catalog.rng_for(seed, tag)


@lru_cache(maxsize=None)
def _lp_opt(n: int, p: float, geom: str = "interval"):
    pl, cost = optimize_lp(n, Independent(p), geom)
    return pl.positions.copy(), cost


# 1 ------------------------------------------------------------------------
def check_oracle(seed: int) -> tuple[bool, str]:
    rng = _rng(seed, 1)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 15))
        p = float(rng.uniform(0.01, 0.99))
        geom = "circle" if rng.random() < 0.5 else "interval"
        x = rng.random(n)
        if n > 2 and rng.random() < 0.2:
            x[1] = x[0]  # coincident sensors
        model = Independent(p)
        d = expected_cost_dp(x, model, geom).expected_cost
        e = expected_cost_enumeration(x, model, geom).expected_cost
        worst = max(worst, abs(d - e))
    return worst <= TOL["oracle"], f"max |dp - enum| = {worst:.2e} over 200 instances"


# 2 ------------------------------------------------------------------------
def check_lp_soundness(seed: int) -> tuple[bool, str]:
    rng = _rng(seed, 2)
    worst_rand = np.inf  # min over instances of C(random) - C(x*)
    worst_cp = 0.0
    for n in range(2, 9):
        for p in P_GRID:
            model = Independent(p)
            _, c_lp = _lp_opt(n, p)
            xs = rng.random((1000, n))
            costs = np.array([expected_cost(x, model) for x in xs])
            worst_rand = min(worst_rand, float(costs.min() - c_lp))
            _, c_cp, _ = optimize_cutting_plane(n, model)
            worst_cp = max(worst_cp, abs(c_cp - c_lp))
    ok = worst_rand >= -TOL["lp_vs_random"] and worst_cp <= TOL["cutting_plane"]
    return ok, f"min C(rand) - C(x*) = {worst_rand:.3e}, max |cutting plane - LP| = {worst_cp:.2e}"


# 3 ------------------------------------------------------------------------
def check_eq7(seed: int) -> tuple[bool, str]:
    worst = -np.inf
    for n in range(2, 9):
        eq = catalog.equispaced(n)
        for p in P_GRID:
            _, c_opt = _lp_opt(n, p)
            bound = (2.0 / n) * p / (1.0 - p)
            worst = max(worst, expected_cost(eq, Independent(p)) - c_opt - bound)
    return worst <= TOL["eq7"], f"max C(eq) - C(x*) - 2p/(n(1-p)) = {worst:.3e}"


# 4 ------------------------------------------------------------------------
def check_eq6(seed: int) -> tuple[bool, str]:
    worst = 0.0
    for n in (10**2, 10**3, 10**4, 10**5):
        for p in (0.3, 0.5, 0.7):
            c = run_statistics.expected_cost_equispaced(n, p)
            worst = max(worst, abs(2 * n * c - math.log(n) / math.log(1.0 / p)))
    return worst <= TOL["eq6"], f"max |2nC(eq) - log n / log(1/p)| = {worst:.4f}"


# 5 ------------------------------------------------------------------------
def check_lemma1(seed: int) -> tuple[bool, str]:
    worst = -np.inf
    for n in (10**3, 10**4, 10**5):
        for p in (0.3, 0.5, 0.7):
            diff = abs(run_statistics.expected_longest_run(n, p) - run_statistics.lemma1_main_terms(n, p))
            allowed = run_statistics.run_law_params(n, p).r_bound + TOL["lemma1_slack"]
            worst = max(worst, diff - allowed)
    return worst <= 0.0, f"max |E R_n - main| - (r_bound + slack) = {worst:.4f}"


# 6 ------------------------------------------------------------------------
def check_chain(seed: int) -> tuple[bool, str]:
    rng = _rng(seed, 6)
    worst_chain = -np.inf
    worst_l4 = -np.inf
    worst_l2 = -np.inf
    for n in range(2, 9):
        eq = catalog.equispaced(n)
        for p in P_ODD:
            model = Independent(p)
            x_opt, c_opt = _lp_opt(n, p)
            q = [
                expected_cost(eq, model, "circle"),
                expected_cost(x_opt, model, "circle"),
                c_opt,
                expected_cost(eq, model, "interval"),
            ]
            worst_chain = max(worst_chain, max(a - b for a, b in zip(q, q[1:])))
            worst_l4 = max(worst_l4, q[3] - q[0] - (2.0 / n) * p / (1.0 - p))
        for _ in range(50):
            xa = np.sort(rng.random(int(rng.integers(1, n + 1))))
            worst_l2 = max(worst_l2, c0_circle(xa) - c0_line(xa))
    ok = max(worst_chain, worst_l4, worst_l2) <= TOL["chain"]
    return ok, f"chain violation {worst_chain:.2e}, circle-vs-line per set {worst_l2:.2e}, eq gap excess {worst_l4:.2e}"


# 7 ------------------------------------------------------------------------
def perturbations(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Perturbed equispaced placements; order-preserving (moves < 0.4/n)."""
    base = catalog.equispaced(n).positions
    out = []
    for _ in range(count):
        scale = 10.0 ** rng.uniform(-3.5, math.log10(0.4 / n))
        d = rng.uniform(-1.0, 1.0, n) * scale
        out.append(np.clip(base + d, 0.0, 1.0))
    return np.array(out)


def check_circle(seed: int) -> tuple[bool, str]:
    rng = _rng(seed, 7)
    worst_floor = np.inf
    worst_strict = np.inf
    for n in range(2, 9):
        eq = catalog.equispaced(n)
        for p in P_GRID:
            model = Independent(p)
            c_eq = expected_cost(eq, model, "circle")
            ref = canonical(eq, "circle")
            for x in perturbations(n, 50, rng):
                cx = canonical(x, "circle")
                diff = expected_cost(cx, model, "circle") - c_eq
                worst_floor = min(worst_floor, diff)
                if np.max(np.abs(cx - ref)) >= 1e-3 and p <= 0.9:
                    worst_strict = min(worst_strict, diff)
    ok = worst_floor >= -TOL["circle_floor"] and worst_strict >= TOL["circle_strict"]
    return ok, f"min C~(x) - C~(eq) = {worst_floor:.3e}, min over moves >= 1e-3: {worst_strict:.3e}"


# 8 ------------------------------------------------------------------------
def check_endpoints(seed: int) -> tuple[bool, str]:
    low = high = 0.0
    for n in range(1, 7):
        x_lo, _ = _lp_opt(n, 0.01)
        x_hi, _ = _lp_opt(n, 0.99)
        low = max(low, float(np.max(np.abs(x_lo - catalog.equispaced(n).positions))))
        high = max(high, float(np.max(np.abs(x_hi - 0.5))))
    ok = low <= TOL["endpoint"] and high <= TOL["endpoint"]
    return ok, f"max |x*(0.01) - eq| = {low:.2e}, max |x*(0.99) - 1/2| = {high:.2e}"


# 9 ------------------------------------------------------------------------
def check_clusters(seed: int) -> tuple[bool, str]:
    n, p = 10, 0.65
    k = catalog.choose_three_cluster_k(n, p)
    c3 = expected_cost(catalog.three_cluster(n, k), Independent(p))
    n_w, c_w = ALT_WITNESS
    pw = c_w / n_w
    ca = expected_cost(catalog.alt_placement(n_w), Independent(pw))
    ce = expected_cost(catalog.equispaced(n_w), Independent(pw))
    ok = c3 < 0.5 - 1e-12 and ca < ce
    return ok, f"three-cluster k={k}: {c3:.6f} < 0.5; alt at n={n_w}, p={pw:g}: {ca:.6f} < eq {ce:.6f}"


# 10 -----------------------------------------------------------------------
FIG2_N = (50, 100, 200, 500, 1000, 2000, 5000)


def check_random(seed: int) -> tuple[bool, str]:
    bad_m = [
        m
        for m in range(2, 201)
        if not (lambda b, v: b[0] <= v <= b[1])(random_placement.harmonic_bounds(m), random_placement.exact_ec0_random(m))
    ]
    zs = []
    for n, p in ((20, 0.3), (50, 0.5)):
        est, se = random_placement.monte_carlo_expected_cost(n, p, 10_000, seed)
        zs.append(abs(est - random_placement.expected_cost_random(n, p)) / se)
    margins = [
        random_placement.expected_cost_random(n, 0.3) - run_statistics.expected_cost_equispaced(n, 0.3) for n in FIG2_N
    ]
    ok = not bad_m and max(zs) <= TOL["mc_sigmas"] and min(margins) > 0.0
    return ok, (
        f"harmonic bracket misses {len(bad_m)} of m=2..200; MC |z| = {', '.join(f'{z:.2f}' for z in zs)}; "
        f"min E C(rand) - C(eq) over n=50..5000 = {min(margins):.3e}"
    )


# 11 -----------------------------------------------------------------------
def check_hoeffding(seed: int) -> tuple[bool, str]:
    rows = []
    ok = True
    for n in (100, 400, 1600):
        eps = math.sqrt(math.log(n) / n)
        lo, hi = random_placement.hoeffding_sandwich(n, 0.3, eps)
        v = random_placement.expected_cost_random(n, 0.3)
        ok &= lo <= v <= hi
        rows.append(f"n={n}: {lo:.4f} <= {v:.4f} <= {hi:.4f}")
    return ok, "; ".join(rows)


# 12 -----------------------------------------------------------------------
def check_cortes(seed: int) -> tuple[bool, str]:
    rng = _rng(seed, 12)
    misses = 0
    total = 0
    for n in (8, 12, 16):
        for k in (n // 4, n // 2):
            inst = cortes.CortesInstance(n, k)
            xs = [catalog.equispaced(n), catalog.single_cluster(n), make_placement(rng.random(n))]
            for eps in (0.05, 0.1, 0.15):
                for x in xs:
                    total += 1
                    misses += not cortes.lemma7_sandwich(x, inst, eps).holds
    worst_c = -np.inf
    rand_ok = True
    for n, k in ((6, 2), (8, 2), (8, 4), (10, 3)):
        rep = cortes.theorem5_checks(n, k)
        worst_c = max(worst_c, rep.near_opt_gap - rep.near_opt_bound)
        rand_ok &= rep.random_bracket_holds and bool(rep.opt_confirmed)
    ok = misses == 0 and worst_c <= TOL["cortes_c"] and rand_ok
    return ok, f"sandwich misses {misses}/{total}; max gap - 2k/(n(n-k)) = {worst_c:.3e}; (a)+(d) ok = {rand_ok}"


# 13 -----------------------------------------------------------------------
def check_sweep(seed: int) -> tuple[bool, str]:
    grid = np.linspace(0.005, 0.995, 200)
    res = sweep_p(12, grid, "interval", match_tol=TOL["sweep_match"])
    within = 0.0
    for s in range(res.n_segments):
        X = res.placements[res.segment_ids == s]
        if len(X) > 1:
            within = max(within, float(np.max(np.abs(np.diff(X, axis=0)))))
    cost_err = float(np.max(np.abs(res.costs - res.solver_costs)))
    ok = within <= TOL["sweep_match"] and res.n_segments < len(grid) // 2 and cost_err <= 1e-7
    return ok, (
        f"{res.n_segments} constant segments over {len(grid)} points, max step within segment {within:.1e}, "
        f"max |DP - LP cost| = {cost_err:.1e}"
    )


CHECKS = (
    Check(1, "dp matches enumeration", check_oracle),
    Check(2, "LP optimum and cutting planes", check_lp_soundness),
    Check(3, "equispaced near-optimality", check_eq7),
    Check(4, "equispaced log growth", check_eq6),
    Check(5, "longest run expectation", check_lemma1),
    Check(6, "circle/line cost chain", check_chain),
    Check(7, "equispaced optimal on the circle", check_circle),
    Check(8, "low/high p endpoints", check_endpoints),
    Check(9, "three-cluster and alternative placements", check_clusters),
    Check(10, "random placement cost", check_random),
    Check(11, "random placement sandwich", check_hoeffding),
    Check(12, "fixed failure count", check_cortes),
    Check(13, "n=12 sweep over p", check_sweep, full_only=True),
)


def run_check(check: Check, seed: int = 0) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail = check.fn(seed)
    except Exception as exc:  # a crash is a failed check, not a crashed suite
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(check.criterion, check.name, bool(ok), detail, time.perf_counter() - t0)


def run_suite(suite: str = "fast", seed: int = 0, on_result: Callable[[CheckResult], None] | None = None):
    if suite not in ("fast", "full"):
        raise ValueError(f"unknown suite {suite!r}")
    results = []
    for chk in CHECKS:
        if chk.full_only and suite == "fast":
            continue
        r = run_check(chk, seed)
        results.append(r)
        if on_result:
            on_result(r)
    return results


__all__ = ["CHECKS", "Check", "CheckResult", "TOL", "run_check", "run_suite"]
