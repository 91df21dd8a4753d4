"""Expected cost of uniformly random placements.

For m active sensors at i.i.d. uniform positions the cost only depends on
the spacings V_1..V_{m+1} of the sorted sample. Their joint survival is
Pr(V_i1 > c_1, ..., V_ir > c_r) = (1 - sum c)_+^m, which gives the exact
value of E[C0] by inclusion-exclusion over the events {V_1 > v},
{V_{m+1} > v} and {V_i > 2v}.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import betaln, digamma
from scipy.stats import binom

from .catalog import sample_uniform_placement
from .cost_exact import expected_cost_dp
from .model import BadEpsilon, Independent
from .optimizer import thread_count
from .run_statistics import EULER_GAMMA

RATIONAL_LIMIT = 60


def harmonic(m: int) -> float:
    if m < 0:
        raise ValueError("harmonic number of a negative index")
    if m < 64:
        return math.fsum(1.0 / h for h in range(1, m + 1))
    return float(digamma(m + 1.0)) + EULER_GAMMA


def harmonic_exact(m: int) -> Fraction:
    return sum((Fraction(1, h) for h in range(1, m + 1)), Fraction(0))


def spacing_joint_survival(c, m: int) -> float:
    """Pr(V_i > c_i for the listed distinct spacings) for m uniforms."""
    return max(0.0, 1.0 - float(np.sum(c))) ** m


def sample_spacings(m: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` x (m + 1) array of spacings of m sorted uniforms."""
    u = np.sort(rng.random((size, m)), axis=1)
    edges = np.concatenate([np.zeros((size, 1)), u, np.ones((size, 1))], axis=1)
    return np.diff(edges, axis=1)


@lru_cache(maxsize=None)
def _ec0_rational(m: int) -> Fraction:
    total = Fraction(0)
    for a in range(3):
        for r in range(m):
            if a == 0 and r == 0:
                continue
            term = Fraction(math.comb(2, a) * math.comb(m - 1, r), (a + 2 * r) * (m + 1))
            total += term if (a + r) % 2 else -term  # sign (-1)^(a+r+1)
    return total


def exact_ec0_random_rational(m: int) -> Fraction:
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return Fraction(1)
    return _ec0_rational(m)


def ec0_random_closed_form(m):
    """Same value without cancellation:
    (H_{m-1} / 2 + B(1/2, m) - 1 / (2m)) / (m + 1), vectorised over m >= 1."""
    m = np.asarray(m, dtype=float)
    hm1 = digamma(m) + EULER_GAMMA
    return (0.5 * hm1 + np.exp(betaln(0.5, m)) - 0.5 / m) / (m + 1.0)


def exact_ec0_random(m: int) -> float:
    """E[C0] for m active sensors placed uniformly at random (1 for m = 0)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return 1.0
    if m <= RATIONAL_LIMIT:
        return float(_ec0_rational(m))
    return float(ec0_random_closed_form(m))


def ec0_table(n: int) -> np.ndarray:
    """exact_ec0_random(m) for m = 0..n."""
    out = np.empty(n + 1)
    out[0] = 1.0
    small = min(n, RATIONAL_LIMIT)
    for m in range(1, small + 1):
        out[m] = float(_ec0_rational(m))
    if n > RATIONAL_LIMIT:
        out[small + 1 :] = ec0_random_closed_form(np.arange(small + 1, n + 1))
    return out


def harmonic_bounds(m: int) -> tuple[float, float]:
    """H_{m+1} / (2(m+1)) <= E[C0] <= (H_{m-1} + 4) / (2(m+1)), m >= 1."""
    return harmonic(m + 1) / (2.0 * (m + 1)), (harmonic(m - 1) + 4.0) / (2.0 * (m + 1))


def expected_cost_random(n: int, p: float) -> float:
    """E[C(x^rand)]: binomial mixture over the number of active sensors."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if p >= 1.0:
        return 1.0
    w = binom.pmf(np.arange(n + 1), n, 1.0 - p)
    return math.fsum((w * ec0_table(n)).tolist())


def hoeffding_sandwich(n: int, p: float, eps: float) -> tuple[float, float]:
    if not 0.0 < eps < p:
        raise BadEpsilon(f"lower bound needs eps in (0, p) = (0, {p}), got {eps}")
    if not eps < 1.0 - p:
        raise BadEpsilon(f"upper bound needs eps in (0, 1 - p) = (0, {1.0 - p}), got {eps}")
    tail = math.exp(-2.0 * eps * eps * n)
    hi_m = math.ceil((1.0 - p + eps) * n)
    lo_m = math.ceil((1.0 - p - eps) * n)
    lower = (1.0 - tail) * harmonic(hi_m) / (2.0 * hi_m)
    upper = tail + (harmonic(lo_m) + 4.0) / (2.0 * lo_m + 2.0)
    return lower, upper


def theorem3_asymptote(n: float, p: float) -> float:
    return math.log(n) / (2.0 * (1.0 - p) * n)


def _replicate_costs(n: int, p: float, seed: int, idx: range) -> list[float]:
    model = Independent(p)
    return [expected_cost_dp(sample_uniform_placement(n, seed, r), model).expected_cost for r in idx]


def monte_carlo_expected_cost(
    n: int, p: float, reps: int, seed: int, threads: int | None = None
) -> tuple[float, float]:
    """Mean of C(x) over ``reps`` random placements, failures integrated exactly.

    Replicate r uses the stream (seed, r); values are stored by index and
    reduced in a fixed order, so the result does not depend on ``threads``.
    """
    if reps < 2:
        raise ValueError("reps must be >= 2")
    workers = max(1, min(threads or thread_count(), reps))
    bounds = np.linspace(0, reps, workers + 1).astype(int)
    chunks = [range(bounds[i], bounds[i + 1]) for i in range(workers)]
    if workers == 1:
        parts = [_replicate_costs(n, p, seed, chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda c: _replicate_costs(n, p, seed, c), chunks))
    vals = np.array([v for part in parts for v in part])
    mean = math.fsum(vals.tolist()) / reps
    sd = math.sqrt(math.fsum(((vals - mean) ** 2).tolist()) / (reps - 1))
    return mean, sd / math.sqrt(reps)


@dataclass
class RandomStudyReport:
    n: int
    p: float
    exact_values: dict[int, float]
    mixture_value: float
    mc_estimate: float
    mc_stderr: float
    harmonic_lower: dict[int, float] = field(default_factory=dict)
    harmonic_upper: dict[int, float] = field(default_factory=dict)
    asymptote: float = float("nan")

    def bounds_hold(self) -> bool:
        return all(
            self.harmonic_lower[m] <= self.exact_values[m] <= self.harmonic_upper[m] for m in self.harmonic_lower
        )


def random_study(n: int, p: float, reps: int, seed: int, threads: int | None = None) -> RandomStudyReport:
    table = ec0_table(n)
    exact = {m: float(table[m]) for m in range(n + 1)}
    lo, hi = {}, {}
    for m in range(2, n + 1):
        lo[m], hi[m] = harmonic_bounds(m)
    est, se = monte_carlo_expected_cost(n, p, reps, seed, threads)
    asym = theorem3_asymptote(n, p) if n >= 2 else float("nan")
    return RandomStudyReport(n, p, exact, expected_cost_random(n, p), est, se, lo, hi, asym)
