"""Failure runs in a row of independently failing sensors.

Exact distribution of the longest run, its asymptotic expansion, border
(truncated geometric) runs, and the exact expected cost of the equispaced
placement obtained from run-length constraints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

EULER_GAMMA = 0.57721566490153286061
# tail mass below which the sums over run lengths are cut
TAIL_TOL = 1e-17


@dataclass(frozen=True)
class RunLawParams:
    n: int
    p: float
    gamma: float
    theta: float
    r_bound: float


def run_law_params(n: int, p: float) -> RunLawParams:
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    L = math.log(1.0 / p)
    theta = math.pi**2 / L
    et = math.exp(-theta)
    r_bound = math.sqrt(theta) * et / (2.0 * math.pi * (1.0 - et) ** 2)
    return RunLawParams(n, p, EULER_GAMMA, theta, r_bound)


def _no_run_at_least(n: int, p: float, ells: np.ndarray) -> np.ndarray:
    """Pr(R_n < ell) for each ell in ``ells``."""
    ells = np.asarray(ells, dtype=np.int64)
    caps = ells - 1
    out = np.zeros(ells.shape[0])
    ok = caps >= 0
    if ok.any():
        c = caps[ok]
        vals = np.asarray(kernels.run_prob(n, p, c, c, c), dtype=float)
        vals = vals + np.where(c >= n, p**n, 0.0)  # the all-failed string
        out[ok] = vals
    return np.minimum(out, 1.0)


def longest_run_cdf(n: int, p: float, ell: int) -> float:
    """Pr(R_n < ell), R_n the longest run of failures among n sensors."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if ell > n:
        return 1.0
    return float(_no_run_at_least(n, p, np.array([ell]))[0])


def _tail_cut(n: int, p: float, first: int, last: int, tail) -> int:
    """Smallest k in [first, last] with tail(k) <= TAIL_TOL (else last)."""
    if p <= 0.0:
        return first
    for k in range(first, last + 1):
        if tail(k) <= TAIL_TOL:
            return k
    return last


def expected_longest_run(n: int, p: float) -> float:
    """E[R_n] as the sum of survival probabilities Pr(R_n >= ell)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if p >= 1.0:
        return float(n)
    # Pr(R_n >= ell) <= n p^ell, so sum_{ell > L} <= n p^(L+1) / (1 - p)
    last = _tail_cut(n, p, 1, n, lambda k: n * p ** (k + 1) / (1.0 - p))
    ells = np.arange(1, last + 1)
    cdf = _no_run_at_least(n, p, ells)
    return math.fsum((1.0 - cdf).tolist())


def lemma1_main_terms(n: int, p: float) -> float:
    """Leading terms of the asymptotic expansion of E[R_n] (no periodic part)."""
    L = math.log(1.0 / p)
    return math.log(n) / L + math.log(1.0 - p) / L + EULER_GAMMA / L - 0.5


def truncated_geometric_mean(n: int, p: float) -> float:
    """E[min(X, n)] for X geometric, Pr(X = k) = p^k (1 - p).

    This is the mean length of the failure run touching either end sensor.
    """
    k = np.arange(n)
    return math.fsum((k * p**k * (1.0 - p)).tolist()) + n * p**n


def equispaced_survival(n: int, p: float, t: np.ndarray) -> np.ndarray:
    """Pr(A non-empty and 2n C0(x^eq_A) <= t) for integer t.

    On the equispaced placement ``2n C0 = max(R + 1, 2 L_i + 1, 2 L_f + 1)``
    with R the longest interior run and L_i, L_f the border runs.
    """
    t = np.asarray(t, dtype=np.int64)
    out = np.zeros(t.shape[0])
    ok = t >= 1
    if ok.any():
        tt = t[ok]
        border = (tt - 1) // 2
        out[ok] = kernels.run_prob(n, p, border, tt - 1, border)
    return out


def expected_cost_equispaced(n: int, p: float) -> float:
    """Exact C(x^eq) for independent failures from the run-length law.

    ``E = p^n + (1/2n) * sum_{t >= 0} Pr(A non-empty, 2n C0 > t)``. The sum
    stops once the union bound ``n p^t + 2 p^(floor((t-1)/2)+1)`` on the
    remaining mass, summed geometrically, drops below ``TAIL_TOL``; it always
    stops at t = 2n - 1 where the survival is exactly zero.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p < 1.0:
        raise ValueError(f"p must lie in [0, 1), got {p}")
    nonempty = 1.0 - p**n
    if p == 0.0:
        return 1.0 / (2 * n)

    def tail(t):
        return (n * p**t + 4.0 * p ** ((t - 1) // 2 + 1)) / (1.0 - math.sqrt(p))

    last = _tail_cut(n, p, 1, 2 * n - 1, tail)
    t = np.arange(0, last + 1)
    F = equispaced_survival(n, p, t)
    surv = np.maximum(nonempty - F, 0.0)
    return p**n + math.fsum(surv.tolist()) / (2 * n)


def equispaced_sandwich(n: int, p: float) -> tuple[float, float]:
    """Lower and upper bounds on C(x^eq) from E[R_n] and the border runs."""
    er = expected_longest_run(n, p)
    lo = (er + 1.0) / (2 * n)
    hi = lo + 2.0 * (2.0 * truncated_geometric_mean(n, p) + 1.0) / (2 * n)
    return lo, hi


def theorem2_asymptote(n: int, p: float) -> float:
    """Leading term log n / (2 n log(1/p)) of C(x^eq)."""
    return math.log(n) / (2.0 * n * math.log(1.0 / p))
