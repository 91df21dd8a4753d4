"""Fixed failure count: exactly k of the n sensors fail, uniformly.

The law only depends on |A|, so the survival DP with a count dimension gives
exact costs. The independent-failure costs at p = k/n -+ eps sandwich the
fixed-count cost (Hoeffding coupling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .catalog import equispaced
from .cost_exact import ENUM_LIMIT, expected_cost_dp, expected_cost_enumeration
from .model import BadEpsilon, BadModel, Cortes, Geometry, Independent, make_placement
from .random_placement import exact_ec0_random, harmonic_bounds

LP_CHECK_LIMIT = 10


@dataclass(frozen=True)
class CortesInstance:
    n: int
    k: int

    def __post_init__(self):
        if not (0 <= self.k < self.n):
            raise BadModel(f"need 0 <= k < n, got k={self.k}, n={self.n}")

    @property
    def model(self) -> Cortes:
        return Cortes(self.k, self.n)

    @property
    def active(self) -> int:
        return self.n - self.k


def cortes_expected_cost(x, inst: CortesInstance, geom: Geometry | str = Geometry.INTERVAL, method: str = "dp") -> float:
    pl = make_placement(x)
    if pl.n != inst.n:
        raise BadModel(f"placement has {pl.n} sensors, instance has n={inst.n}")
    if method == "enum":
        if pl.n > ENUM_LIMIT:
            method = "dp"
        else:
            return expected_cost_enumeration(pl, inst.model, geom).expected_cost
    return expected_cost_dp(pl, inst.model, geom).expected_cost


class Sandwich(NamedTuple):
    lower: float
    upper: float
    value: float

    @property
    def holds(self) -> bool:
        return self.lower <= self.value <= self.upper


def lemma7_sandwich(x, inst: CortesInstance, eps: float, geom: Geometry | str = Geometry.INTERVAL) -> Sandwich:
    """C^{k/n-eps}(x) - e^{-2n eps^2} <= C^{k,n}(x) <= C^{k/n+eps}(x) + e^{-2n eps^2}."""
    q = inst.k / inst.n
    if not 0.0 < eps < min(q, 1.0 - q):
        raise BadEpsilon(f"need 0 < eps < min(k/n, 1 - k/n) = {min(q, 1.0 - q)}, got {eps}")
    tail = math.exp(-2.0 * inst.n * eps * eps)
    lo = expected_cost_dp(x, Independent(q - eps), geom).expected_cost - tail
    hi = expected_cost_dp(x, Independent(q + eps), geom).expected_cost + tail
    return Sandwich(lo, hi, cortes_expected_cost(x, inst, geom))


@dataclass
class Theorem5Report:
    n: int
    k: int
    eq_cost: float
    opt_cost: float | None = None  # (a) LP optimum, n <= LP_CHECK_LIMIT
    opt_confirmed: bool | None = None
    near_opt_gap: float | None = None  # (c) C(x^eq) - C(x*)
    near_opt_bound: float | None = None
    trend_eps: float | None = None  # (b), reported only
    trend_lower: float | None = None
    random_value: float = float("nan")  # (d)
    random_bounds: tuple[float, float] = (float("nan"), float("nan"))

    @property
    def near_opt_holds(self) -> bool | None:
        if self.near_opt_gap is None:
            return None
        return self.near_opt_gap <= self.near_opt_bound + 1e-9

    @property
    def random_bracket_holds(self) -> bool:
        lo, hi = self.random_bounds
        return lo <= self.random_value <= hi

    @property
    def ok(self) -> bool:
        parts = [self.random_bracket_holds]
        if self.near_opt_gap is not None:
            parts += [bool(self.opt_confirmed), bool(self.near_opt_holds)]
        return all(parts)


def theorem5_checks(n: int, k: int, eps: float | None = None) -> Theorem5Report:
    from .optimizer import optimize_lp

    inst = CortesInstance(n, k)
    x_eq = equispaced(n)
    rep = Theorem5Report(n, k, cortes_expected_cost(x_eq, inst))
    if n <= LP_CHECK_LIMIT:
        x_opt, c_opt = optimize_lp(n, inst.model)
        rep.opt_cost = c_opt
        # the LP value must be attained at its own point and beat the named placements
        attained = abs(cortes_expected_cost(x_opt, inst) - c_opt) <= 1e-9
        rep.opt_confirmed = attained and c_opt <= rep.eq_cost + 1e-9
        rep.near_opt_gap = rep.eq_cost - c_opt
        rep.near_opt_bound = (2.0 / n) * k / (n - k)
    if k > 0:
        e = eps if eps is not None else 0.5 * k / n
        if k - n * e > 0:
            rep.trend_eps = e
            rep.trend_lower = math.log(n) / (2.0 * math.log(n / (k - n * e)) * n)
    m = n - k
    rep.random_value = exact_ec0_random(m)
    rep.random_bounds = harmonic_bounds(m)
    return rep
