import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from coverplace.catalog import rng_for
from coverplace.cost_exact import c0_line
from coverplace.model import BadEpsilon
from coverplace.random_placement import (
    RATIONAL_LIMIT,
    ec0_random_closed_form,
    exact_ec0_random,
    exact_ec0_random_rational,
    expected_cost_random,
    harmonic,
    harmonic_bounds,
    harmonic_exact,
    hoeffding_sandwich,
    monte_carlo_expected_cost,
    random_study,
    sample_spacings,
    spacing_joint_survival,
    theorem3_asymptote,
)
from coverplace.run_statistics import expected_cost_equispaced, theorem2_asymptote


def test_small_m():
    assert exact_ec0_random(0) == 1.0
    assert exact_ec0_random(1) == 0.75
    assert exact_ec0_random_rational(2) == Fraction(19, 36)
    lo, hi = harmonic_bounds(5)
    assert lo == pytest.approx(float(harmonic_exact(6)) / 12)
    assert hi == pytest.approx((float(harmonic_exact(4)) + 4) / 12)
    assert lo <= exact_ec0_random(5) <= hi


def test_harmonic():
    assert harmonic_exact(3) == Fraction(11, 6)
    for m in (0, 1, 10, 63, 64, 65, 1000):
        assert harmonic(m) == pytest.approx(float(harmonic_exact(m)), rel=1e-14)


def test_harmonic_bracket_all_m():
    for m in range(2, 201):
        lo, hi = harmonic_bounds(m)
        assert lo <= exact_ec0_random(m) <= hi


def test_rational_and_closed_form_agree():
    for m in range(1, RATIONAL_LIMIT + 1):
        assert float(ec0_random_closed_form(m)) == pytest.approx(float(exact_ec0_random_rational(m)), abs=1e-10)


def _survival_quad(m):
    # Pr(C0 > v) = 1 - Pr(V_1 <= v, V_{m+1} <= v, V_i <= 2v) integrated numerically,
    # with the joint CDF taken from simulation-free inclusion-exclusion in exact
    # rationals at each v (moderate m only)
    def surv(v):
        tot = Fraction(0)
        fv = Fraction(v)
        for a in range(3):
            for r in range(m):
                if a == 0 and r == 0:
                    continue
                base = 1 - (a + 2 * r) * fv
                if base <= 0:
                    continue
                term = math.comb(2, a) * math.comb(m - 1, r) * base**m
                tot += term if (a + r) % 2 else -term
        return float(tot)

    breaks = sorted({1.0 / k for k in range(1, 2 * m + 2)})
    return quad(surv, 0.0, 1.0, points=breaks, limit=200, epsabs=1e-13)[0]


@pytest.mark.parametrize("m", [1, 2, 5, 12])
def test_survival_integral_matches(m):
    assert _survival_quad(m) == pytest.approx(exact_ec0_random(m), abs=1e-9)


@pytest.mark.parametrize("m", [1, 3, 8])
def test_exact_value_against_simulation(m):
    rng = rng_for(5, m)
    u = np.sort(rng.random((200_000, m)), axis=1)
    vals = np.array([c0_line(row) for row in u[:20_000]])
    assert abs(vals.mean() - exact_ec0_random(m)) <= 4 * vals.std() / math.sqrt(len(vals))


def test_rope_cutting_joint_survival():
    rng = rng_for(2024, 0)
    V = sample_spacings(5, 1_000_000, rng)
    hit = (V[:, 0] > 0.2) & (V[:, 2] > 0.1)
    want = spacing_joint_survival([0.2, 0.1], 5)
    assert want == pytest.approx(0.7**5)
    se = math.sqrt(want * (1 - want) / len(hit))
    assert abs(hit.mean() - want) <= 3 * se
    assert np.allclose(V.sum(axis=1)[:100], 1.0)


def test_mixture_examples():
    assert expected_cost_random(1, 0.3) == pytest.approx(0.825)
    assert expected_cost_random(7, 1.0) == 1.0
    n = 200
    eps = math.sqrt(math.log(n) / n)
    lo, hi = hoeffding_sandwich(n, 0.3, eps)
    assert lo <= expected_cost_random(n, 0.3) <= hi


def test_sandwich_checks():
    lo, hi = hoeffding_sandwich(400, 0.3, 0.1)
    assert lo <= expected_cost_random(400, 0.3) <= hi
    for eps in (0.0, 0.3, 0.5):
        with pytest.raises(BadEpsilon):
            hoeffding_sandwich(400, 0.3, eps)
    with pytest.raises(BadEpsilon):
        hoeffding_sandwich(400, 0.8, 0.25)  # above 1 - p
    tiny = hoeffding_sandwich(400, 0.3, 1e-9)[0]
    assert tiny < 1e-9


@pytest.mark.parametrize("n", [100, 400, 1600])
def test_sandwich_theorem_eps(n):
    eps = math.sqrt(math.log(n) / n)
    lo, hi = hoeffding_sandwich(n, 0.3, eps)
    assert lo <= expected_cost_random(n, 0.3) <= hi


def test_monte_carlo_n20():
    est, se = monte_carlo_expected_cost(20, 0.3, 10_000, 11)
    assert abs(est - expected_cost_random(20, 0.3)) <= 4 * se


def test_monte_carlo_deterministic_and_thread_independent():
    a = monte_carlo_expected_cost(12, 0.4, 64, 3, threads=1)
    b = monte_carlo_expected_cost(12, 0.4, 64, 3, threads=4)
    assert a == b
    assert a == monte_carlo_expected_cost(12, 0.4, 64, 3)
    with pytest.raises(ValueError):
        monte_carlo_expected_cost(12, 0.4, 1, 3)


def test_monte_carlo_p_zero_is_mean_c0():
    est, _ = monte_carlo_expected_cost(6, 0.0, 50, 8, threads=1)
    from coverplace.catalog import sample_uniform_placement

    want = np.mean([c0_line(sample_uniform_placement(6, 8, r).positions) for r in range(50)])
    assert est == pytest.approx(want, abs=1e-14)


def test_theorem3_asymptote():
    assert theorem3_asymptote(math.e**2, 0.5) == pytest.approx(2 / math.e**2)
    for p in np.linspace(0.05, 0.95, 19):
        assert theorem3_asymptote(1000, p) > theorem2_asymptote(1000, p)
    ratio = expected_cost_random(10_000, 0.3) / theorem3_asymptote(10_000, 0.3)
    assert abs(ratio - 1) <= 0.5
    r2 = expected_cost_random(100, 0.3) / theorem3_asymptote(100, 0.3)
    assert abs(ratio - 1) < abs(r2 - 1)


@pytest.mark.parametrize("n", [50, 100, 200, 500, 1000])
def test_random_worse_than_equispaced(n):
    assert expected_cost_random(n, 0.3) > expected_cost_equispaced(n, 0.3)


def test_study_report():
    rep = random_study(30, 0.3, 40, 1)
    assert rep.bounds_hold()
    assert rep.mixture_value == pytest.approx(expected_cost_random(30, 0.3))
    assert rep.exact_values[0] == 1.0
    assert rep.asymptote == pytest.approx(theorem3_asymptote(30, 0.3))
