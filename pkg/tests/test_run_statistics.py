import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coverplace.catalog import equispaced
from coverplace.cost_exact import expected_cost_enumeration
from coverplace.model import Independent
from coverplace.run_statistics import (
    EULER_GAMMA,
    equispaced_sandwich,
    expected_cost_equispaced,
    expected_longest_run,
    lemma1_main_terms,
    longest_run_cdf,
    run_law_params,
    theorem2_asymptote,
    truncated_geometric_mean,
)


def brute_runs(n, p):
    """Distribution of the longest failure run by enumerating strings."""
    dist = {}
    for bits in itertools.product([0, 1], repeat=n):  # 1 = failed
        pr = math.prod(p if b else 1 - p for b in bits)
        run = best = 0
        for b in bits:
            run = run + 1 if b else 0
            best = max(best, run)
        dist[best] = dist.get(best, 0.0) + pr
    return dist


def test_longest_run_examples():
    assert longest_run_cdf(3, 0.5, 4) == 1.0
    assert longest_run_cdf(3, 0.5, 1) == pytest.approx(0.125)
    assert longest_run_cdf(3, 0.5, 3) == pytest.approx(0.875)
    assert expected_longest_run(3, 0.5) == pytest.approx(1.375)


@pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 0.9])
def test_single_sensor_run_is_bernoulli(p):
    assert expected_longest_run(1, p) == pytest.approx(p)


@given(st.integers(1, 10), st.floats(0.01, 0.99))
def test_longest_run_matches_enumeration(n, p):
    dist = brute_runs(n, p)
    for ell in range(0, n + 2):
        want = sum(v for r, v in dist.items() if r < ell)
        assert longest_run_cdf(n, p, ell) == pytest.approx(want, abs=1e-12)
    assert expected_longest_run(n, p) == pytest.approx(sum(r * v for r, v in dist.items()), abs=1e-12)


@given(st.integers(1, 60), st.floats(0.01, 0.99))
def test_cdf_monotone_and_complete(n, p):
    vals = [longest_run_cdf(n, p, ell) for ell in range(n + 2)]
    assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))
    assert vals[-1] == 1.0


def test_lemma1_constants():
    assert lemma1_main_terms(1024, 0.5) == pytest.approx(10 - 1 + EULER_GAMMA / math.log(2) - 0.5, abs=1e-12)
    assert lemma1_main_terms(1024, 0.5) == pytest.approx(9.3327, abs=1e-4)
    p = 1 / math.e
    assert lemma1_main_terms(math.exp(10), p) == pytest.approx(10 + math.log(1 - p) + EULER_GAMMA - 0.5)
    prm = run_law_params(100, 0.5)
    assert prm.theta == pytest.approx(math.pi**2 / math.log(2))
    assert 0 <= prm.r_bound < 1e-4
    assert prm.gamma == pytest.approx(0.5772156649)


@pytest.mark.parametrize("n", [10**4])
def test_expected_longest_run_near_main_terms(n):
    prm = run_law_params(n, 0.5)
    assert abs(expected_longest_run(n, 0.5) - lemma1_main_terms(n, 0.5)) <= prm.r_bound + 0.05


def test_truncated_geometric():
    assert truncated_geometric_mean(1, 0.5) == pytest.approx(0.5)
    assert truncated_geometric_mean(200, 0.5) == pytest.approx(1.0)
    assert truncated_geometric_mean(7, 0.0) == 0.0
    for n in (1, 5, 50):
        for p in (0.1, 0.5, 0.9):
            assert truncated_geometric_mean(n, p) <= p / (1 - p) + 1e-12


def test_equispaced_examples():
    assert expected_cost_equispaced(2, 0.5) == pytest.approx(0.6875, abs=1e-15)
    assert expected_cost_equispaced(5, 0.0) == pytest.approx(0.1)


@pytest.mark.parametrize("n", range(1, 15))
def test_equispaced_matches_enumeration(n):
    for p in np.arange(0.05, 0.96, 0.05):
        want = expected_cost_enumeration(equispaced(n), Independent(float(p))).expected_cost
        assert expected_cost_equispaced(n, float(p)) == pytest.approx(want, abs=1e-10)


@pytest.mark.parametrize("n,p", [(10, 0.3), (100, 0.5), (1000, 0.3), (1000, 0.8), (5000, 0.6)])
def test_equispaced_sandwich(n, p):
    lo, hi = equispaced_sandwich(n, p)
    c = expected_cost_equispaced(n, p)
    assert lo <= c <= hi
    er = expected_longest_run(n, p)
    assert hi <= (er + 1) / (2 * n) + 2 * (2 * p / (1 - p) + 1) / (2 * n) + 1e-15


def test_equispaced_log_growth_bounded():
    for p in (0.3, 0.5, 0.7):
        for n in (10**2, 10**3, 10**4):
            a = 2 * n * expected_cost_equispaced(n, p) - math.log(n) / math.log(1 / p)
            assert abs(a) <= 10
    assert theorem2_asymptote(math.e**2, math.exp(-1)) == pytest.approx(1 / math.e**2)
