import numpy as np
import pytest

from coverplace.catalog import equispaced, sample_uniform_placement, single_cluster
from coverplace.cortes import CortesInstance, cortes_expected_cost, lemma7_sandwich, theorem5_checks
from coverplace.cost_exact import expected_cost
from coverplace.model import BadEpsilon, BadModel, Cortes
from coverplace.random_placement import exact_ec0_random


def test_examples():
    assert cortes_expected_cost([0.5, 0.5], CortesInstance(2, 1)) == pytest.approx(0.5)
    assert cortes_expected_cost([0.25, 0.75], CortesInstance(2, 0)) == pytest.approx(0.25)
    with pytest.raises(BadModel):
        CortesInstance(3, 3)
    with pytest.raises(BadModel):
        cortes_expected_cost([0.5], CortesInstance(2, 1))


@pytest.mark.parametrize("n", range(1, 15))
def test_dp_equals_enumeration(n):
    rng = np.random.default_rng(n)
    for k in sorted({0, n // 3, n // 2, n - 1}):
        inst = CortesInstance(n, k)
        x = rng.random(n)
        for geom in ("interval", "circle"):
            a = cortes_expected_cost(x, inst, geom, method="dp")
            b = cortes_expected_cost(x, inst, geom, method="enum")
            assert a == pytest.approx(b, abs=1e-10)


def test_lemma7_example_and_eps_range():
    inst = CortesInstance(12, 4)
    s = lemma7_sandwich(equispaced(12), inst, 0.1)
    assert s.holds
    for eps in (0.0, 1 / 3, 0.5):
        with pytest.raises(BadEpsilon):
            lemma7_sandwich(equispaced(12), inst, eps)
    with pytest.raises(BadEpsilon):
        lemma7_sandwich(equispaced(12), CortesInstance(12, 0), 0.01)


def test_lemma7_eps_grid():
    inst = CortesInstance(12, 4)
    for eps in np.linspace(0.01, 0.33, 17):
        assert lemma7_sandwich(equispaced(12), inst, float(eps)).holds


@pytest.mark.parametrize("n", [8, 12, 16])
def test_lemma7_grid(n):
    for k in (n // 4, n // 2):
        inst = CortesInstance(n, k)
        for eps in (0.05, 0.1, 0.15):
            for x in (equispaced(n), single_cluster(n), sample_uniform_placement(n, 4, n)):
                assert lemma7_sandwich(x, inst, eps).holds


def test_theorem5_six_two():
    rep = theorem5_checks(6, 2)
    assert rep.opt_confirmed
    assert rep.near_opt_bound == pytest.approx(1 / 6)
    assert rep.near_opt_gap <= 1 / 6 + 1e-9
    assert rep.random_value == exact_ec0_random(4)
    assert rep.random_bounds[0] <= rep.random_value <= rep.random_bounds[1]
    assert rep.ok


def test_theorem5_no_failures_is_deterministic():
    rep = theorem5_checks(5, 0)
    assert rep.eq_cost == pytest.approx(0.1)
    assert rep.near_opt_gap == pytest.approx(0.0, abs=1e-12)
    assert rep.trend_lower is None


def test_theorem5_large_n_skips_lp():
    rep = theorem5_checks(40, 10)
    assert rep.opt_cost is None and rep.near_opt_gap is None
    assert rep.random_bracket_holds and rep.ok
    assert rep.trend_lower is not None and rep.trend_lower > 0


@pytest.mark.parametrize("n", [3, 4, 6, 8])
def test_equispaced_dominates_on_circle(n):
    rng = np.random.default_rng(100 + n)
    for k in range(n):
        model = Cortes(k, n)
        ref = expected_cost(equispaced(n), model, "circle")
        for x in rng.random((50, n)):
            assert ref <= expected_cost(x, model, "circle") + 1e-12
