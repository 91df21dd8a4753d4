import numpy as np
import pytest

from coverplace.catalog import equispaced
from coverplace.cost_exact import expected_cost
from coverplace.model import Cortes, Independent, TooLarge
from coverplace.optimizer import (
    NoConvergence,
    canonical,
    optimize_cutting_plane,
    optimize_lp,
    segments,
    sweep_p,
)


def test_two_sensors_low_and_high_p():
    pl, _ = optimize_lp(2, Independent(0.01))
    assert pl.positions == pytest.approx([0.25, 0.75], abs=1e-4)
    pl, _ = optimize_lp(2, Independent(0.99))
    assert pl.positions == pytest.approx([0.5, 0.5], abs=1e-4)


@pytest.mark.parametrize("p", [0.05, 0.3, 0.6, 0.95])
def test_three_on_circle_equals_equispaced(p):
    _, cost = optimize_lp(3, Independent(p), "circle")
    assert cost == pytest.approx(expected_cost(equispaced(3), Independent(p), "circle"), abs=1e-7)


def test_lp_guard():
    with pytest.raises(TooLarge):
        optimize_lp(13, Independent(0.5))
    with pytest.raises(TooLarge):
        optimize_cutting_plane(21, Independent(0.5))


@pytest.mark.parametrize("n,p", [(3, 0.2), (5, 0.5), (7, 0.8)])
def test_lp_cost_is_attained_and_beats_random(n, p):
    model = Independent(p)
    pl, cost = optimize_lp(n, model)
    assert expected_cost(pl, model) == pytest.approx(cost, abs=1e-8)
    rng = np.random.default_rng(n)
    for x in rng.random((200, n)):
        assert cost <= expected_cost(x, model) + 1e-7


@pytest.mark.parametrize("n", [2, 4, 6])
@pytest.mark.parametrize("p", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("geom", ["interval", "circle"])
def test_cutting_plane_matches_lp(n, p, geom):
    _, c_lp = optimize_lp(n, Independent(p), geom)
    pl, c_cp, gap = optimize_cutting_plane(n, Independent(p), geom)
    assert c_cp == pytest.approx(c_lp, abs=1e-5)
    assert 0.0 <= gap <= 1e-6
    assert expected_cost(pl, Independent(p), geom) == pytest.approx(c_cp, abs=1e-12)


def test_cutting_plane_single_sensor():
    pl, cost, _ = optimize_cutting_plane(1, Independent(0.37))
    assert pl.positions[0] == pytest.approx(0.5)
    assert cost == pytest.approx(0.37 + 0.63 * 0.5)


def test_cutting_plane_tighter_gap_never_worse():
    model = Independent(0.6)
    costs = [optimize_cutting_plane(6, model, gap_tol=t)[1] for t in (1e-2, 1e-4, 1e-6, 1e-8)]
    assert all(b <= a + 1e-15 for a, b in zip(costs, costs[1:]))


def test_cutting_plane_round_limit():
    with pytest.raises(NoConvergence) as err:
        optimize_cutting_plane(8, Independent(0.4), gap_tol=1e-12, max_rounds=2)
    assert err.value.gap > 0
    assert err.value.placement.n == 8
    assert err.value.cost == pytest.approx(expected_cost(err.value.placement, Independent(0.4)))


def test_cutting_plane_beyond_lp_range():
    # n = 14 is out of LP reach in reasonable time; check against x^eq and
    # against the certified lower bound only
    model = Independent(0.5)
    pl, cost, gap = optimize_cutting_plane(14, model, gap_tol=1e-5)
    assert cost <= expected_cost(equispaced(14), model) + 1e-12
    assert gap <= 1e-5


def test_cortes_lp_small():
    pl, cost = optimize_lp(6, Cortes(2, 6))
    assert expected_cost(pl, Cortes(2, 6)) == pytest.approx(cost, abs=1e-9)
    assert cost <= expected_cost(equispaced(6), Cortes(2, 6)) + 1e-12


def test_segments_helper():
    X = np.array([[0.1], [0.1 + 5e-6], [0.3], [0.3]])
    assert segments(X, 1e-5).tolist() == [0, 0, 1, 1]


def test_sweep_two_sensors_single_transition():
    grid = np.round(np.arange(0.05, 0.951, 0.05), 2)
    res = sweep_p(2, grid, threads=1)
    assert res.placements[0] == pytest.approx([0.25, 0.75], abs=1e-9)
    assert res.placements[-1] == pytest.approx([0.5, 0.5], abs=1e-9)
    # spread shrinks monotonically from equispaced to the cluster
    spread = res.placements[:, 1] - res.placements[:, 0]
    assert np.all(np.diff(spread) <= 1e-12)
    assert np.allclose(res.costs, res.solver_costs, atol=1e-9)


def test_sweep_one_point_and_validation():
    res = sweep_p(3, [0.4])
    assert res.n_segments == 1 and res.breakpoints == ((0.4, 0.4),)
    with pytest.raises(ValueError):
        sweep_p(3, [0.5, 0.4])
    with pytest.raises(ValueError):
        sweep_p(3, [0.0, 0.4])


def test_sweep_thread_count_does_not_change_results():
    grid = np.linspace(0.1, 0.9, 9)
    a = sweep_p(5, grid, threads=1)
    b = sweep_p(5, grid, threads=3)
    assert np.array_equal(a.placements, b.placements)
    assert np.array_equal(a.segment_ids, b.segment_ids)


def test_canonical_rotation():
    assert canonical([0.3, 0.8], "circle").tolist() == pytest.approx([0.0, 0.5])
    assert canonical([0.8, 0.3]).tolist() == [0.3, 0.8]


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_lemma3_chain_and_bounds(n):
    eq = equispaced(n)
    for p in (0.1, 0.3, 0.5, 0.7, 0.9):
        m = Independent(p)
        x_opt, c_opt = optimize_lp(n, m)
        chain = [expected_cost(eq, m, "circle"), expected_cost(x_opt, m, "circle"), c_opt, expected_cost(eq, m)]
        assert all(a <= b + 1e-9 for a, b in zip(chain, chain[1:]))
        assert chain[3] - c_opt <= (2 / n) * p / (1 - p) + 1e-9
        assert chain[3] - chain[0] <= (2 / n) * p / (1 - p) + 1e-9
