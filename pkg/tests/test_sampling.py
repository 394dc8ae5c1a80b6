import math
import statistics

import numpy as np
import pytest

from khcore.decomp import PeelState, initial_h_degrees, peel_khcore
from khcore.graph import h_bfs
from khcore.oracle import brute_h_degree, brute_h_neighborhood
from khcore.sampling import (
    SampleState,
    SamplingParameterError,
    draw_sample,
    init_sample,
    peel_sample,
    sample_size,
    update_nbr_sample,
)
from khcore.decomp import set_lost_counts

from conftest import clique, er, vid


def test_sample_size_rounding():
    assert sample_size(10, 0.3) == 3
    assert sample_size(10, 0.25) == 3  # half rounds up
    assert sample_size(10, 1.0) == 10
    assert sample_size(7, 0.01) == 0


def test_draw_sample_properties():
    s = draw_sample(100, 30, 42)
    assert len(set(s.tolist())) == 30 and s.min() >= 0 and s.max() < 100
    assert np.array_equal(s, draw_sample(100, 30, 42))
    assert not np.array_equal(s, draw_sample(100, 30, 43))
    assert draw_sample(5, 5, 0).tolist() == [0, 1, 2, 3, 4]


def test_rate_validation(running):
    for r in (0.0, -0.1, 1.5, float("nan")):
        with pytest.raises(SamplingParameterError):
            init_sample(running, 2, r, 0)


def test_full_rate_is_exact(running):
    s = init_sample(running, 2, 1.0, 7)
    assert s.sample == list(range(14))
    assert s.rate == [1.0] * 14
    assert s.est_hdeg == [float(d) for d in initial_h_degrees(running, 2)]


def test_running_example_via_full_rate(running):
    assert peel_sample(running, 2, 1.0, 3).core.tolist() == [4, 4, 4, 5, 5, 5, 5, 6, 6, 6, 6, 6, 6, 6]


def test_estimate_arithmetic():
    # rates 9/30, 9/20, 5/20 and post-removal selects 6, 8, 7
    s = SampleState(0.5, 0, bytearray(3), [6, 8, 7], [0.3, 0.45, 0.25], [0.0] * 3, bytearray(3), [9, 9, 5], [30, 20, 20])
    est = [s.estimate(v) for v in range(3)]
    assert est[0] == 20.0
    assert math.isclose(est[1], 8 / 0.45) and math.floor(est[1]) == 17
    assert est[2] == 28.0
    for v in range(3):
        assert math.isclose(est[v], s.select[v] / s.rate[v])


@pytest.mark.parametrize("seed", range(5))
def test_select_matches_brute_at_init(seed):
    g = er(50, 0.2, seed)
    s = init_sample(g, 2, 0.5, seed)
    S = set(s.sample)
    assert len(S) == 25
    for v in range(50):
        sel = len(brute_h_neighborhood(g, None, v, 2) & S)
        assert s.select[v] == sel
        d = brute_h_degree(g, None, v, 2)
        assert s.rate[v] == (sel / d if sel else 0.0)
        assert 0.0 <= s.rate[v] <= 1.0


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("h", [2, 3])
def test_select_tracks_deletions(seed, h):
    g = er(40, 0.1, seed)
    s = init_sample(g, h, 0.5, seed)
    state = PeelState(g, h, hdeg=list(s.est_hdeg))
    S = set(s.sample)
    order = list(range(40))
    np.random.default_rng(seed).shuffle(order)
    for v in order[:25]:
        nbh = state.neighborhood(v)
        state.alive.kill(v)
        update_nbr_sample(state, s, v, nbh)
        alive = set(state.alive.alive_vertices())
        for u in alive:
            nb = brute_h_neighborhood(g, alive, u, h)
            if s.exact[u]:
                assert s.est_hdeg[u] == len(nb)
            else:
                assert s.select[u] == len(nb & S)
                assert math.isclose(s.est_hdeg[u], s.select[u] / s.rate[u])


@pytest.mark.parametrize("seed", range(6))
def test_full_rate_counts_match_exact_losses(seed):
    g = er(40, 0.12, seed)
    s = init_sample(g, 3, 1.0, seed)
    state = PeelState(g, 3, hdeg=list(s.est_hdeg))
    for v in range(40):
        nbh = state.neighborhood(v)
        state.alive.kill(v)
        exact = set_lost_counts(g, state.alive, 3, nbh)
        assert update_nbr_sample(state, s, v, nbh).lost == exact


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("h", [1, 2, 3, 4])
def test_degeneration(seed, h):
    g = er(45, 0.1, seed)
    assert np.array_equal(peel_sample(g, h, 1.0, seed).core, peel_khcore(g, h, fast_h1=False).core)


def test_determinism_and_meta():
    g = er(60, 0.08, 1)
    a = peel_sample(g, 2, 0.3, 99)
    b = peel_sample(g, 2, 0.3, 99)
    assert np.array_equal(a.core, b.core)
    assert a.meta == {"rate": 0.3, "seed": 99}


def test_unbiased_at_init():
    g = er(40, 0.1, 3)
    r = 0.25  # r * n is an integer, so E[select] = r * d exactly
    degs = initial_h_degrees(g, 2)
    draws = [init_sample(g, 2, r, seed, hdeg=degs).select for seed in range(300)]
    for v in (0, 7, 19, 33):
        xs = [d[v] / r for d in draws]
        se = statistics.stdev(xs) / math.sqrt(len(xs))
        assert abs(statistics.mean(xs) - degs[v]) <= 3 * se + 1e-9


def test_clique_any_rate():
    g = clique(20)
    for seed in range(5):
        assert peel_sample(g, 2, 0.3, seed).core.tolist() == [19] * 20


def test_zero_rate_vertices_exact(running):
    # a tiny sample leaves many vertices without a sampled h-neighbor
    s = init_sample(running, 1, 0.08, 5)
    assert any(s.exact)
    res = peel_sample(running, 1, 0.08, 5)
    assert res.core.min() >= 0
