import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_connected_graph
from hyperemb.angular import (
    MIN_GAIN,
    OptimizerSchedule,
    angular_order,
    candidate_positions,
    optimize,
    optimize_round,
)
from hyperemb.errors import DegenerateArcError, ParameterError
from hyperemb.geometry import TWO_PI, angular_difference
from hyperemb.graph import Graph
from hyperemb.likelihood import Embedding, PairLossCache, assign_radial_coordinates, logarithmic_loss
from hyperemb.ncmce import ncmce_embed
from hyperemb.params import EpsoParams


def random_instance(seed, n):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, n, float(rng.uniform(0.05, 0.4)))
    p = EpsoParams(n_nodes=n, m=float(rng.uniform(1, 3)), beta=float(rng.uniform(0.3, 0.95)),
                   temperature=float(rng.uniform(0.1, 0.8)))
    emb = assign_radial_coordinates(g, p, tie_seed=int(rng.integers(1 << 30)))
    return g, emb.with_theta(rng.uniform(0, TWO_PI, n))


def cyclic_order(theta):
    o = angular_order(theta)
    k = int(np.argmin(o))
    return np.roll(o, -k)


class TestCandidates:
    def test_uniform_five_rank_one(self):
        theta = TWO_PI * np.arange(5) / 5
        c = candidate_positions(theta, 2, neighbor_rank=1, q=3)
        step = TWO_PI / 5
        np.testing.assert_allclose(c, [theta[2] - step / 2, theta[2], theta[2] + step / 2])
        assert np.all(angular_difference(c, theta[2]) < 2 * step)

    def test_single_candidate_midpoint(self):
        theta = np.array([0.0, 1.0, 3.0, 4.0, 5.0])
        c = candidate_positions(theta, 1, neighbor_rank=1, q=1)
        np.testing.assert_allclose(c, [1.5])

    def test_wraparound(self):
        theta = np.array([6.0, 0.2, 3.0])
        c = candidate_positions(theta, 1, neighbor_rank=1, q=1)
        # arc from 6.0 through 0.2 to 3.0
        mid = (6.0 + ((3.0 - 6.0) % TWO_PI) / 2) % TWO_PI
        np.testing.assert_allclose(c, [mid])

    def test_rank_two_contains_rank_one(self, rng):
        theta = rng.uniform(0, TWO_PI, 9)
        for node in range(9):
            c1 = candidate_positions(theta, node, 1, q=50)
            c2 = candidate_positions(theta, node, 2, q=50)
            o = angular_order(theta)
            pos = int(np.flatnonzero(o == node)[0])
            start = theta[o[(pos - 2) % 9]]
            span2 = (theta[o[(pos + 2) % 9]] - start) % TWO_PI
            assert np.all((c1 - start) % TWO_PI < span2)
            assert np.all((c2 - start) % TWO_PI < span2)

    def test_degenerate(self):
        with pytest.raises(DegenerateArcError):
            candidate_positions(np.array([0.0, 1.0, 2.0, 3.0]), 0, neighbor_rank=2)

    def test_accepts_embedding(self):
        g, emb = random_instance(0, 7)
        np.testing.assert_array_equal(candidate_positions(emb, 3), candidate_positions(emb.theta, 3))


class TestSchedule:
    def test_defaults(self):
        s = OptimizerSchedule()
        assert (s.swap_rounds, s.noswap_rounds, s.q, s.rounds) == (5, 3, 6, 8)

    @pytest.mark.parametrize("kw", [dict(q=0), dict(swap_rounds=-1), dict(stop_rel_tol=-0.1)])
    def test_invalid(self, kw):
        with pytest.raises(ParameterError):
            OptimizerSchedule(**kw)


class TestRounds:
    def test_optimal_node_does_not_move(self):
        # three nodes, node 2 free: put it at the best angle of a fine grid
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        p = EpsoParams(n_nodes=3, m=1.0, beta=0.6, temperature=0.4)
        emb = assign_radial_coordinates(g, p).with_theta([0.0, 2.0, 0.0])
        cache = PairLossCache(g, emb)
        grid = np.linspace(0, TWO_PI, 200001)[:-1]
        best = grid[int(np.argmin(cache.node_loss(2, grid)))]
        emb = emb.with_theta([0.0, 2.0, best])
        cache = PairLossCache(g, emb)
        cand = candidate_positions(emb, 2, neighbor_rank=1, q=6)
        assert np.all(cache.deltas(2, cand) >= -MIN_GAIN)

    def test_zero_temperature(self):
        g, emb = random_instance(1, 8)
        with pytest.raises(ParameterError):
            optimize_round(g, emb.with_params(emb.params.with_(temperature=0.0)), True)

    @given(st.integers(5, 30), st.integers(0, 2**32 - 1), st.booleans())
    def test_round_never_increases_and_keeps_radii(self, n, seed, swapping):
        g, emb = random_instance(seed, n)
        out, stats = optimize_round(g, emb, swapping, q=4)
        assert stats.loss <= logarithmic_loss(g, emb).total + 1e-9
        np.testing.assert_array_equal(out.r, emb.r)
        np.testing.assert_array_equal(out.radial_order, emb.radial_order)
        assert stats.evaluations == 4 * n

    @given(st.integers(3, 30), st.integers(0, 2**32 - 1))
    def test_non_swapping_keeps_cyclic_order(self, n, seed):
        g, emb = random_instance(seed, n)
        out, _ = optimize_round(g, emb, swapping=False, q=6)
        assert np.array_equal(cyclic_order(out.theta), cyclic_order(emb.theta))

    def test_swapping_can_reorder(self):
        changed = False
        for seed in range(20):
            g, emb = random_instance(seed, 12)
            out, _ = optimize_round(g, emb, swapping=True, q=6)
            if not np.array_equal(cyclic_order(out.theta), cyclic_order(emb.theta)):
                changed = True
                break
        assert changed

    def test_tiny_graphs_skip(self):
        g = Graph.from_edges(2, [(0, 1)])
        emb = assign_radial_coordinates(g, EpsoParams(n_nodes=2)).with_theta([0.0, 1.0])
        out, stats = optimize_round(g, emb, True)
        assert stats.accepted == 0 and stats.evaluations == 0
        np.testing.assert_array_equal(out.theta, emb.theta)


class TestOptimize:
    def test_empty_schedule_is_identity(self):
        g, emb = random_instance(2, 10)
        out, trace = optimize(g, emb, OptimizerSchedule(0, 0))
        assert out == emb and trace.rounds == []

    @given(st.integers(5, 25), st.integers(0, 2**32 - 1))
    def test_trace_monotone_and_counts(self, n, seed):
        g, emb = random_instance(seed, n)
        sched = OptimizerSchedule(3, 2, q=5)
        out, trace = optimize(g, emb, sched)
        seq = [trace.initial_loss, *trace.losses]
        assert all(b <= a for a, b in zip(seq, seq[1:]))
        assert trace.evaluations == sched.rounds * n * sched.q
        assert out.meta["rounds"] == 5
        assert trace.losses[-1] == pytest.approx(logarithmic_loss(g, out).total, rel=1e-12)

    def test_early_stop(self):
        g, emb = random_instance(3, 20)
        _, trace = optimize(g, emb, OptimizerSchedule(50, 0, stop_rel_tol=0.5))
        assert len(trace.rounds) == 1

    def test_relative_changes(self):
        g, emb = random_instance(4, 15)
        _, trace = optimize(g, emb, OptimizerSchedule(2, 1))
        rc = trace.relative_changes()
        assert rc.shape == (3,) and np.all(rc >= 0)

    def test_method_label(self):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
        emb = ncmce_embed(g, EpsoParams(n_nodes=6), tie_seed=0)
        out, _ = optimize(g, emb, OptimizerSchedule(1, 1))
        assert out.meta["method"] == "ncmce-opt"
