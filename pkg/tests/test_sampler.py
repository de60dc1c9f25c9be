"""Seeded sampling: determinism, marginals, circle distances, midpoint chain."""

import numpy as np
import pytest

from ddgraphs.graph import complete_graph, count_triangles, edgeless_graph, make_graph
from ddgraphs.probseq import make_constant, make_support, make_thm6
from ddgraphs.rng import RngStream, derived_stream, keyed_u64
from ddgraphs.sampler import (
    CIRCLE,
    LINE,
    PairBatch,
    candidate_pairs,
    markov_step,
    sample_batch,
    sample_circle,
    sample_line,
)


class TestLineSampling:
    def test_zero_sequence_gives_edgeless(self):
        g = sample_line(make_constant(0.0), 12, RngStream(5))
        assert g.m == 0

    def test_unit_sequence_gives_complete(self):
        g = sample_line(make_constant(1.0), 6, RngStream(5))
        assert g == complete_graph(6)

    def test_deterministic(self):
        a = sample_line(make_constant(0.5), 30, RngStream(7, 3))
        b = sample_line(make_constant(0.5), 30, RngStream(7, 3))
        assert a == b

    def test_distinct_streams_differ(self):
        a = sample_line(make_constant(0.5), 30, RngStream(7, 0))
        b = sample_line(make_constant(0.5), 30, RngStream(7, 1))
        assert a != b

    def test_sparse_support_only_those_distances(self):
        g = sample_line(make_support({3: 1.0}), 10, RngStream(0))
        assert g.edges == frozenset((v, v + 3) for v in range(1, 8))

    def test_single_vertex(self):
        assert sample_line(make_constant(0.7), 1, RngStream(0)).n == 1

    def test_marginal_frequency(self):
        seq = make_constant(0.5)
        hits = sum(
            sample_line(seq, 4, RngStream(11, t)).has_edge(1, 2) for t in range(10_000)
        )
        assert abs(hits / 10_000 - 0.5) < 0.02


class TestCircleSampling:
    def test_unit_circle_complete(self):
        assert sample_circle(make_constant(1.0), 4, RngStream(1)) == complete_graph(4)

    def test_distance_wraps(self):
        g = sample_circle(make_support({1: 1.0}), 6, RngStream(0))
        want = {(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)}
        assert g.edges == frozenset(want)

    def test_antipodal_pairs_once(self):
        pairs = candidate_pairs(make_support({2: 0.5}), 4, CIRCLE)
        assert [(v, w) for v, w, _ in pairs] == [(1, 3), (2, 4)]

    def test_support_above_half_is_inert(self):
        seq = make_support({10: 1.0})
        assert sample_circle(seq, 12, RngStream(3)).m == 0

    def test_geometric_support_triangle_free_below_alignment(self):
        seq = make_thm6([0.5] * 3)
        for t in range(200):
            g = sample_circle(seq, 17, RngStream(2, t))
            assert all(min(w - v, 17 - (w - v)) == 6 for v, w in g.edges)
            assert count_triangles(g) == 0


class TestBatchSampling:
    @pytest.mark.parametrize("kind", [LINE, CIRCLE])
    def test_batch_matches_scalar(self, kind):
        seq = make_thm6([0.5] * 4)
        n = 20
        streams = [derived_stream(n, t) for t in range(64)]
        batch = sample_batch(seq, n, 9, streams, kind)
        sampler = sample_line if kind == LINE else sample_circle
        for t, g in enumerate(batch):
            assert g == sampler(seq, n, RngStream(9, streams[t]))

    def test_edge_matrix_shape_and_padding(self):
        batch = PairBatch(make_constant(0.0), 8, LINE)
        rows = batch.edge_matrix(0, np.array([1, 2, 3], dtype=np.uint64))
        assert rows.shape == (3, 0)

    def test_always_on_pairs(self):
        batch = PairBatch(make_support({2: 1.0, 3: 0.5}), 8, LINE)
        rows = batch.edge_matrix(0, np.array([0], dtype=np.uint64))
        g = batch.graph_from_row(rows[0])
        assert all(g.has_edge(v, v + 2) for v in range(1, 7))


class TestMarkovStep:
    def test_edgeless_stays_edgeless(self):
        g = markov_step(edgeless_graph(6), make_constant(0.0), RngStream(0))
        assert g.n == 7 and g.m == 0

    def test_straddling_edge_is_resampled_away(self):
        # pair {1,2} at n=4 has its right end at mid = 2, so it falls to the
        # resampling clause and vanishes under the zero sequence
        g = make_graph(4, [(1, 2)])
        out = markov_step(g, make_constant(0.0), RngStream(0))
        assert out.m == 0

    def test_low_side_kept(self):
        g = make_graph(7, [(1, 2)])  # mid = 3, pair entirely below
        out = markov_step(g, make_constant(0.0), RngStream(0))
        assert out.has_edge(1, 2)

    def test_high_side_shifted(self):
        g = make_graph(7, [(5, 7)])  # above mid = 3, shifts by one
        out = markov_step(g, make_constant(0.0), RngStream(0))
        assert out.edges == frozenset({(6, 8)})

    def test_unit_sequence_fills_straddle(self):
        g = edgeless_graph(4)
        out = markov_step(g, make_constant(1.0), RngStream(0))
        # every pair with v <= 2 <= w appears; nothing else did
        want = {(v, w) for v in range(1, 6) for w in range(v + 1, 6) if v <= 2 <= w}
        assert out.edges == frozenset(want)

    def test_needs_two_vertices(self):
        with pytest.raises(ValueError):
            markov_step(edgeless_graph(1), make_constant(0.5), RngStream(0))

    def naive_step(self, g, seq, rng):
        # direct transcription of the three clauses over all pairs; consumes
        # the same keyed randomness, so it must agree exactly
        from ddgraphs.rng import threshold_u64

        n, mid = g.n, g.n // 2
        edges = []
        for v in range(1, n + 2):
            for w in range(v + 1, n + 2):
                if w < mid:
                    if g.has_edge(v, w):
                        edges.append((v, w))
                elif v > mid:
                    if g.has_edge(v - 1, w - 1):
                        edges.append((v, w))
                else:
                    p = seq.eval(w - v)
                    if p >= 1.0 or (p > 0.0 and rng.pair_u64(v, w) < threshold_u64(p)):
                        edges.append((v, w))
        return make_graph(n + 1, edges)

    def test_matches_naive_reference(self):
        for seq in (make_constant(0.5), make_support({1: 0.3, 4: 0.9}), make_constant(0.0)):
            for t in range(40):
                g = sample_line(make_constant(0.4), 9, RngStream(5, t))
                rng = RngStream(8, t)
                assert markov_step(g, seq, rng) == self.naive_step(g, seq, rng)

    def test_triangle_count_distribution_close_to_direct(self):
        seq = make_constant(0.5)
        trials = 20_000
        from collections import Counter

        chain: Counter = Counter()
        for t, g in enumerate(sample_batch(seq, 5, 3, [keyed_u64(1, t) for t in range(trials)])):
            chain[count_triangles(markov_step(g, seq, RngStream(3, keyed_u64(2, t))))] += 1
        direct: Counter = Counter()
        for g in sample_batch(seq, 6, 3, [keyed_u64(4, t) for t in range(trials)]):
            direct[count_triangles(g)] += 1
        keys = set(chain) | set(direct)
        tv = 0.5 * sum(abs(chain[k] - direct[k]) / trials for k in keys)
        assert tv <= 0.05
