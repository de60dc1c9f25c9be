"""Seeded sampling of distance-dependent random graphs.

Line model: pair {v, w} is an edge with probability p(|v - w|), independently
per pair.  Circle model: the distance is min(|v - w|, n - |v - w|).  The
midpoint chain grows a line sample by one vertex, keeping edges on the low
side, shifting the high side, and resampling every pair that straddles the
midpoint.

Per-pair randomness comes from a counter-based hash keyed by
(master_seed, stream_id, v, w) in canonical v < w order, so results are
independent of evaluation order and identical across platforms.  A
vectorized batch path produces bit-identical edge indicators for many trials
at once; the estimator uses it for Monte Carlo runs.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph, _graph_unchecked
from .probseq import ProbSeq, support_upto
from .rng import RngStream, keyed_u64_grid, threshold_u64

LINE = "LINE"
CIRCLE = "CIRCLE"


def candidate_pairs(seq: ProbSeq, n: int, model_kind: str = LINE) -> list[tuple[int, int, float]]:
    """All vertex pairs with positive edge probability, canonical v < w.

    Iterates support distances rather than all pairs, so sparse sequences
    cost O(n * |supp|).
    """
    out: list[tuple[int, int, float]] = []
    if n < 2:
        return out
    if model_kind == LINE:
        for d in support_upto(seq, n - 1):
            p = seq.eval(d)
            out.extend((v, v + d, p) for v in range(1, n - d + 1))
    elif model_kind == CIRCLE:
        for d in support_upto(seq, n // 2):
            p = seq.eval(d)
            if 2 * d == n:
                out.extend((v, v + d, p) for v in range(1, n // 2 + 1))
            else:
                for v in range(1, n + 1):
                    w = v + d if v + d <= n else v + d - n
                    a, b = (v, w) if v < w else (w, v)
                    if a < b:
                        out.append((a, b, p))
    else:
        raise ValueError(f"unknown model kind {model_kind!r}")
    if model_kind == CIRCLE:
        out = sorted(set(out))
    return out


def _sample_pairs(pairs: list[tuple[int, int, float]], rng: RngStream) -> list[tuple[int, int]]:
    edges = []
    for v, w, p in pairs:
        if p >= 1.0:
            edges.append((v, w))
        elif p > 0.0 and rng.pair_u64(v, w) < threshold_u64(p):
            edges.append((v, w))
    return edges


def sample_line(seq: ProbSeq, n: int, rng: RngStream) -> Graph:
    """One draw of the line model on [n]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _graph_unchecked(n, _sample_pairs(candidate_pairs(seq, n, LINE), rng))


def sample_circle(seq: ProbSeq, n: int, rng: RngStream) -> Graph:
    """One draw of the circle model on [n]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return _graph_unchecked(n, _sample_pairs(candidate_pairs(seq, n, CIRCLE), rng))


def sample(seq: ProbSeq, n: int, rng: RngStream, model_kind: str = LINE) -> Graph:
    return sample_line(seq, n, rng) if model_kind == LINE else sample_circle(seq, n, rng)


# --- batched trials -----------------------------------------------------------


class PairBatch:
    """Precomputed pair table for one (sequence, n, model) triple."""

    def __init__(self, seq: ProbSeq, n: int, model_kind: str):
        pairs = candidate_pairs(seq, n, model_kind)
        self.n = n
        self.v = np.array([p[0] for p in pairs], dtype=np.uint64)
        self.w = np.array([p[1] for p in pairs], dtype=np.uint64)
        probs = [p[2] for p in pairs]
        self.always = np.array([p >= 1.0 for p in probs], dtype=bool)
        self.thresholds = np.array(
            [threshold_u64(p) if 0.0 < p < 1.0 else 0 for p in probs], dtype=np.uint64
        )
        self.pair_list = [(int(a), int(b)) for a, b, _ in pairs]

    def edge_matrix(self, master_seed: int, stream_ids: np.ndarray) -> np.ndarray:
        """Boolean (trials, pairs) edge indicators, bit-identical to the
        scalar sampler at the same (master_seed, stream_id)."""
        if len(self.pair_list) == 0:
            return np.zeros((len(stream_ids), 0), dtype=bool)
        grid = keyed_u64_grid((master_seed,), stream_ids, self.v, self.w)
        hits = grid < self.thresholds[None, :]
        if self.always.any():
            hits = hits | self.always[None, :]
        return hits

    def graph_from_row(self, row: np.ndarray) -> Graph:
        edges = [self.pair_list[j] for j in np.flatnonzero(row)]
        return _graph_unchecked(self.n, edges)


def sample_batch(
    seq: ProbSeq, n: int, master_seed: int, stream_ids: list[int], model_kind: str = LINE
) -> list[Graph]:
    """Many independent draws at once; equals per-stream scalar sampling."""
    batch = PairBatch(seq, n, model_kind)
    rows = batch.edge_matrix(master_seed, np.array(stream_ids, dtype=np.uint64))
    return [batch.graph_from_row(rows[t]) for t in range(len(stream_ids))]


# --- midpoint growth chain ----------------------------------------------------


def markov_step(g: Graph, seq: ProbSeq, rng: RngStream) -> Graph:
    """Insert a vertex at the midpoint: n -> n+1.

    With mid = floor(n/2), a pair {v, w} (v < w) of the new graph is:
      (i)   kept from {v, w}       when w < mid,
      (ii)  kept from {v-1, w-1}   when v > mid,
      (iii) resampled with p(|v - w|) when v <= mid <= w.
    Resampling draws fresh randomness from ``rng``; old draws are never
    re-read, so callers should hand each step its own stream.
    """
    n = g.n
    if n < 2:
        raise ValueError("midpoint step needs n >= 2")
    mid = n // 2
    edges: list[tuple[int, int]] = []
    for a, b in g.edges:
        if b < mid:
            edges.append((a, b))
        elif a >= mid:
            edges.append((a + 1, b + 1))
        # straddling old pairs are dropped; their successors fall to (iii)
    for d in support_upto(seq, n):
        p = seq.eval(d)
        for v in range(max(1, mid - d), min(mid, n + 1 - d) + 1):
            w = v + d
            if p >= 1.0 or rng.pair_u64(v, w) < threshold_u64(p):
                edges.append((v, w))
    return _graph_unchecked(n + 1, edges)
