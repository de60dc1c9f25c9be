"""Counter-based keyed randomness.

Every random decision in this package is a pure function of a tuple of
64-bit words (master seed, stream id, pair coordinates, ...).  There is no
sequential generator state, so trial-level parallelism and evaluation order
cannot change results, and the same inputs give bit-identical output on any
platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1

_INIT = 0x9E3779B97F4A7C15
_MUL1 = 0xFF51AFD7ED558CCD
_MUL2 = 0xC4CEB9FE1A85EC53

TWO64 = float(2**64)


def mix64(x: int) -> int:
    """Finalizer-style avalanche mix of a 64-bit word."""
    x &= MASK64
    x ^= x >> 33
    x = (x * _MUL1) & MASK64
    x ^= x >> 33
    x = (x * _MUL2) & MASK64
    x ^= x >> 33
    return x


def keyed_u64(*words: int) -> int:
    """Hash a tuple of integers to a uniform 64-bit word."""
    h = _INIT
    for w in words:
        h = mix64(h ^ (w & MASK64))
    return h


def keyed_unit(*words: int) -> float:
    """Hash to a float in [0, 1)."""
    return keyed_u64(*words) / TWO64


def threshold_u64(p: float) -> int:
    """Acceptance threshold for ``keyed_u64(...) < threshold`` to fire with probability p.

    Only meaningful for 0 < p < 1; the exact 0/1 cases must be short-circuited
    by the caller (constructors emit exact 0.0/1.0 floats for them).
    """
    t = int(p * TWO64)
    return max(0, min(t, MASK64))


# --- vectorized mirror -------------------------------------------------------
#
# The numpy path must replicate the scalar chain bit for bit; the sampler
# test-suite asserts equality between the two.

_NP33 = np.uint64(33)
_NP_MUL1 = np.uint64(_MUL1)
_NP_MUL2 = np.uint64(_MUL2)


def mix64_np(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64, copy=True)
    x ^= x >> _NP33
    x *= _NP_MUL1
    x ^= x >> _NP33
    x *= _NP_MUL2
    x ^= x >> _NP33
    return x


def keyed_u64_grid(prefix_words: tuple[int, ...], rows: np.ndarray, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Hash grid: rows absorb per-row words, columns absorb (v, w) pairs.

    Returns a (len(rows), len(v)) uint64 array equal elementwise to
    ``keyed_u64(*prefix_words, rows[i], v[j], w[j])``.
    """
    h = _INIT
    for word in prefix_words:
        h = mix64(h ^ (word & MASK64))
    base = mix64_np(np.uint64(h) ^ rows.astype(np.uint64))  # shape (T,)
    g = mix64_np(base[:, None] ^ v.astype(np.uint64)[None, :])
    g = mix64_np(g ^ w.astype(np.uint64)[None, :])
    return g


@dataclass(frozen=True)
class RngStream:
    """Addressable randomness source: (master_seed, stream_id) name a stream.

    Distinct stream ids give statistically independent streams; concurrent
    consumers must simply use distinct ids.
    """

    master_seed: int
    stream_id: int = 0

    def pair_u64(self, v: int, w: int) -> int:
        return keyed_u64(self.master_seed, self.stream_id, v, w)

    def child(self, *tags: int) -> "RngStream":
        """Derive an independent substream, deterministically."""
        return RngStream(self.master_seed, keyed_u64(self.stream_id, *tags))


def derived_stream(n: int, trial: int) -> int:
    """Stream id used by estimator scans: independent per (n, trial)."""
    return ((n & 0xFFFFFFFF) << 32) | (trial & 0xFFFFFFFF)
