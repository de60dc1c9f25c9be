"""Probability estimation for sentence/predicate events on sampled graphs.

Three routes, deliberately independent of each other:

* ``mc_probability`` - seeded Monte Carlo with Wilson score intervals,
* ``exact_path2`` / ``exact_triangle_circle`` - closed forms valid under
  verified structural conditions,
* ``brute_force_probability`` - exhaustive enumeration over the free edge
  set for tiny instances (the oracle the other two are checked against).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Callable, Sequence

import numpy as np

from .graph import Graph, _graph_unchecked, circular_distance
from .logic import Formula, LabeledModel, holds
from .probseq import ProbSeq, support_upto
from .rng import derived_stream
from .sampler import LINE, PairBatch

Target = Formula | Callable[[Graph], bool]


class EstimatorError(ValueError):
    pass


class BruteForceGuardError(EstimatorError):
    """Enumerated edge set too large for exhaustive summation."""


class OracleValidityError(EstimatorError):
    """Closed form not applicable; fall back to brute force or Monte Carlo."""


@dataclass(frozen=True)
class EstimateResult:
    """Point estimate with confidence interval and reproducibility data.

    Exact-oracle results carry trials = 0 and a degenerate interval.
    """

    estimate: float
    ci_low: float
    ci_high: float
    trials: int
    master_seed: int
    target: str
    n: int
    model_kind: str = LINE

    def __post_init__(self):
        if not 0.0 <= self.ci_low <= self.estimate <= self.ci_high <= 1.0:
            raise EstimatorError(
                f"interval violation: {self.ci_low} <= {self.estimate} <= {self.ci_high}"
            )


def wilson_ci(successes: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    """Wilson score interval; exact at the 0/1 boundaries, unlike Wald."""
    if trials <= 0:
        raise EstimatorError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise EstimatorError("successes must lie in [0, trials]")
    z = NormalDist().inv_cdf(1.0 - (1.0 - level) / 2.0)
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = phat + z * z / (2.0 * trials)
    margin = z * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials))
    low = max(0.0, (center - margin) / denom)
    high = min(1.0, (center + margin) / denom)
    return min(low, phat), max(high, phat)


def _target_name(target: Target) -> str:
    if isinstance(target, Formula):
        return target.name
    return getattr(target, "target_name", getattr(target, "__name__", "predicate"))


def _evaluator(target: Target, model_kind: str) -> Callable[[Graph], bool]:
    if isinstance(target, Formula):
        vocab = target.vocab
        return lambda g: holds(LabeledModel(g, vocab), target)
    return target


def mc_probability(
    seq: ProbSeq,
    n: int,
    target: Target,
    model_kind: str,
    trials: int,
    master_seed: int,
    level: float = 0.95,
    stream_for_trial: Callable[[int], int] | None = None,
    chunk: int = 4096,
) -> EstimateResult:
    """Monte Carlo estimate of P(n; target) over independent seeded samples.

    Trial t draws its graph from stream ``stream_for_trial(t)`` (default
    ``derived_stream(n, t)``), so results are independent of evaluation
    order and parallel scheduling.
    """
    if trials < 1:
        raise EstimatorError("trials must be >= 1")
    stream_of = stream_for_trial or (lambda t: derived_stream(n, t))
    check = _evaluator(target, model_kind)
    batch = PairBatch(seq, n, model_kind)
    successes = 0
    for start in range(0, trials, chunk):
        ids = np.array([stream_of(t) for t in range(start, min(start + chunk, trials))],
                       dtype=np.uint64)
        rows = batch.edge_matrix(master_seed, ids)
        for r in range(rows.shape[0]):
            if check(batch.graph_from_row(rows[r])):
                successes += 1
    low, high = wilson_ci(successes, trials, level)
    return EstimateResult(
        estimate=successes / trials,
        ci_low=low,
        ci_high=high,
        trials=trials,
        master_seed=master_seed,
        target=_target_name(target),
        n=n,
        model_kind=model_kind,
    )


def exact_path2(seq: ProbSeq, n: int) -> float:
    """P(endpoints 1 and n joined by a two-edge path), in closed form.

    The n-2 candidate midpoints use pairwise distinct edge pairs, so the
    non-existence probabilities multiply:
    P = 1 - prod_{v=2}^{n-1} (1 - p(v-1) p(n-v)), accumulated in log space.
    """
    if n < 3:
        raise EstimatorError("needs n >= 3")
    log_miss = 0.0
    for v in range(2, n):
        q = seq.eval(v - 1) * seq.eval(n - v)
        if q >= 1.0:
            return 1.0
        log_miss += math.log1p(-q)
    return -math.expm1(log_miss) + 0.0  # normalize -0.0


def _circle_triangle_candidates(seq: ProbSeq, n: int) -> set[frozenset[int]]:
    """All vertex triples whose three circular distances have positive
    probability.  Enumerates support-distance steps, O(n |supp|^2)."""
    supp = support_upto(seq, n // 2) if n >= 2 else []
    supp_set = set(supp)
    found: set[frozenset[int]] = set()
    for d1 in supp:
        for d2 in supp:
            for v in range(1, n + 1):
                a = (v + d1 - 1) % n + 1
                b = (a + d2 - 1) % n + 1
                if len({v, a, b}) < 3:
                    continue
                if circular_distance(v, b, n) in supp_set:
                    found.add(frozenset((v, a, b)))
    return found


def exact_triangle_circle(seq: ProbSeq, n: int) -> float:
    """P(circle model on [n] contains a triangle), in closed form.

    Valid only when the positive-probability triangles are exactly the
    edge-disjoint family {v, v+n/3, v+2n/3}; a verifier enumerates all
    candidate triples and raises OracleValidityError otherwise.  With an
    empty candidate set the probability is exactly 0.
    """
    if n < 3:
        raise EstimatorError("needs n >= 3")
    candidates = _circle_triangle_candidates(seq, n)
    if not candidates:
        return 0.0
    if n % 3 != 0:
        raise OracleValidityError(
            f"{len(candidates)} candidate triangles at n={n} with 3 not dividing n"
        )
    step = n // 3
    mono = {frozenset((v, (v + step - 1) % n + 1, (v + 2 * step - 1) % n + 1)) for v in range(1, n + 1)}
    if candidates != mono:
        raise OracleValidityError(
            f"candidate triangles at n={n} are not the {n // 3} aligned triples "
            f"({len(candidates)} candidates)"
        )
    p = seq.eval(step)
    if p <= 0.0:
        return 0.0
    # the aligned triples partition their edges, so counts are binomial
    per_triangle = p**3
    return -math.expm1((n // 3) * math.log1p(-per_triangle))


def brute_force_probability(seq: ProbSeq, n: int, target: Target, model_kind: str) -> float:
    """Exact probability by enumerating the free edge subsets.

    Pairs with p = 0 are fixed absent and p = 1 fixed present; enumeration
    is over the remaining pairs and guarded at 2^21 subsets.
    """
    dist = (lambda v, w: w - v) if model_kind == LINE else (lambda v, w: circular_distance(v, w, n))
    fixed: list[tuple[int, int]] = []
    free: list[tuple[int, int, float]] = []
    for v in range(1, n + 1):
        for w in range(v + 1, n + 1):
            p = seq.eval(dist(v, w))
            if p >= 1.0:
                fixed.append((v, w))
            elif p > 0.0:
                free.append((v, w, p))
    if 2 ** len(free) > 2**21:
        raise BruteForceGuardError(f"{len(free)} free pairs is beyond the 2^21 subset guard")
    check = _evaluator(target, model_kind)
    total = 0.0
    edges = list(fixed)

    def recurse(idx: int, weight: float):
        nonlocal total
        if idx == len(free):
            if check(_graph_unchecked(n, edges)):
                total += weight
            return
        v, w, p = free[idx]
        edges.append((v, w))
        recurse(idx + 1, weight * p)
        edges.pop()
        recurse(idx + 1, weight * (1.0 - p))

    recurse(0, 1.0)
    return total


def exact_result(
    estimate: float, n: int, target: str, model_kind: str, master_seed: int = 0
) -> EstimateResult:
    """Wrap an oracle value in the common result record (trials = 0)."""
    return EstimateResult(
        estimate=estimate,
        ci_low=estimate,
        ci_high=estimate,
        trials=0,
        master_seed=master_seed,
        target=target,
        n=n,
        model_kind=model_kind,
    )


def scan(
    seq: ProbSeq,
    target: Target,
    model_kind: str,
    n_list: Sequence[int],
    trials: int,
    master_seed: int,
) -> list[EstimateResult]:
    """One Monte Carlo estimate per n; streams are independent per (n, trial)."""
    if not n_list:
        raise EstimatorError("n_list must be nonempty")
    return [
        mc_probability(seq, n, target, model_kind, trials, master_seed)
        for n in n_list
    ]


CSV_HEADER = "n,estimate,ci_low,ci_high,trials,master_seed,target,model_kind"


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def results_to_csv(results: Sequence[EstimateResult]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in results:
        buf.write(
            f"{r.n},{_fmt(r.estimate)},{_fmt(r.ci_low)},{_fmt(r.ci_high)},"
            f"{r.trials},{r.master_seed},{r.target},{r.model_kind}\n"
        )
    return buf.getvalue()
