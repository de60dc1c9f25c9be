"""Edge-probability sequences indexed by vertex distance.

A ``ProbSeq`` is a finitely described infinite sequence p(1), p(2), ... of
values in [0, 1].  It is stored as an ordered list of matcher rules (single
index, bounded band with a per-index formula, open tail, generated index
set); the first matching rule wins and unmatched indices evaluate to 0.

Constructors cover the sequence families used throughout the experiments:
constant sequences, two-band decay sequences, disjoint 1/m bands, sparse
power-law supports, recursively spaced supports, geometric supports, fair
random {0,1} sequences, deterministic power supports, and dilution.
Growth parameters are caller-supplied at desk scale; preconditions that the
asymptotic arguments rely on are downgraded to warnings where a smaller
choice still yields a well-defined sequence.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .rng import keyed_u64

MAX_INDEX = 2**63 - 1  # all index arithmetic stays within 64-bit signed range

_RAND_TAG = 0x52414E44  # stream tag for seeded {0,1} sequences


class SequenceError(ValueError):
    """Invalid construction parameters."""


class RuleOverlapError(SequenceError):
    """Two matchers overlap with conflicting values."""


class IndexBudgetError(SequenceError):
    """A support index would exceed the 64-bit budget."""

    def __init__(self, term: str, i: int, message: str | None = None):
        self.term = term
        self.i = i
        super().__init__(message or f"{term} at i={i} exceeds the 64-bit index budget")


class ScaleWarning(UserWarning):
    """A desk-scale parameter violates a precondition the asymptotic argument uses."""


# --- matcher rules -----------------------------------------------------------


@dataclass(frozen=True)
class IndexRule:
    index: int
    value: float

    def matches(self, i: int) -> bool:
        return i == self.index

    def value_at(self, i: int) -> float:
        return self.value

    def indices_upto(self, n: int) -> Iterable[int]:
        return (self.index,) if self.index <= n else ()


@dataclass(frozen=True)
class BandRule:
    """Closed interval [lo, hi] with a per-index value formula."""

    lo: int
    hi: int
    fn: Callable[[int], float]

    def matches(self, i: int) -> bool:
        return self.lo <= i <= self.hi

    def value_at(self, i: int) -> float:
        return self.fn(i)

    def indices_upto(self, n: int) -> Iterable[int]:
        return range(self.lo, min(self.hi, n) + 1)


@dataclass(frozen=True)
class TailRule:
    """Open tail [lo, inf) with a per-index value formula."""

    lo: int
    fn: Callable[[int], float]

    def matches(self, i: int) -> bool:
        return i >= self.lo

    def value_at(self, i: int) -> float:
        return self.fn(i)

    def indices_upto(self, n: int) -> Iterable[int]:
        return range(self.lo, n + 1)


@dataclass(frozen=True)
class GeneratedRule:
    """Index set given by a stored integer generator (membership + enumerator)."""

    member: Callable[[int], bool]
    upto: Callable[[int], list[int]]
    fn: Callable[[int], float]

    def matches(self, i: int) -> bool:
        return self.member(i)

    def value_at(self, i: int) -> float:
        return self.fn(i)

    def indices_upto(self, n: int) -> Iterable[int]:
        return self.upto(n)


Rule = IndexRule | BandRule | TailRule | GeneratedRule


def _check_overlaps(rules: Sequence[Rule], probe_cap: int = 256) -> None:
    """Reject matcher sets that overlap with conflicting values.

    Overlap detection probes a bounded set of indices per rule pair (finite
    rules are probed exactly up to the cap); the constructors in this module
    only build pairwise-disjoint matchers, so the probe is a safety net for
    hand-assembled rule lists.
    """
    probes: list[set[int]] = []
    for r in rules:
        if isinstance(r, IndexRule):
            probes.append({r.index})
        elif isinstance(r, BandRule):
            pts = set(range(r.lo, min(r.hi, r.lo + probe_cap) + 1))
            pts.add(r.hi)
            probes.append(pts)
        elif isinstance(r, TailRule):
            probes.append(set(range(r.lo, r.lo + probe_cap)))
        else:
            probes.append(set(r.upto(probe_cap * 16)))
    for a in range(len(rules)):
        for b in range(a + 1, len(rules)):
            for i in sorted(probes[a] | probes[b]):
                if rules[a].matches(i) and rules[b].matches(i):
                    va, vb = rules[a].value_at(i), rules[b].value_at(i)
                    if va != vb:
                        raise RuleOverlapError(
                            f"rules {a} and {b} both match i={i} with values {va} != {vb}"
                        )


@dataclass(frozen=True, eq=False)
class ProbSeq:
    """Immutable distance-indexed probability sequence.

    ``kind`` and ``params`` record the constructor call for JSON round-trips;
    ``meta`` retains named integer lists (growth lists, supports, clamps) so
    experiment predicates can read them back.
    """

    rules: tuple[Rule, ...]
    kind: str = "custom"
    params: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        _check_overlaps(self.rules)

    def eval(self, i: int) -> float:
        """p(i) for i >= 1; 0 when no rule matches."""
        if i < 1:
            raise ValueError(f"index must be >= 1, got {i}")
        for r in self.rules:
            if r.matches(i):
                v = r.value_at(i)
                if not 0.0 <= v <= 1.0:
                    raise SequenceError(f"rule produced {v} outside [0,1] at i={i}")
                return v
        return 0.0

    def __call__(self, i: int) -> float:
        return self.eval(i)

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params, "meta": self.meta}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def eval_seq(seq: ProbSeq, i: int) -> float:
    return seq.eval(i)


# --- constructors ------------------------------------------------------------


def make_constant(p: float) -> ProbSeq:
    """p(i) = p for every i."""
    if not 0.0 <= p <= 1.0:
        raise SequenceError(f"probability {p} outside [0,1]")
    p = float(p)
    return ProbSeq(
        rules=(TailRule(1, lambda i, _p=p: _p),),
        kind="constant",
        params={"p": p},
    )


def make_support(pairs: dict[int, float]) -> ProbSeq:
    """Explicit finite support: p(i) = pairs[i], zero elsewhere."""
    rules = []
    for i in sorted(pairs):
        v = float(pairs[i])
        if i < 1:
            raise SequenceError(f"support index {i} must be >= 1")
        if not 0.0 <= v <= 1.0:
            raise SequenceError(f"probability {v} outside [0,1] at i={i}")
        rules.append(IndexRule(i, v))
    return ProbSeq(
        rules=tuple(rules),
        kind="support",
        params={"pairs": {str(i): float(pairs[i]) for i in sorted(pairs)}},
        meta={"support": sorted(pairs)},
    )


def make_thm1(k: int, b: Sequence[int]) -> ProbSeq:
    """Decay-band sequence: 1/2 head, 1/(3ik) bands, zero gaps.

    p(i) = 1/2 for i <= b(1); 1/(3ik) for b(2m-1) < i <= b(2m); else 0,
    with b = (b(1), b(2), ...) strictly increasing.
    """
    if k < 1:
        raise SequenceError("k must be a positive integer")
    b = [int(x) for x in b]
    if not b or any(x < 1 for x in b):
        raise SequenceError("b must be a nonempty list of positive integers")
    if any(b[j] >= b[j + 1] for j in range(len(b) - 1)):
        raise SequenceError(f"b must be strictly increasing, got {b}")
    if b[0] <= 6 * k:
        warnings.warn(
            f"b(1)={b[0]} <= 6k={6 * k}: smaller than the asymptotic argument assumes",
            ScaleWarning,
            stacklevel=2,
        )
    rules: list[Rule] = [BandRule(1, b[0], lambda i: 0.5)]
    for m in range(1, (len(b) + 1) // 2 + 1):
        lo_idx, hi_idx = 2 * m - 2, 2 * m - 1  # b(2m-1), b(2m) as 0-based slots
        if hi_idx >= len(b):
            break
        rules.append(BandRule(b[lo_idx] + 1, b[hi_idx], lambda i, _k=k: 1.0 / (3.0 * i * _k)))
    return ProbSeq(
        rules=tuple(rules),
        kind="thm1",
        params={"k": k, "b": b},
        meta={"k": k, "b": b},
    )


def make_thm2(f: Sequence[int]) -> ProbSeq:
    """Disjoint 1/m bands: p(i) = 1/m on [f(m)-m^3, f(m)] for m = 2, 3, ...

    ``f[j]`` is f(m) for m = j+2.  Bands must be disjoint:
    f(m) - m^3 > f(m-1).
    """
    f = [int(x) for x in f]
    if not f:
        raise SequenceError("f must be nonempty")
    rules: list[Rule] = []
    prev_top: int | None = None
    for j, top in enumerate(f):
        m = j + 2
        lo = max(1, top - m**3)
        if prev_top is not None and top - m**3 <= prev_top:
            raise RuleOverlapError(
                f"band for m={m} ([{top - m ** 3}, {top}]) overlaps previous top f({m - 1})={prev_top}"
            )
        rules.append(BandRule(lo, top, lambda i, _m=m: 1.0 / _m))
        prev_top = top
    return ProbSeq(rules=tuple(rules), kind="thm2", params={"f": f}, meta={"f": f, "m_start": 2})


def make_example2(b: Sequence[int], f: Sequence[int], b0: int = 0) -> ProbSeq:
    """Sparse power-law support: p(f(i)) = a(i) with alternating exponents.

    a(i) = i^-0.2 on (b(2j), b(2j+1)] and i^-0.95 on (b(2j+1), b(2j+2)],
    reading b(0) = ``b0``.  Support indices whose a(i) falls outside (0, 1)
    are dropped and recorded in ``meta['excluded']`` (i = 1 always is, since
    1^-0.2 = 1 is not a valid edge probability here).
    """
    b = [int(x) for x in b]
    f = [int(x) for x in f]
    if any(b[j] >= b[j + 1] for j in range(len(b) - 1)) or (b and b0 >= b[0]):
        raise SequenceError(f"b must be strictly increasing above b0, got b0={b0}, b={b}")
    if any(f[j] >= f[j + 1] for j in range(len(f) - 1)):
        raise SequenceError(f"f must be strictly increasing, got {f}")
    running = 0
    for j, fi in enumerate(f):
        if j >= 1 and fi <= 10 * running:
            warnings.warn(
                f"f({j + 1})={fi} <= 10 * sum of earlier terms ({running}): spacing below "
                "what the oscillation argument assumes",
                ScaleWarning,
                stacklevel=2,
            )
        running += fi

    bounds = [b0] + b

    def a_of(i: int) -> float | None:
        for j in range(len(bounds) - 1):
            if bounds[j] < i <= bounds[j + 1]:
                return float(i) ** (-0.2 if j % 2 == 0 else -0.95)
        return None

    rules: list[Rule] = []
    excluded: list[int] = []
    support: list[int] = []
    for j, fi in enumerate(f):
        i = j + 1
        a = a_of(i)
        if a is None or not 0.0 < a < 1.0:
            excluded.append(i)
            continue
        rules.append(IndexRule(fi, a))
        support.append(fi)
    return ProbSeq(
        rules=tuple(rules),
        kind="example2",
        params={"b": b, "f": f, "b0": b0},
        meta={"b": b, "f": f, "b0": b0, "support": support, "excluded": excluded},
    )


def _eq5_supports(a: list[float]) -> list[int]:
    """Recursive support spacing: f(1)=1 and
    f(i) = ceil(max{(i+1)/a(i+1), 4i f(i-1) [1-max a(j), j<=i-1]^{-f(i-1)^2}}).

    Stops cleanly when the a-list runs out; raises IndexBudgetError when a
    term leaves the 64-bit range (the recursion explodes very fast).
    """
    fs = [1]
    i = 2
    while i + 1 <= len(a):
        f_prev = fs[-1]
        amax = max(a[:i - 1])  # a(1)..a(i-1)
        log_term = math.log(4.0 * i * f_prev) - (f_prev**2) * math.log1p(-amax)
        if log_term > math.log(MAX_INDEX):
            raise IndexBudgetError("f", i)
        term1 = (i + 1) / a[i]  # a(i+1), 0-based
        term2 = 4.0 * i * f_prev * (1.0 - amax) ** (-(f_prev**2))
        fi = math.ceil(max(term1, term2))
        if fi > MAX_INDEX:
            raise IndexBudgetError("f", i)
        fs.append(fi)
        i += 1
    return fs


def make_thm3(a: Sequence[float], f: Sequence[int] | str) -> ProbSeq:
    """Recursively spaced support: p(f(i)) = a(i).

    ``f`` is an explicit support list (f(1), f(2), ...), or the string
    ``"eq5"`` to derive it from the recursion above; derived mode stops with
    IndexBudgetError as soon as a term exceeds 64 bits, because the middle
    factor grows like (1-a)^{-f^2}.
    """
    a = [float(x) for x in a]
    if any(not 0.0 < x < 1.0 for x in a):
        raise SequenceError("all a(i) must lie strictly within (0,1)")
    if isinstance(f, str):
        if f != "eq5":
            raise SequenceError(f"unknown f mode {f!r}")
        fs = _eq5_supports(a)
        mode = "eq5"
    else:
        fs = [int(x) for x in f]
        if any(fs[j] >= fs[j + 1] for j in range(len(fs) - 1)):
            raise SequenceError(f"f must be strictly increasing, got {fs}")
        if any(x > MAX_INDEX for x in fs):
            raise IndexBudgetError("f", fs.index(next(x for x in fs if x > MAX_INDEX)) + 1)
        mode = "explicit"
    pairs = list(zip(fs, a))
    rules = tuple(IndexRule(fi, ai) for fi, ai in pairs)
    return ProbSeq(
        rules=rules,
        kind="thm3",
        params={"a": a[: len(fs)], "f": fs, "mode": mode},
        meta={"a_values": [ai for _, ai in pairs], "f": fs},
    )


def make_thm6(a: Sequence[float]) -> ProbSeq:
    """Geometric support: p(floor(3^i / a(i))) = a(i)."""
    a = [float(x) for x in a]
    if any(not 0.0 < x < 1.0 for x in a):
        raise SequenceError("all a(i) must lie strictly within (0,1)")
    if any(a[j] < a[j + 1] for j in range(len(a) - 1)):
        warnings.warn("a is not non-increasing", ScaleWarning, stacklevel=2)
    rules: list[Rule] = []
    support: list[int] = []
    power = 3
    for j, ai in enumerate(a):
        idx = int(power / ai)
        if idx > MAX_INDEX or power > MAX_INDEX:
            raise IndexBudgetError("floor(3^i/a(i))", j + 1)
        rules.append(IndexRule(idx, ai))
        support.append(idx)
        power *= 3
    return ProbSeq(
        rules=tuple(rules),
        kind="thm6",
        params={"a": a},
        meta={"support": support},
    )


def make_random_binary(seed: int) -> ProbSeq:
    """Fair {0,1}-valued sequence, reproducible from the seed alone.

    Each p(i) is the low bit of a keyed hash of (seed, i): an independent
    fair coin per index with no storage.
    """
    seed = int(seed)

    def bit(i: int, _s=seed) -> float:
        return float(keyed_u64(_s, _RAND_TAG, i) & 1)

    return ProbSeq(
        rules=(TailRule(1, bit),),
        kind="random_binary",
        params={"seed": seed},
        seed=seed,
    )


def make_ones_powers(base: int) -> ProbSeq:
    """p(i) = 1 exactly at i = base^j (j = 0, 1, ...), else 0."""
    if base < 2:
        raise SequenceError("base must be >= 2")
    base = int(base)

    def is_power(i: int, _b=base) -> bool:
        if i < 1:
            return False
        while i % _b == 0:
            i //= _b
        return i == 1

    def powers_upto(n: int, _b=base) -> list[int]:
        out, p = [], 1
        while p <= n:
            out.append(p)
            p *= _b
        return out

    return ProbSeq(
        rules=(GeneratedRule(is_power, powers_upto, lambda i: 1.0),),
        kind="ones_powers",
        params={"base": base},
    )


def make_diluted(a: Sequence[float], gap: Sequence[int]) -> ProbSeq:
    """Insert zero runs: a(i) lands at position 1 + sum_{j<=i} (1 + gap(j))."""
    a = [float(x) for x in a]
    gap = [int(x) for x in gap]
    if len(gap) != len(a):
        raise SequenceError("a and gap must have equal length")
    if any(g < 0 for g in gap):
        raise SequenceError("gaps must be non-negative")
    if any(not 0.0 <= x <= 1.0 for x in a):
        raise SequenceError("all a(i) must lie in [0,1]")
    rules: list[Rule] = []
    positions: list[int] = []
    pos = 1
    for i, (ai, gi) in enumerate(zip(a, gap), start=1):
        pos += 1 + gi
        if pos > MAX_INDEX:
            raise IndexBudgetError("position", i)
        rules.append(IndexRule(pos, ai))
        positions.append(pos)
    return ProbSeq(
        rules=tuple(rules),
        kind="diluted",
        params={"a": a, "gap": gap},
        meta={"positions": positions},
    )


_CONSTRUCTORS = {
    "constant": lambda p: make_constant(p["p"]),
    "support": lambda p: make_support({int(k): v for k, v in p["pairs"].items()}),
    "thm1": lambda p: make_thm1(p["k"], p["b"]),
    "thm2": lambda p: make_thm2(p["f"]),
    "example2": lambda p: make_example2(p["b"], p["f"], p.get("b0", 0)),
    "thm3": lambda p: make_thm3(p["a"], p["f"]),
    "thm6": lambda p: make_thm6(p["a"]),
    "random_binary": lambda p: make_random_binary(p["seed"]),
    "ones_powers": lambda p: make_ones_powers(p["base"]),
    "diluted": lambda p: make_diluted(p["a"], p["gap"]),
}


def from_json_dict(doc: dict) -> ProbSeq:
    kind = doc.get("kind")
    if kind not in _CONSTRUCTORS:
        raise SequenceError(f"unknown sequence kind {kind!r}")
    return _CONSTRUCTORS[kind](doc.get("params", {}))


def from_json(text: str) -> ProbSeq:
    return from_json_dict(json.loads(text))


# --- analysis ----------------------------------------------------------------


def support_upto(seq: ProbSeq, n: int) -> list[int]:
    """Sorted indices i <= n with p(i) > 0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    candidates: set[int] = set()
    for r in seq.rules:
        candidates.update(i for i in r.indices_upto(n) if 1 <= i <= n)
    return sorted(i for i in candidates if seq.eval(i) > 0.0)


def log_partial_product(seq: ProbSeq, n: int) -> float:
    """sum_{i<=n} ln(1 - p(i)); exactly -inf when some p(i) = 1 with i <= n.

    Only support indices contribute, so the cost is O(|supp <= n|).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    total = 0.0
    for i in support_upto(seq, n):
        p = seq.eval(i)
        if p >= 1.0:
            return float("-inf")
        total += math.log1p(-p)
    return total


def partial_product(seq: ProbSeq, n: int) -> float:
    """prod_{i<=n} (1 - p(i)), exponentiated from log scale."""
    lp = log_partial_product(seq, n)
    return 0.0 if lp == float("-inf") else math.exp(lp)


def condition_statistic(seq: ProbSeq, n: int, kind: str) -> float:
    """Convergence-condition statistics.

    C2:     log prod_{i<=n}(1-p(i)) / log n          (n >= 2)
    C3_SUM: sum_{i<=n} p(i)
    C5:     sum_{i<=n} i * ln(1-p(i))
    """
    if kind == "C2":
        if n < 2:
            raise ValueError("C2 needs n >= 2")
        return log_partial_product(seq, n) / math.log(n)
    if kind == "C3_SUM":
        return sum(seq.eval(i) for i in support_upto(seq, n))
    if kind == "C5":
        total = 0.0
        for i in support_upto(seq, n):
            p = seq.eval(i)
            if p >= 1.0:
                return float("-inf")
            total += i * math.log1p(-p)
        return total
    raise ValueError(f"unknown statistic kind {kind!r}")


def is_admissible(seq: ProbSeq, h) -> bool:
    """Can ``h`` occur as a sample on its own vertex range?

    True iff every edge {j,k} of h has p(|j-k|) > 0 and every non-edge has
    p(|j-k|) < 1.
    """
    n = h.n
    edges = h.edges
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            p = seq.eval(k - j)
            if (j, k) in edges:
                if p <= 0.0:
                    return False
            elif p >= 1.0:
                return False
    return True
