"""Finite simple graphs on {1..n} and the structural predicates the
experiments need: shift-anchored exact copies, cutpoints, neighborhoods,
block sums, triangle counting, and realizability ("flatness") checks for
circle subgraphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .probseq import ProbSeq, support_upto


class GraphError(ValueError):
    pass


class FlatnessGuardError(GraphError):
    """Witness search refused: too many subgraph vertices."""


Edge = tuple[int, int]


def _norm_edge(v: int, w: int) -> Edge:
    return (v, w) if v < w else (w, v)


@dataclass(frozen=True)
class Graph:
    """Simple graph on vertex set {1..n}; edges stored as (v, w) with v < w."""

    n: int
    edges: frozenset[Edge]

    @cached_property
    def neighbor_sets(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(1, self.n + 1)}
        for v, w in self.edges:
            adj[v].add(w)
            adj[w].add(v)
        return {v: frozenset(s) for v, s in adj.items()}

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        """Per-vertex sorted neighbor lists."""
        return {v: tuple(sorted(s)) for v, s in self.neighbor_sets.items()}

    def has_edge(self, v: int, w: int) -> bool:
        if v == w:
            return False
        return _norm_edge(v, w) in self.edges

    def degree(self, v: int) -> int:
        return len(self.neighbor_sets[v])

    @property
    def m(self) -> int:
        return len(self.edges)


def make_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    if n < 1:
        raise GraphError("graphs have at least one vertex")
    norm = set()
    for v, w in edges:
        if v == w:
            raise GraphError(f"loop at vertex {v}")
        if not (1 <= v <= n and 1 <= w <= n):
            raise GraphError(f"edge ({v},{w}) out of range [1,{n}]")
        norm.add(_norm_edge(v, w))
    return Graph(n, frozenset(norm))


def _graph_unchecked(n: int, edges: Iterable[Edge]) -> Graph:
    # hot path for samplers: edges must already be normalized and in range
    return Graph(n, frozenset(edges))


def complete_graph(l: int) -> Graph:
    if l < 1:
        raise GraphError("graphs have at least one vertex")
    return Graph(l, frozenset((v, w) for v in range(1, l + 1) for w in range(v + 1, l + 1)))


def edgeless_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError("graphs have at least one vertex")
    return Graph(n, frozenset())


def circular_distance(v: int, w: int, n: int) -> int:
    d = abs(v - w)
    return min(d, n - d)


# --- neighborhoods -----------------------------------------------------------


def neighborhood(g: Graph, v: int, r: int, augmented: bool = False) -> frozenset[int]:
    """Ball of radius r around v; N_0(v) = {v}.

    With ``augmented`` the metric also walks the path edges {i, i+1}, i.e.
    distance is measured in the graph with the successor path added.
    """
    if not 1 <= v <= g.n:
        raise GraphError(f"vertex {v} out of range")
    if r < 0:
        raise GraphError("radius must be >= 0")
    seen = {v}
    frontier = [v]
    for _ in range(r):
        nxt = []
        for u in frontier:
            steps = list(g.neighbor_sets[u])
            if augmented:
                if u > 1:
                    steps.append(u - 1)
                if u < g.n:
                    steps.append(u + 1)
            for x in steps:
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        if not nxt:
            break
        frontier = nxt
    return frozenset(seen)


# --- exact copies ------------------------------------------------------------


def is_exact_copy_at(g: Graph, h: Graph, i: int) -> bool:
    """Does the block {i+1..i+l} induce h (under the shift) with no edge
    leaving the block?
    """
    l = h.n
    if not 0 <= i <= g.n - l:
        raise GraphError(f"offset {i} out of range for block of {l} in [1,{g.n}]")
    for j in range(1, l + 1):
        for k in range(j + 1, l + 1):
            if h.has_edge(j, k) != g.has_edge(i + j, i + k):
                return False
    lo, hi = i + 1, i + l
    for u in range(lo, hi + 1):
        for x in g.neighbor_sets[u]:
            if x < lo or x > hi:
                return False
    return True


def exact_copy_offsets(g: Graph, h: Graph, lo: int, hi: int) -> list[int]:
    """All offsets whose copy block lies inside [lo, hi]."""
    l = h.n
    out = []
    for i in range(max(0, lo - 1), hi - l + 1):
        if is_exact_copy_at(g, h, i):
            out.append(i)
    return out


def max_disjoint_exact_copies(g: Graph, h: Graph, lo: int, hi: int) -> int:
    """Maximum number of vertex-disjoint exact copies of h inside [lo, hi].

    Copies occupy contiguous equal-length intervals, so the earliest-right-
    endpoint greedy over sorted offsets is exact.
    """
    if not 1 <= lo <= hi <= g.n:
        raise GraphError(f"window [{lo},{hi}] invalid for n={g.n}")
    l = h.n
    count = 0
    last_end = lo - 1
    for i in exact_copy_offsets(g, h, lo, hi):
        if i + 1 > last_end:
            count += 1
            last_end = i + l
    return count


# --- cutpoints ---------------------------------------------------------------


def is_cutpoint(g: Graph, v: int) -> bool:
    """No edge {w', w''} with w' <= v < w''; v = n holds vacuously."""
    if not 1 <= v <= g.n:
        raise GraphError(f"vertex {v} out of range")
    return not any(a <= v < b for a, b in g.edges)


def cutpoints(g: Graph) -> list[int]:
    crossing = [0] * (g.n + 2)
    for a, b in g.edges:
        crossing[a] += 1
        crossing[b] -= 1
    out, running = [], 0
    for v in range(1, g.n + 1):
        running += crossing[v]
        if running == 0:
            out.append(v)
    return out


def psi_r_holds(g: Graph, f_r: int) -> bool:
    """Some cutpoint v lies in the window 2 f_r <= v <= n - 2 f_r."""
    if f_r < 1:
        raise GraphError("f_r must be >= 1")
    lo, hi = 2 * f_r, g.n - 2 * f_r
    if lo > hi:
        return False
    return any(lo <= v <= hi for v in cutpoints(g))


# --- block sums --------------------------------------------------------------


def disjoint_sum(g1: Graph, g2: Graph) -> Graph:
    """Place g2 after g1 with no cross edges; vertex counts add."""
    shift = g1.n
    edges = set(g1.edges)
    edges.update((v + shift, w + shift) for v, w in g2.edges)
    return Graph(g1.n + g2.n, frozenset(edges))


def concat_sum(g1: Graph, g2: Graph) -> Graph:
    """Same edge set as ``disjoint_sum``; the blocks sit contiguously on the
    line, which matters only to order-aware model semantics downstream.
    """
    return disjoint_sum(g1, g2)


# --- triangles ---------------------------------------------------------------


def count_triangles(g: Graph) -> int:
    total = 0
    ns = g.neighbor_sets
    for v, w in g.edges:
        total += len(ns[v] & ns[w])
    return total // 3


def has_triangle(g: Graph) -> bool:
    ns = g.neighbor_sets
    return any(ns[v] & ns[w] for v, w in g.edges)


# --- circle-subgraph flatness -------------------------------------------------


@dataclass(frozen=True)
class Subgraph:
    """A subgraph of the circle on [host_n]: distinct vertex positions plus
    edges given as index pairs over 1..k.
    """

    host_n: int
    positions: tuple[int, ...]
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        k = len(self.positions)
        if len(set(self.positions)) != k:
            raise GraphError("positions must be distinct")
        if any(not 1 <= p <= self.host_n for p in self.positions):
            raise GraphError("positions out of host range")
        for a, b in self.edges:
            if not (1 <= a < b <= k):
                raise GraphError(f"edge index pair ({a},{b}) invalid for k={k}")

    @property
    def k(self) -> int:
        return len(self.positions)

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges


def _cw(a: int, b: int, c: int) -> bool:
    return (a <= b <= c) or (b <= c <= a) or (c <= a <= b)


def _h_components(h: Subgraph) -> list[list[int]]:
    k = h.k
    seen: set[int] = set()
    comps = []
    for start in range(1, k + 1):
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            u = stack.pop()
            comp.append(u)
            for x in range(1, k + 1):
                if x not in seen and h.has_edge(u, x):
                    seen.add(x)
                    stack.append(x)
        comps.append(comp)
    return comps


def _bfs_order(h: Subgraph, comp: list[int]) -> list[int]:
    order, seen = [comp[0]], {comp[0]}
    qi = 0
    while qi < len(order):
        u = order[qi]
        qi += 1
        for x in comp:
            if x not in seen and h.has_edge(u, x):
                seen.add(x)
                order.append(x)
    return order


def _place_lc_component(order: list[int], h: Subgraph, supp: list[int], n: int) -> bool:
    # anchor the root at every start; children constrained only through h-edges
    deltas = [d for d in supp] + [-d for d in supp]

    def extend(assign: dict[int, int], pos: int) -> bool:
        if pos == len(order):
            return True
        u = order[pos]
        placed_nbrs = [t for t in assign if h.has_edge(u, t)]
        anchor = placed_nbrs[0]
        for d in deltas:
            w = assign[anchor] + d
            if not 1 <= w <= n:
                continue
            if all(abs(w - assign[t]) in supp_set for t in placed_nbrs):
                assign[u] = w
                if extend(assign, pos + 1):
                    return True
                del assign[u]
        return False

    supp_set = set(supp)
    for start in range(1, n + 1):
        assign = {order[0]: start}
        if extend(assign, 1):
            return True
    return False


def _place_lc_plus(h: Subgraph, supp: list[int], n: int) -> bool:
    # the successor biconditional couples every vertex pair, so the search
    # places all k vertices jointly
    k = h.k
    supp_set = set(supp)
    host = h.host_n
    verts = list(range(1, k + 1))

    def host_succ(i: int, j: int) -> bool:
        # v_j = v_i + 1 (mod host)
        vi, vj = h.positions[i - 1], h.positions[j - 1]
        return vj == (vi % host) + 1

    def consistent(assign: dict[int, int], u: int, w: int) -> bool:
        for t, wt in assign.items():
            if t == u:
                continue
            if h.has_edge(u, t) and abs(w - wt) not in supp_set:
                return False
            if (w == wt + 1) != host_succ(t, u):
                return False
            if (wt == w + 1) != host_succ(u, t):
                return False
        return True

    def extend(assign: dict[int, int], pos: int) -> bool:
        if pos == len(verts):
            return True
        u = verts[pos]
        for w in range(1, n + 1):
            if consistent(assign, u, w):
                assign[u] = w
                if extend(assign, pos + 1):
                    return True
                del assign[u]
        return False

    return extend({}, 0)


def _flat_le(h: Subgraph, n: int) -> bool:
    k = h.k
    pos = h.positions
    for i in range(1, k + 1):
        ok = True
        for ip in range(1, k + 1):
            if ip == i:
                continue
            for ipp in range(1, k + 1):
                if ipp in (i, ip):
                    continue
                if not _cw(pos[i - 1], pos[ip - 1], pos[ipp - 1]):
                    continue
                if abs(pos[ip - 1] - pos[i - 1]) + abs(pos[i - 1] - pos[ipp - 1]) > n / 2:
                    continue
                if h.has_edge(ip, ipp):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def is_flat(seq: ProbSeq, n: int, h: Subgraph, variant: str) -> bool:
    """Realizability of a circle subgraph on the line of length n.

    LC:      witnesses w_1..w_k exist with p(|w_i - w_j|) > 0 for every edge
             {i, j} of h (non-edges unconstrained).
    LC_PLUS: additionally w_j = w_i + 1 exactly when the h-positions are
             circle successors (this couples every pair, not just edges).
    LC_LE:   some index i sees no h-edge among clockwise-between pairs whose
             distance sum by i is at most n/2; a direct scan, no search.
    """
    if h.k > 8:
        raise FlatnessGuardError(f"subgraph has {h.k} > 8 vertices")
    if variant == "LC_LE":
        return _flat_le(h, n)
    supp = support_upto(seq, n - 1) if n >= 2 else []
    if variant == "LC":
        for comp in _h_components(h):
            if len(comp) == 1:
                continue  # unconstrained, place anywhere
            if not _place_lc_component(_bfs_order(h, comp), h, supp, n):
                return False
        return True
    if variant == "LC_PLUS":
        return _place_lc_plus(h, supp, n)
    raise GraphError(f"unknown flatness variant {variant!r}")


# --- edge-list text format ----------------------------------------------------


def to_edgelist_text(g: Graph) -> str:
    """Canonical text form: header line, then sorted 'e v w' lines."""
    lines = [f"n {g.n}"]
    lines.extend(f"e {v} {w}" for v, w in sorted(g.edges))
    return "\n".join(lines) + "\n"


def from_edgelist_text(text: str) -> Graph:
    n: int | None = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "n" and len(parts) == 2:
            n = int(parts[1])
        elif parts[0] == "e" and len(parts) == 3:
            edges.append((int(parts[1]), int(parts[2])))
        else:
            raise GraphError(f"line {lineno}: cannot parse {raw!r}")
    if n is None:
        raise GraphError("missing 'n <count>' header line")
    return make_graph(n, edges)
