"""First-order formulas over graph vocabularies, with a text parser and a
naive model checker.

Vocabularies (all include adjacency and equality):

  L        plain graphs on the line
  L_PLUS   + successor, constants ``first``/``last``
  L_LE     + linear order <=
  LC       plain graphs on the circle
  LC_PLUS  + circular successor (w = v+1 mod n)
  LC_LE    + ternary clockwise-betweenness C(a, b, c)

Interpretations are derived from the vertex numbering, so a model is just a
graph plus a vocabulary tag.  Evaluation is direct recursive enumeration
with short-circuiting; at the sizes and depths used here O(n^depth) is fine
and trivially auditable.

Text grammar (whitespace insignificant)::

    formula := ("forall"|"exists") VAR "." formula | imp
    imp     := or ("->" imp)?
    or      := and ("|" and)*
    and     := neg ("&" neg)*
    neg     := "!" neg | "(" formula ")" | atom
    atom    := "adj(" t "," t ")" | "succ(" t "," t ")" | t "<=" t
             | "C(" t "," t "," t ")" | t "=" t
    t       := VAR | "first" | "last"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .graph import Graph


class Vocab(str, Enum):
    L = "L"
    L_PLUS = "L_PLUS"
    L_LE = "L_LE"
    LC = "LC"
    LC_PLUS = "LC_PLUS"
    LC_LE = "LC_LE"

    @property
    def circular(self) -> bool:
        return self in (Vocab.LC, Vocab.LC_PLUS, Vocab.LC_LE)

    @property
    def has_succ(self) -> bool:
        return self in (Vocab.L_PLUS, Vocab.LC_PLUS)

    @property
    def has_constants(self) -> bool:
        return self is Vocab.L_PLUS

    @property
    def has_le(self) -> bool:
        return self is Vocab.L_LE

    @property
    def has_cw(self) -> bool:
        return self is Vocab.LC_LE


class LogicError(ValueError):
    pass


class FormulaSyntaxError(LogicError):
    def __init__(self, message: str, pos: int):
        self.pos = pos
        super().__init__(f"{message} (at offset {pos})")


class VocabularyError(LogicError):
    pass


# --- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str  # "first" or "last"

    def __str__(self):
        return self.name


Term = Var | Const


@dataclass(frozen=True)
class Adj:
    a: Term
    b: Term


@dataclass(frozen=True)
class Succ:
    a: Term
    b: Term


@dataclass(frozen=True)
class Le:
    a: Term
    b: Term


@dataclass(frozen=True)
class Cw:
    a: Term
    b: Term
    c: Term


@dataclass(frozen=True)
class Eq:
    a: Term
    b: Term


@dataclass(frozen=True)
class Not:
    body: "Node"


@dataclass(frozen=True)
class And:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Or:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Implies:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Node"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Node"


Node = Adj | Succ | Le | Cw | Eq | Not | And | Or | Implies | Forall | Exists


def _node_depth(node: Node) -> int:
    match node:
        case Forall(_, body) | Exists(_, body):
            return 1 + _node_depth(body)
        case Not(body):
            return _node_depth(body)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return max(_node_depth(l), _node_depth(r))
        case _:
            return 0


def _free_vars(node: Node, bound: frozenset[str]) -> set[str]:
    match node:
        case Adj(a, b) | Succ(a, b) | Le(a, b) | Eq(a, b):
            return {t.name for t in (a, b) if isinstance(t, Var) and t.name not in bound}
        case Cw(a, b, c):
            return {t.name for t in (a, b, c) if isinstance(t, Var) and t.name not in bound}
        case Not(body):
            return _free_vars(body, bound)
        case And(l, r) | Or(l, r) | Implies(l, r):
            return _free_vars(l, bound) | _free_vars(r, bound)
        case Forall(v, body) | Exists(v, body):
            return _free_vars(body, bound | {v})
    raise LogicError(f"unknown node {node!r}")


def _check_vocab(node: Node, vocab: Vocab) -> None:
    def term_ok(t: Term):
        if isinstance(t, Const) and not vocab.has_constants:
            raise VocabularyError(f"constant {t.name!r} not available in {vocab.value}")

    match node:
        case Adj(a, b) | Eq(a, b):
            term_ok(a), term_ok(b)
        case Succ(a, b):
            if not vocab.has_succ:
                raise VocabularyError(f"succ not available in {vocab.value}")
            term_ok(a), term_ok(b)
        case Le(a, b):
            if not vocab.has_le:
                raise VocabularyError(f"<= not available in {vocab.value}")
            term_ok(a), term_ok(b)
        case Cw(a, b, c):
            if not vocab.has_cw:
                raise VocabularyError(f"C(...) not available in {vocab.value}")
            term_ok(a), term_ok(b), term_ok(c)
        case Not(body):
            _check_vocab(body, vocab)
        case And(l, r) | Or(l, r) | Implies(l, r):
            _check_vocab(l, vocab), _check_vocab(r, vocab)
        case Forall(_, body) | Exists(_, body):
            _check_vocab(body, vocab)


@dataclass(frozen=True)
class Formula:
    """A vocabulary-tagged formula; use :func:`parse` or the builders below."""

    root: Node
    vocab: Vocab
    name: str = "formula"

    def __post_init__(self):
        _check_vocab(self.root, self.vocab)

    @cached_property
    def depth(self) -> int:
        return _node_depth(self.root)

    @cached_property
    def free_variables(self) -> frozenset[str]:
        return frozenset(_free_vars(self.root, frozenset()))

    @property
    def is_sentence(self) -> bool:
        return not self.free_variables

    def __str__(self):
        return to_text(self)


def quantifier_depth(f: Formula) -> int:
    """Maximum quantifier nesting; atoms have depth 0."""
    return f.depth


# --- parser -------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<le><=)|(?P<sym>[().,|&!=])|(?P<word>[A-Za-z_][A-Za-z0-9_]*))"
)
_KEYWORDS = {"forall", "exists", "adj", "succ", "C", "first", "last"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise FormulaSyntaxError(f"unexpected character {text[pos:].strip()[0]!r}", pos)
            break
        if m.group("arrow"):
            tokens.append(("arrow", "->", m.start("arrow")))
        elif m.group("le"):
            tokens.append(("le", "<=", m.start("le")))
        elif m.group("sym"):
            tokens.append(("sym", m.group("sym"), m.start("sym")))
        else:
            tokens.append(("word", m.group("word"), m.start("word")))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, value: str | None = None):
        k, v, pos = self.take()
        if k != kind or (value is not None and v != value):
            raise FormulaSyntaxError(f"expected {value or kind!r}, found {v!r}", pos)
        return v

    def formula(self) -> Node:
        k, v, _ = self.peek()
        if k == "word" and v in ("forall", "exists"):
            self.take()
            _, name, pos = self.take()
            if name in _KEYWORDS or not name:
                raise FormulaSyntaxError(f"bad variable name {name!r}", pos)
            self.expect("sym", ".")
            body = self.formula()
            return Forall(name, body) if v == "forall" else Exists(name, body)
        return self.imp()

    def imp(self) -> Node:
        left = self.disj()
        if self.peek()[0] == "arrow":
            self.take()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Node:
        node = self.conj()
        while self.peek()[:2] == ("sym", "|"):
            self.take()
            node = Or(node, self.conj())
        return node

    def conj(self) -> Node:
        node = self.neg()
        while self.peek()[:2] == ("sym", "&"):
            self.take()
            node = And(node, self.neg())
        return node

    def neg(self) -> Node:
        k, v, _ = self.peek()
        if (k, v) == ("sym", "!"):
            self.take()
            return Not(self.neg())
        if (k, v) == ("sym", "("):
            self.take()
            node = self.formula()
            self.expect("sym", ")")
            return node
        return self.atom()

    def term(self) -> Term:
        k, v, pos = self.take()
        if k != "word":
            raise FormulaSyntaxError(f"expected a term, found {v!r}", pos)
        if v in ("first", "last"):
            return Const(v)
        if v in _KEYWORDS:
            raise FormulaSyntaxError(f"keyword {v!r} is not a term", pos)
        return Var(v)

    def atom(self) -> Node:
        k, v, pos = self.peek()
        if k == "word" and v in ("adj", "succ"):
            self.take()
            self.expect("sym", "(")
            a = self.term()
            self.expect("sym", ",")
            b = self.term()
            self.expect("sym", ")")
            return Adj(a, b) if v == "adj" else Succ(a, b)
        if k == "word" and v == "C":
            self.take()
            self.expect("sym", "(")
            a = self.term()
            self.expect("sym", ",")
            b = self.term()
            self.expect("sym", ",")
            c = self.term()
            self.expect("sym", ")")
            return Cw(a, b, c)
        a = self.term()
        k, v, pos = self.take()
        if k == "le":
            return Le(a, self.term())
        if (k, v) == ("sym", "="):
            return Eq(a, self.term())
        raise FormulaSyntaxError(f"expected '<=' or '=' after term, found {v!r}", pos)


def parse(text: str, vocab: Vocab) -> Formula:
    """Parse a formula; raises positioned syntax errors, vocabulary errors
    for atoms the tag does not permit, and rejects unbound variables."""
    p = _Parser(text)
    root = p.formula()
    k, v, pos = p.peek()
    if k != "eof":
        raise FormulaSyntaxError(f"trailing input {v!r}", pos)
    f = Formula(root, vocab)
    if f.free_variables:
        raise LogicError(f"unbound variable(s): {', '.join(sorted(f.free_variables))}")
    return f


def _term_text(t: Term) -> str:
    return t.name


def _node_text(node: Node, parent_prec: int) -> str:
    # precedence: quantifier 0 < implies 1 < or 2 < and 3 < not 4 < atom 5
    match node:
        case Forall(v, body):
            s, prec = f"forall {v}. {_node_text(body, 0)}", 0
        case Exists(v, body):
            s, prec = f"exists {v}. {_node_text(body, 0)}", 0
        case Implies(l, r):
            s, prec = f"{_node_text(l, 2)} -> {_node_text(r, 1)}", 1
        case Or(l, r):
            s, prec = f"{_node_text(l, 2)} | {_node_text(r, 3)}", 2
        case And(l, r):
            s, prec = f"{_node_text(l, 3)} & {_node_text(r, 4)}", 3
        case Not(body):
            s, prec = f"!{_node_text(body, 4)}", 4
        case Adj(a, b):
            s, prec = f"adj({_term_text(a)}, {_term_text(b)})", 5
        case Succ(a, b):
            s, prec = f"succ({_term_text(a)}, {_term_text(b)})", 5
        case Le(a, b):
            s, prec = f"{_term_text(a)} <= {_term_text(b)}", 5
        case Cw(a, b, c):
            s, prec = f"C({_term_text(a)}, {_term_text(b)}, {_term_text(c)})", 5
        case Eq(a, b):
            s, prec = f"{_term_text(a)} = {_term_text(b)}", 5
        case _:
            raise LogicError(f"unknown node {node!r}")
    return f"({s})" if prec < parent_prec else s


def to_text(f: Formula) -> str:
    """Grammar-conformant text; ``parse(to_text(f), f.vocab)`` rebuilds an
    equal AST."""
    return _node_text(f.root, 0)


# --- models and satisfaction ---------------------------------------------------


def cw_holds(a: int, b: int, c: int) -> bool:
    """Clockwise betweenness: some cyclic rotation is non-decreasing."""
    return (a <= b <= c) or (b <= c <= a) or (c <= a <= b)


@dataclass(frozen=True)
class LabeledModel:
    """A graph with interpretations fixed by its vertex numbering."""

    graph: Graph
    vocab: Vocab

    @property
    def n(self) -> int:
        return self.graph.n

    def succ(self, v: int, w: int) -> bool:
        if self.vocab.circular:
            return w == v % self.n + 1
        return w == v + 1

    def constant(self, name: str) -> int:
        return 1 if name == "first" else self.n


def holds(m: LabeledModel, f: Formula) -> bool:
    """Satisfaction of a sentence by direct recursive evaluation."""
    if f.vocab is not m.vocab:
        raise VocabularyError(f"model vocabulary {m.vocab.value} != formula {f.vocab.value}")
    if not f.is_sentence:
        raise LogicError(f"free variable(s): {', '.join(sorted(f.free_variables))}")
    g = m.graph
    n = g.n
    env: dict[str, int] = {}

    def val(t: Term) -> int:
        return env[t.name] if isinstance(t, Var) else m.constant(t.name)

    def ev(node: Node) -> bool:
        match node:
            case Adj(a, b):
                return g.has_edge(val(a), val(b))
            case Eq(a, b):
                return val(a) == val(b)
            case Succ(a, b):
                return m.succ(val(a), val(b))
            case Le(a, b):
                return val(a) <= val(b)
            case Cw(a, b, c):
                return cw_holds(val(a), val(b), val(c))
            case Not(body):
                return not ev(body)
            case And(l, r):
                return ev(l) and ev(r)
            case Or(l, r):
                return ev(l) or ev(r)
            case Implies(l, r):
                return (not ev(l)) or ev(r)
            case Forall(v, body):
                shadow = env.get(v)
                try:
                    for x in range(1, n + 1):
                        env[v] = x
                        if not ev(body):
                            return False
                    return True
                finally:
                    if shadow is None:
                        env.pop(v, None)
                    else:
                        env[v] = shadow
            case Exists(v, body):
                shadow = env.get(v)
                try:
                    for x in range(1, n + 1):
                        env[v] = x
                        if ev(body):
                            return True
                    return False
                finally:
                    if shadow is None:
                        env.pop(v, None)
                    else:
                        env[v] = shadow
        raise LogicError(f"unknown node {node!r}")

    return ev(f.root)


# --- sentence library -----------------------------------------------------------


def _and_all(nodes: list[Node]) -> Node:
    out = nodes[0]
    for x in nodes[1:]:
        out = And(out, x)
    return out


def _path2() -> Formula:
    # the two endpoint constants joined through one midpoint
    root = Exists("m", And(Adj(Const("first"), Var("m")), Adj(Var("m"), Const("last"))))
    return Formula(root, Vocab.L_PLUS, name="path2")


def _ex2_path4() -> Formula:
    # any two distinct neighbours of `first` joined by a length-4 walk that
    # avoids `first`; interior points may repeat (documented reading).
    # Guards sit at their own quantifier level so the checker prunes early.
    first = Const("first")
    x, y, z1, z2, z3 = (Var(s) for s in ("x", "y", "z1", "z2", "z3"))
    step3 = Exists("z3", _and_all([Adj(z2, z3), Not(Eq(z3, first)), Adj(z3, y)]))
    step2 = Exists("z2", _and_all([Adj(z1, z2), Not(Eq(z2, first)), step3]))
    step1 = Exists("z1", _and_all([Adj(x, z1), Not(Eq(z1, first)), step2]))
    guard_y = And(Adj(first, y), Not(Eq(y, x)))
    root = Forall("x", Implies(Adj(first, x), Forall("y", Implies(guard_y, step1))))
    return Formula(root, Vocab.L_PLUS, name="ex2_path4")


def _triangle(vocab: Vocab = Vocab.L) -> Formula:
    x, y, z = Var("x"), Var("y"), Var("z")
    inner = Exists("z", And(Adj(y, z), Adj(z, x)))
    root = Exists("x", Exists("y", And(Adj(x, y), inner)))
    return Formula(root, vocab, name="triangle")


def _edge_in_c4() -> Formula:
    x, y, z, w = Var("x"), Var("y"), Var("z"), Var("w")
    inner = Exists("w", _and_all([Adj(z, w), Adj(w, x), Not(Eq(w, y))]))
    mid = Exists("z", _and_all([Adj(y, z), Not(Eq(z, x)), inner]))
    root = Forall("x", Forall("y", Implies(Adj(x, y), mid)))
    return Formula(root, Vocab.L, name="edge_in_c4")


def _adj_first_last() -> Formula:
    return Formula(Adj(Const("first"), Const("last")), Vocab.L_PLUS, name="adj_first_last")


def _extension_ak(k: int) -> Formula:
    # every k-set of distinct vertices is extended in all 2^k adjacency
    # patterns by some witness outside the set
    if k < 1:
        raise LogicError("extension_Ak needs k >= 1")
    xs = [Var(f"x{i}") for i in range(1, k + 1)]
    v = Var("v")
    pattern_parts = []
    for mask in range(2**k):
        lits: list[Node] = []
        for i in range(k):
            if mask >> i & 1:
                lits.append(Adj(v, xs[i]))
            else:
                lits.append(And(Not(Adj(v, xs[i])), Not(Eq(v, xs[i]))))
        pattern_parts.append(Exists("v", _and_all(lits)))
    body: Node = _and_all(pattern_parts)
    if k > 1:
        distinct = _and_all(
            [Not(Eq(xs[i], xs[j])) for i in range(k) for j in range(i + 1, k)]
        )
        body = Implies(distinct, body)
    for i in reversed(range(k)):
        body = Forall(xs[i].name, body)
    return Formula(body, Vocab.L, name=f"extension_Ak_{k}")


LIBRARY_NAMES = ("path2", "ex2_path4", "triangle", "edge_in_c4", "adj_first_last", "extension_Ak")


def library(name: str, **params) -> Formula:
    """Named sentences used across the experiments.

    ``triangle`` accepts an optional ``vocab``; ``extension_Ak`` requires
    ``k``; other entries take no parameters.
    """
    if name == "path2":
        return _path2()
    if name == "ex2_path4":
        return _ex2_path4()
    if name == "triangle":
        return _triangle(params.get("vocab", Vocab.L))
    if name == "edge_in_c4":
        return _edge_in_c4()
    if name == "adj_first_last":
        return _adj_first_last()
    if name == "extension_Ak":
        return _extension_ak(int(params["k"]))
    raise LogicError(f"unknown library sentence {name!r}")


def library_sentences(max_depth: int | None = None, vocab: Vocab | None = None) -> list[Formula]:
    """All library sentences (extension family at k = 1, 2), optionally
    filtered by depth and vocabulary."""
    out = [
        _path2(),
        _ex2_path4(),
        _triangle(),
        _edge_in_c4(),
        _adj_first_last(),
        _extension_ak(1),
        _extension_ak(2),
    ]
    if vocab is not None:
        out = [f for f in out if f.vocab is vocab]
    if max_depth is not None:
        out = [f for f in out if f.depth <= max_depth]
    return out
