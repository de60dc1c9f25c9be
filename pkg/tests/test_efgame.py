"""Game engine: examples, invariants, oracle cross-checks."""

import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddgraphs.efgame import (
    CONCAT_BOTH_ENDS,
    GameBudgetError,
    SUM,
    fact4_search,
    partial_iso,
    pointed_equiv,
    th_k_equal,
    th_k_equal_detailed,
)
from ddgraphs.graph import complete_graph, disjoint_sum, edgeless_graph, make_graph
from ddgraphs.logic import (
    Adj,
    And,
    Eq,
    Exists,
    Formula,
    LabeledModel,
    Not,
    Var,
    Vocab,
    holds,
    library_sentences,
)


def M(g, vocab=Vocab.L):
    return LabeledModel(g, vocab)


def random_graph(rng, n):
    pairs = list(combinations(range(1, n + 1), 2))
    return make_graph(n, [p for p in pairs if rng.random() < 0.5])


class TestPartialIso:
    def test_empty_plain(self):
        assert partial_iso(M(edgeless_graph(2)), M(edgeless_graph(3)), (), ())

    def test_adjacency_disagrees(self):
        assert not partial_iso(M(complete_graph(2)), M(edgeless_graph(2)), (1, 2), (1, 2))

    def test_constants_checked_with_no_picks(self):
        m1 = M(edgeless_graph(1), Vocab.L_PLUS)
        m2 = M(edgeless_graph(2), Vocab.L_PLUS)
        assert not partial_iso(m1, m2, (), ())  # first = last only on one side

    def test_equality_pattern(self):
        m = M(edgeless_graph(3))
        assert not partial_iso(m, m, (1, 1), (1, 2))

    def test_vocabulary_mismatch(self):
        with pytest.raises(ValueError):
            partial_iso(M(edgeless_graph(2)), M(edgeless_graph(2), Vocab.L_LE), (), ())

    def test_order_atoms(self):
        m = M(make_graph(3, []), Vocab.L_LE)
        assert partial_iso(m, m, (1, 2), (1, 3))
        assert not partial_iso(m, m, (1, 2), (3, 1))


class TestThkEqual:
    def test_large_edgeless_pairs(self):
        assert th_k_equal(M(edgeless_graph(3)), M(edgeless_graph(5)), 2)

    def test_three_picks_expose_size(self):
        assert not th_k_equal(M(edgeless_graph(2)), M(edgeless_graph(3)), 3)

    def test_one_pick_hides_an_edge(self):
        assert th_k_equal(M(complete_graph(2)), M(edgeless_graph(2)), 1)
        assert not th_k_equal(M(complete_graph(2)), M(edgeless_graph(2)), 2)

    def test_k0_over_plain_graphs_is_trivial(self):
        assert th_k_equal(M(complete_graph(4)), M(edgeless_graph(2)), 0)

    def test_k0_constants(self):
        m1 = M(edgeless_graph(1), Vocab.L_PLUS)
        m2 = M(edgeless_graph(2), Vocab.L_PLUS)
        assert not th_k_equal(m1, m2, 0)

    def test_budget_error_is_structured(self):
        with pytest.raises(GameBudgetError) as err:
            th_k_equal(M(edgeless_graph(40)), M(edgeless_graph(40)), 5)
        assert err.value.estimate > err.value.budget

    def test_budget_configurable(self):
        assert th_k_equal(M(edgeless_graph(3)), M(edgeless_graph(3)), 2, node_budget=10**5)

    @given(st.integers(min_value=0, max_value=2**16))
    @settings(max_examples=40, deadline=None)
    def test_reflexive_and_symmetric(self, seed):
        rng = random.Random(seed)
        g1, g2 = random_graph(rng, rng.randint(1, 4)), random_graph(rng, rng.randint(1, 4))
        k = rng.randint(0, 2)
        assert th_k_equal(M(g1), M(g1), k)
        assert th_k_equal(M(g1), M(g2), k) == th_k_equal(M(g2), M(g1), k)

    @given(st.integers(min_value=0, max_value=2**16))
    @settings(max_examples=30, deadline=None)
    def test_deeper_equivalence_refines(self, seed):
        rng = random.Random(seed)
        g1, g2 = random_graph(rng, rng.randint(1, 4)), random_graph(rng, rng.randint(1, 4))
        k = rng.randint(0, 2)
        if th_k_equal(M(g1), M(g2), k + 1):
            assert th_k_equal(M(g1), M(g2), k)

    @given(st.integers(min_value=0, max_value=2**16))
    @settings(max_examples=30, deadline=None)
    def test_transitive(self, seed):
        rng = random.Random(seed)
        gs = [random_graph(rng, rng.randint(1, 4)) for _ in range(3)]
        k = rng.randint(0, 2)
        if th_k_equal(M(gs[0]), M(gs[1]), k) and th_k_equal(M(gs[1]), M(gs[2]), k):
            assert th_k_equal(M(gs[0]), M(gs[2]), k)

    @given(st.integers(min_value=0, max_value=2**16))
    @settings(max_examples=25, deadline=None)
    def test_memo_agrees_with_plain_recursion(self, seed):
        rng = random.Random(seed)
        g1, g2 = random_graph(rng, rng.randint(1, 4)), random_graph(rng, rng.randint(1, 4))
        k = rng.randint(0, 3)
        with_memo, _ = th_k_equal_detailed(M(g1), M(g2), k, use_memo=True)
        without, _ = th_k_equal_detailed(M(g1), M(g2), k, use_memo=False)
        assert with_memo == without


class TestSoundnessAndCompleteness:
    def test_equivalence_transfers_library_sentences(self):
        rng = random.Random(11)
        for _ in range(40):
            g1, g2 = random_graph(rng, rng.randint(1, 4)), random_graph(rng, rng.randint(1, 4))
            for vocab in (Vocab.L, Vocab.L_PLUS):
                k = rng.randint(0, 3)
                if th_k_equal(M(g1, vocab), M(g2, vocab), k):
                    for f in library_sentences(max_depth=k, vocab=vocab):
                        assert holds(M(g1, vocab), f) == holds(M(g2, vocab), f)

    def test_separation_witnessed_by_type_sentence(self):
        # depth-2 inequivalence over plain graphs is always explained by a
        # realized (has-neighbor, has-distinct-non-neighbor) profile
        def type_sentences():
            x, y = Var("x"), Var("y")
            b1 = Exists("y", Adj(x, y))
            b2 = Exists("y", And(Not(Eq(y, x)), Not(Adj(x, y))))
            for s1 in (b1, Not(b1)):
                for s2 in (b2, Not(b2)):
                    yield Formula(Exists("x", And(s1, s2)), Vocab.L)

        rng = random.Random(23)
        checked_separations = 0
        for _ in range(60):
            g1, g2 = random_graph(rng, rng.randint(1, 4)), random_graph(rng, rng.randint(1, 4))
            if not th_k_equal(M(g1), M(g2), 2):
                witnesses = [
                    f for f in type_sentences() if holds(M(g1), f) != holds(M(g2), f)
                ]
                assert witnesses, (g1.edges, g2.edges)
                checked_separations += 1
        assert checked_separations > 0


class TestPointedGame:
    def test_isolated_points_equivalent(self):
        for k in range(4):
            assert pointed_equiv(M(edgeless_graph(3)), 1, M(edgeless_graph(5)), 4, k)

    def test_degree_visible_at_two_moves(self):
        p3 = make_graph(3, [(1, 2), (2, 3)])
        # one radius-1 move cannot separate degree 2 from degree 1: the
        # duplicator answers a neighbor with a neighbor
        assert pointed_equiv(M(p3), 2, M(p3), 1, 1)
        assert not pointed_equiv(M(p3), 2, M(p3), 1, 2)

    def test_identity_point(self):
        p3 = make_graph(3, [(1, 2), (2, 3)])
        for k in range(3):
            assert pointed_equiv(M(p3), 2, M(p3), 2, k)

    def test_radius_restriction_hides_remote_structure(self):
        # a triangle far from the pointed vertex is invisible to a
        # radius-limited game but not to the unrestricted one
        far_triangle = make_graph(10, [(8, 9), (9, 10), (8, 10)])
        plain = edgeless_graph(10)
        assert pointed_equiv(M(far_triangle), 1, M(plain), 1, 2)
        assert not th_k_equal(M(far_triangle), M(plain), 3)

    def test_successor_vocab_uses_augmented_metric(self):
        # under a successor vocabulary every vertex pair is path-connected,
        # so the restricted sets grow along the line
        g1 = make_graph(4, [(1, 3)])
        g2 = edgeless_graph(4)
        assert not pointed_equiv(M(g1, Vocab.L_PLUS), 1, M(g2, Vocab.L_PLUS), 1, 1)

    def test_range_validation(self):
        with pytest.raises(ValueError):
            pointed_equiv(M(edgeless_graph(3)), 4, M(edgeless_graph(3)), 1, 1)


class TestFact4Search:
    def test_depth1_absorber(self):
        cand = disjoint_sum(edgeless_graph(1), complete_graph(2))
        hs = [edgeless_graph(1), edgeless_graph(2), complete_graph(2)]
        assert fact4_search([cand], hs, 1, SUM) is cand

    def test_empty_h_set_vacuous(self):
        cand = edgeless_graph(1)
        assert fact4_search([cand], [], 4, SUM) is cand

    def test_k0_plain_vocabulary(self):
        cand = edgeless_graph(1)
        assert fact4_search([cand], [complete_graph(3)], 0, SUM) is cand

    def test_failing_candidate_returns_none(self):
        # a single vertex cannot absorb an edge at depth 2
        assert fact4_search([edgeless_graph(1)], [complete_graph(2)], 2, SUM) is None

    def test_candidate_list_order(self):
        good = disjoint_sum(edgeless_graph(1), complete_graph(2))
        found = fact4_search([edgeless_graph(1), good], [complete_graph(2)], 2, SUM)
        assert found is good

    def test_concat_mode_uses_order_vocab(self):
        cand = make_graph(2, [(1, 2)])
        with pytest.raises(ValueError):
            fact4_search([cand], [], 1, CONCAT_BOTH_ENDS, vocab=Vocab.L)

    def test_concat_both_ends_constants_decide_depth_zero(self):
        # with endpoint constants, even the empty game inspects succ(first,last):
        # true on two vertices, false once a middle block is inserted
        e2, e3 = edgeless_graph(2), edgeless_graph(3)
        assert fact4_search([e2], [edgeless_graph(1)], 0, CONCAT_BOTH_ENDS) is None
        assert fact4_search([e3], [edgeless_graph(1), e2], 0, CONCAT_BOTH_ENDS) is e3

    def test_concat_right_small_depth(self):
        # betweenness atoms are vacuous on two picks, so edgeless blocks of
        # different sizes stay equivalent at depth 2 under right-concatenation
        e3 = edgeless_graph(3)
        from ddgraphs.efgame import CONCAT_RIGHT

        assert fact4_search([e3], [edgeless_graph(1), edgeless_graph(2)], 2, CONCAT_RIGHT) is e3
        bad = make_graph(2, [(1, 2)])
        assert fact4_search([edgeless_graph(2)], [bad], 2, CONCAT_RIGHT) is None

    def test_requires_candidates(self):
        with pytest.raises(ValueError):
            fact4_search([], [], 1, SUM)
