import random

import pytest
from hypothesis import given, settings, strategies as st

from stepkit.pomset import (
    EMPTY,
    LabelledPoset,
    NotSeriesParallelError,
    Pomset,
    PomsetNotationError,
    Step,
    depth,
    enumerate_pomsets,
    format_step_word,
    is_isomorphic,
    is_n_free,
    is_series_parallel,
    par_compose,
    par_factorize,
    parse_pomset,
    parse_step_word,
    primitive,
    seq_compose,
    seq_factorize,
    step_pomset,
    step_word_to_pomset,
    subsumes,
    width,
)

from generators import random_pomset, random_sp_pomset
from oracles import brute_force_isomorphic, brute_force_seq_blocks

A, B, C, D = (primitive(ch) for ch in "abcd")
N_POMSET = Pomset("abcd", [(0, 1), (2, 3), (0, 3)])


def pomsets(max_nodes=5):
    return st.builds(
        lambda seed, n: random_pomset(random.Random(seed), n),
        st.integers(0, 10_000),
        st.integers(0, max_nodes),
    )


class TestLabelledPoset:
    def test_validation_rejects_broken_orders(self):
        with pytest.raises(ValueError):
            LabelledPoset([0, 1], [(0, 0), (1, 1), (0, 1), (1, 0)], {0: "a", 1: "b"})
        with pytest.raises(ValueError):
            LabelledPoset([0, 1], [(0, 1), (1, 1)], {0: "a", 1: "b"})  # not reflexive
        with pytest.raises(ValueError):
            LabelledPoset(
                [0, 1, 2],
                [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)],
                {0: "a", 1: "b", 2: "c"},
            )  # not transitive
        with pytest.raises(ValueError):
            LabelledPoset([0, 0], [(0, 0)], {0: "a"})
        with pytest.raises(ValueError):
            LabelledPoset([0], [(0, 0)], {})

    def test_round_trip_through_pomset(self):
        lp = LabelledPoset(
            [7, 3], [(7, 7), (3, 3), (7, 3)], {7: "a", 3: "b"}
        )
        assert Pomset.from_poset(lp) == seq_compose(A, B)


class TestCompositions:
    def test_par_two_letters(self):
        u = par_compose(A, B)
        assert len(u) == 2 and not u.pairs

    def test_units(self):
        assert par_compose(EMPTY, B) == B
        assert par_compose(B, EMPTY) == B
        assert seq_compose(A, EMPTY) == A
        assert seq_compose(EMPTY, A) == A

    def test_par_commutes_seq_does_not(self):
        assert par_compose(A, B) == par_compose(B, A)
        assert seq_compose(A, B) != seq_compose(B, A)
        assert seq_compose(A, A) == seq_compose(A, A)

    def test_par_associative_example(self):
        assert par_compose(par_compose(A, B), C) == par_compose(A, par_compose(B, C))

    def test_seq_adds_all_cross_pairs(self):
        u = seq_compose(A, par_compose(B, C))
        below = {tuple(sorted(u.labels[a] + u.labels[b])) for a, b in u.pairs}
        assert below == {("a", "b"), ("a", "c")}

    @given(pomsets(4), pomsets(4), pomsets(4))
    @settings(max_examples=60, deadline=None)
    def test_associativity_property(self, u, v, w):
        assert seq_compose(seq_compose(u, v), w) == seq_compose(u, seq_compose(v, w))
        assert par_compose(par_compose(u, v), w) == par_compose(u, par_compose(v, w))
        assert par_compose(u, v) == par_compose(v, u)


class TestIsomorphism:
    def test_commuted_union(self):
        assert is_isomorphic(par_compose(A, B).to_poset(), par_compose(B, A).to_poset())

    def test_order_reversal_detected(self):
        assert not is_isomorphic(
            seq_compose(A, B).to_poset(), seq_compose(B, A).to_poset()
        )

    def test_agrees_with_unpruned_brute_force(self):
        pool = enumerate_pomsets(4, "ab")
        for u in pool:
            for v in pool:
                if len(u) != len(v) or sorted(u.labels) != sorted(v.labels):
                    continue
                assert is_isomorphic(u.to_poset(), v.to_poset()) == brute_force_isomorphic(u, v)

    def test_agrees_with_brute_force_on_larger_samples(self):
        rng = random.Random(17)
        for _ in range(150):
            u = random_pomset(rng, 6)
            v = random_pomset(rng, 6)
            if rng.random() < 0.5:
                # relabelled copy, usually isomorphic
                n = len(u)
                perm = list(range(n))
                rng.shuffle(perm)
                inverse = {perm[i]: i for i in range(n)}
                v = Pomset(
                    [u.labels[perm[i]] for i in range(n)],
                    [(inverse[a], inverse[b]) for a, b in u.pairs],
                )
            assert is_isomorphic(u.to_poset(), v.to_poset()) == brute_force_isomorphic(u, v)

    @given(pomsets(5), st.integers(0, 10_000))
    @settings(max_examples=80, deadline=None)
    def test_canonical_form_is_permutation_invariant(self, p, seed):
        rng = random.Random(seed)
        n = len(p)
        perm = list(range(n))
        rng.shuffle(perm)
        inverse = {perm[i]: i for i in range(n)}
        shuffled = Pomset(
            [p.labels[perm[i]] for i in range(n)],
            [(inverse[a], inverse[b]) for a, b in p.pairs],
        )
        assert shuffled == p

    def test_canonical_equality_iff_isomorphic(self):
        pool = [p for p in enumerate_pomsets(4, "ab") if len(p) >= 2]
        for u in pool:
            for v in pool:
                assert (u == v) == is_isomorphic(u.to_poset(), v.to_poset())

    def test_canonical_invariance_at_six_nodes(self):
        rng = random.Random(23)
        six = [p for p in enumerate_pomsets(6, "ab") if len(p) == 6]
        for p in rng.sample(six, 400):
            perm = list(range(6))
            rng.shuffle(perm)
            inverse = {perm[i]: i for i in range(6)}
            shuffled = Pomset(
                [p.labels[perm[i]] for i in range(6)],
                [(inverse[a], inverse[b]) for a, b in p.pairs],
            )
            assert shuffled == p


class TestSeriesParallel:
    def test_n_pomset_is_not_sp(self):
        assert not is_n_free(N_POMSET)
        assert not is_series_parallel(N_POMSET)

    def test_small_pomsets_are_n_free(self):
        assert is_n_free(step_pomset("abc"))
        assert is_n_free(EMPTY)

    def test_diamond_example(self):
        u = seq_compose(seq_compose(A, par_compose(B, C)), D)
        assert is_n_free(u) and is_series_parallel(u)

    def test_unit_is_sp(self):
        assert is_series_parallel(EMPTY)

    def test_agreement_up_to_five_nodes(self):
        for p in enumerate_pomsets(5, "ab"):
            assert is_n_free(p) == is_series_parallel(p), repr(p)


class TestFactorization:
    def test_chain(self):
        chain = seq_compose(seq_compose(A, B), C)
        assert seq_factorize(chain) == [A, B, C]

    def test_non_sequential_is_singleton(self):
        u = par_compose(A, B)
        assert seq_factorize(u) == [u]

    def test_parallel_multiset_keeps_multiplicity(self):
        assert par_factorize(par_compose(A, A)) == [A, A]

    def test_non_parallel_is_singleton(self):
        u = seq_compose(A, B)
        assert par_factorize(u) == [u]

    def test_rejects_non_sp(self):
        with pytest.raises(NotSeriesParallelError, match="series-parallel"):
            seq_factorize(N_POMSET)
        with pytest.raises(NotSeriesParallelError):
            par_factorize(N_POMSET)
        with pytest.raises(NotSeriesParallelError):
            seq_factorize(EMPTY)

    def test_matches_subset_scan_oracle(self):
        rng = random.Random(3)
        for _ in range(100):
            p = random_sp_pomset(rng, rng.randint(1, 7))
            fast = seq_factorize(p)
            slow = [p.restricted_to(block) for block in brute_force_seq_blocks(p)]
            assert fast == slow

    def test_factorize_recompose_random(self):
        rng = random.Random(11)
        for _ in range(200):
            p = random_sp_pomset(rng, rng.randint(1, 8))
            seq_parts = seq_factorize(p)
            rebuilt = EMPTY
            for part in seq_parts:
                rebuilt = seq_compose(rebuilt, part)
            assert rebuilt == p
            assert all(len(seq_factorize(part)) == 1 for part in seq_parts)
            par_parts = par_factorize(p)
            rebuilt = EMPTY
            for part in par_parts:
                rebuilt = par_compose(rebuilt, part)
            assert rebuilt == p
            assert all(len(par_factorize(part)) == 1 for part in par_parts)


class TestMeasures:
    def test_width(self):
        assert width(par_compose(par_compose(A, B), C)) == 3
        assert width(seq_compose(seq_compose(A, B), C)) == 1
        assert width(seq_compose(seq_compose(A, par_compose(B, C)), D)) == 2
        assert width(EMPTY) == 0
        assert width(N_POMSET) == 2

    def test_depth(self):
        assert depth(A) == 0
        assert depth(EMPTY) == 0
        assert depth(par_compose(A, B)) == 1
        assert depth(seq_compose(A, par_compose(B, C))) == 2
        with pytest.raises(NotSeriesParallelError):
            depth(N_POMSET)


class TestSubsumption:
    def test_order_can_be_added_not_dropped(self):
        assert subsumes(seq_compose(A, B), par_compose(A, B))
        assert not subsumes(par_compose(A, B), seq_compose(A, B))

    def test_step_word_example(self):
        word = parse_step_word("<a,b>.c")
        assert subsumes(step_word_to_pomset(word), par_compose(A, seq_compose(B, C)))

    def test_reflexive_up_to_five_nodes(self):
        for p in enumerate_pomsets(5, "ab"):
            assert subsumes(p, p)

    def test_transitive(self):
        # exhaustive within each (size, label-multiset) bucket up to 4 nodes;
        # subsumption never relates across buckets
        buckets = {}
        for p in enumerate_pomsets(4, "ab"):
            buckets.setdefault((len(p), tuple(sorted(p.labels))), []).append(p)
        for pool in buckets.values():
            related = [(u, v) for u in pool for v in pool if subsumes(u, v)]
            by_source = {}
            for u, v in related:
                by_source.setdefault(u, []).append(v)
            for u, v in related:
                for w in by_source.get(v, ()):
                    assert subsumes(u, w)

    def test_transitive_sampled_at_five_nodes(self):
        rng = random.Random(29)
        five = [p for p in enumerate_pomsets(5, "ab") if len(p) == 5]
        by_labels = {}
        for p in five:
            by_labels.setdefault(tuple(sorted(p.labels)), []).append(p)
        for _ in range(400):
            pool = by_labels[rng.choice(list(by_labels))]
            u, v, w = (rng.choice(pool) for _ in range(3))
            if subsumes(u, v) and subsumes(v, w):
                assert subsumes(u, w)

    def test_label_mismatch(self):
        assert not subsumes(A, B)
        assert not subsumes(A, EMPTY)


class TestStepsAndWords:
    def test_step_is_discrete_pomset(self):
        assert step_pomset("ab") == par_compose(A, B)
        assert Step("ba").letters == ("a", "b")
        assert Step("ab").to_pomset().is_step()

    def test_step_word_to_pomset(self):
        word = parse_step_word("a.<b,c>.d")
        expected = seq_compose(seq_compose(A, par_compose(B, C)), D)
        assert step_word_to_pomset(word) == expected
        assert step_word_to_pomset(()) == EMPTY
        assert step_word_to_pomset(parse_step_word("<a,b>")) == par_compose(A, B)

    def test_step_word_notation_round_trip(self):
        for text in ["a", "1", "a.b", "<a,b>.c", "a.<b,c>.d", "<a,a,b>"]:
            assert format_step_word(parse_step_word(text)) == text

    def test_bad_step_words(self):
        for text in ["a..b", "<a", "<>", "a.", ".a", "a,<b"]:
            with pytest.raises(PomsetNotationError):
                parse_step_word(text)

    def test_empty_step_never_in_words(self):
        assert parse_step_word("1") == ()


class TestNotation:
    def test_canonical_texts(self):
        assert EMPTY.to_text() == "1"
        assert A.to_text() == "a"
        assert par_compose(B, A).to_text() == "a||b"
        assert seq_compose(seq_compose(A, par_compose(C, B)), D).to_text() == "a.(b||c).d"
        assert par_compose(seq_compose(A, B), C).to_text() == "a.b||c"

    def test_parse_round_trip(self):
        for text in ["1", "a", "a||b", "a.(b||c).d", "a.b||c", "(a||b).c"]:
            assert parse_pomset(text).to_text() == text

    def test_non_sp_has_no_notation(self):
        with pytest.raises(NotSeriesParallelError):
            N_POMSET.to_text()

    def test_parse_errors(self):
        for text in ["", "a.", "(a", "a||", "A"]:
            with pytest.raises(PomsetNotationError):
                parse_pomset(text)


class TestEnumeration:
    def test_counts_small(self):
        assert len(enumerate_pomsets(0, "ab")) == 1
        assert len(enumerate_pomsets(1, "ab")) == 3
        # two nodes: 3 steps (aa, ab, bb) + 4 chains (aa, ab, ba, bb)
        assert len(enumerate_pomsets(2, "ab")) == 3 + 7

    def test_no_duplicates_and_all_canonical(self):
        pool = enumerate_pomsets(4, "ab")
        assert len(set(pool)) == len(pool)

    def test_contains_known_shapes(self):
        pool = set(enumerate_pomsets(4, "ab"))
        assert N_POMSET not in pool  # uses letters c, d
        n_ab = Pomset("abab", [(0, 1), (2, 3), (0, 3)])
        assert n_ab in pool
        assert par_compose(A, B) in pool
        assert seq_compose(A, seq_compose(B, A)) in pool
