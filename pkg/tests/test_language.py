import random

import pytest

from stepkit.expr import parse, semantics
from stepkit.language import (
    PomsetLanguage,
    lang_par,
    lang_parstar,
    lang_seq,
    lang_star,
    lang_substitute,
    lang_union,
)
from stepkit.pomset import (
    EMPTY,
    NotSeriesParallelError,
    Pomset,
    enumerate_pomsets,
    par_compose,
    primitive,
    seq_compose,
)

from oracles import pomset_member

A, B, C = (primitive(ch) for ch in "abc")


def lang(members, bound=4, exact=True):
    return PomsetLanguage(members, bound, exact)


class TestConstruction:
    def test_bound_enforced(self):
        with pytest.raises(ValueError):
            PomsetLanguage([seq_compose(A, B)], 1)

    def test_dedup_by_isomorphism(self):
        assert len(lang([par_compose(A, B), par_compose(B, A)])) == 1

    def test_mismatched_bounds_error(self):
        with pytest.raises(ValueError, match="bounds differ"):
            lang_union(lang([A], 3), lang([B], 4))
        with pytest.raises(ValueError, match="bounds differ"):
            lang_seq(lang([A], 3), lang([B], 4))
        with pytest.raises(ValueError, match="bounds differ"):
            lang_par(lang([A], 3), lang([B], 4))


class TestOperators:
    def test_union(self):
        assert lang_union(lang([A]), lang([B])).members == {A, B}

    def test_union_unit_and_idempotence(self):
        L = lang([A, seq_compose(A, B)])
        assert lang_union(L, PomsetLanguage.empty(4)).members == L.members
        assert lang_union(L, L).members == L.members

    def test_seq(self):
        assert lang_seq(lang([A]), lang([B])).members == {seq_compose(A, B)}
        assert lang_seq(PomsetLanguage.empty(4), lang([A])).members == set()
        L = lang([A, B])
        assert lang_seq(PomsetLanguage.unit(4), L).members == L.members

    def test_par(self):
        assert lang_par(lang([A]), lang([B])).members == {par_compose(A, B)}
        assert lang_par(PomsetLanguage.unit(4), lang([A])).members == {A}
        L, K = lang([A, seq_compose(A, B)]), lang([B, C])
        assert lang_par(L, K).members == lang_par(K, L).members

    def test_seq_filters_oversize(self):
        L = lang([seq_compose(A, B)], bound=3)
        K = lang([seq_compose(B, C)], bound=3)
        assert lang_seq(L, K).members == set()

    def test_star(self):
        got = lang_star(lang([A], bound=2))
        assert got.sorted_texts() == ["1", "a", "a.a"]
        assert lang_star(PomsetLanguage.empty(3)).members == {EMPTY}
        assert lang_star(PomsetLanguage.unit(3)).members == {EMPTY}

    def test_parstar(self):
        got = lang_parstar(lang([A], bound=2))
        assert got.sorted_texts() == ["1", "a", "a||a"]
        assert lang_parstar(PomsetLanguage.empty(3)).members == {EMPTY}
        got = lang_parstar(lang([A, B], bound=2))
        assert got.sorted_texts().count("a||b") == 1

    def test_substitute(self):
        L = lang([seq_compose(A, A)])
        out = lang_substitute({"a": lang([B])}, L)
        assert out.sorted_texts() == ["b.b"]

    def test_substitute_identity(self):
        L = semantics(parse("a.(b||c)+a*"), 4)
        identity = {ch: lang([primitive(ch)]) for ch in "abc"}
        assert lang_substitute(identity, L).members == L.members

    def test_substitute_unit_absorption(self):
        L = lang([par_compose(A, C)])
        out = lang_substitute({"a": PomsetLanguage.unit(4), "c": lang([C])}, L)
        assert out.sorted_texts() == ["c"]

    def test_substitute_missing_letter(self):
        with pytest.raises(ValueError, match="no substitution"):
            lang_substitute({}, lang([A]))

    def test_substitute_rejects_non_sp_member(self):
        n_shape = Pomset("abab", [(0, 1), (2, 3), (0, 3)])
        bad = lang([n_shape])
        with pytest.raises(NotSeriesParallelError):
            lang_substitute({"a": lang([A]), "b": lang([B])}, bad)


class TestExactness:
    CORPUS = [
        "0", "1", "a", "a.b", "a||b", "a+b.a", "a*", "a^*", "(a||b)*",
        "a.(b||a)", "(a+b)^*", "(a.b)*", "a*.b", "a.(1+b)", "(a*)||b",
    ]

    def test_members_match_recursive_descent_oracle(self):
        pool = enumerate_pomsets(4, "ab")
        for text in self.CORPUS:
            expr = parse(text)
            members = semantics(expr, 4).members
            for p in pool:
                assert (p in members) == pomset_member(p, expr), (text, repr(p))

    def test_monotone_in_bound(self):
        for text in self.CORPUS:
            expr = parse(text)
            big = semantics(expr, 5)
            small = semantics(expr, 3)
            assert small.members == {p for p in big.members if len(p) <= 3}

    def test_all_results_within_bound(self):
        rng = random.Random(5)
        from stepkit.axioms import random_expr

        for _ in range(50):
            expr = random_expr(rng)
            for bound in (0, 1, 3):
                sem = semantics(expr, bound)
                assert all(len(p) <= bound for p in sem.members)
                assert sem.exact
