import random

import pytest

from stepkit.automaton import AutomatonFormatError, StepAutomaton, words_sorted
from stepkit.pomset import Step, parse_step_word

from generators import random_automaton, random_word


@pytest.fixture
def fig1():
    return StepAutomaton(
        states=["q0", "q1", "q2", "q3"],
        finals=["q3"],
        delta={("q0", "a"): {"q1"}, ("q2", "d"): {"q3"}},
        gamma={("q1", Step("bc")): {"q2"}},
    )


class TestValidation:
    def test_targets_must_be_states(self):
        with pytest.raises(AutomatonFormatError):
            StepAutomaton(["q"], [], {("q", "a"): {"nope"}}, {})

    def test_finals_must_be_states(self):
        with pytest.raises(AutomatonFormatError):
            StepAutomaton(["q"], ["nope"], {}, {})

    def test_gamma_keys_nonempty(self):
        with pytest.raises(AutomatonFormatError, match="nonempty"):
            StepAutomaton(["q", "r"], ["r"], {}, {("q", Step(())): {"r"}})


class TestRuns(object):
    def test_figure_one_unit_runs(self, fig1):
        assert fig1.run("q1", Step("bc")) == {"q2"}
        assert fig1.run("q0", Step("a")) == {"q1"}
        assert fig1.run("q3", Step("a")) == frozenset()
        assert fig1.run("q0", Step("b")) == frozenset()
        with pytest.raises(KeyError):
            fig1.run("missing", Step("a"))

    def test_singleton_step_unions_delta_and_gamma(self):
        auto = StepAutomaton(
            ["q", "r", "s"],
            ["r", "s"],
            {("q", "a"): {"r"}},
            {("q", Step("a")): {"s"}},
        )
        assert auto.run("q", Step("a")) == {"r", "s"}

    def test_acceptance(self, fig1):
        assert fig1.accepts("q0", parse_step_word("a.<b,c>.d"))
        assert not fig1.accepts("q0", parse_step_word("a.b.c.d"))
        assert not fig1.accepts("q0", parse_step_word("a.<b,c>"))
        assert fig1.accepts("q3", ())
        assert not fig1.accepts("q0", ())

    def test_language_upto(self, fig1):
        assert fig1.language_upto("q0", 3) == {parse_step_word("a.<b,c>.d")}
        assert fig1.language_upto("q3", 0) == {()}
        assert fig1.language_upto("q0", 0) == set()
        assert fig1.language_upto("q0", 2) == set()

    def test_accepts_agrees_with_language_upto(self):
        rng = random.Random(4)
        for _ in range(150):
            auto = random_automaton(rng)
            state = sorted(auto.states)[0]
            word = random_word(rng)
            expected = word in auto.language_upto(state, len(word))
            assert auto.accepts(state, word) == expected


class TestSupport:
    def test_figure_one_support(self, fig1):
        assert fig1.support("q0") == {"q0", "q1", "q2", "q3"}
        assert fig1.support("q3") == {"q3"}

    def test_support_sets_are_closed(self):
        rng = random.Random(9)
        for _ in range(50):
            auto = random_automaton(rng)
            for q in auto.states:
                closed = auto.support(q)
                for member in closed:
                    assert auto.support(member) <= closed

    def test_support_relation_is_preorder(self):
        rng = random.Random(10)
        for _ in range(40):
            auto = random_automaton(rng)
            rel = auto.support_relation()
            for q in auto.states:
                assert (q, q) in rel
            for a, b in rel:
                for c, d in rel:
                    if b == c:
                        assert (a, d) in rel

    def test_boundedness_always_holds(self):
        rng = random.Random(2)
        for _ in range(20):
            assert random_automaton(rng).is_bounded()


class TestWellNestedness:
    def test_figure_one_is_well_nested(self, fig1):
        assert fig1.is_well_nested()

    def test_self_loop_is_not(self):
        auto = StepAutomaton(["q"], [], {("q", "a"): {"q"}}, {})
        assert not auto.is_well_nested()

    def test_two_cycle_is_not(self):
        auto = StepAutomaton(
            ["q", "r"], [], {("q", "a"): {"r"}, ("r", "b"): {"q"}}, {}
        )
        assert not auto.is_well_nested()

    def test_empty_automaton_is(self):
        assert StepAutomaton([], [], {}, {}).is_well_nested()

    def test_generated_descending_automata_are(self):
        rng = random.Random(1)
        for _ in range(50):
            assert random_automaton(rng, well_nested=True).is_well_nested()


class TestRestrict:
    def test_suffix_machine(self, fig1):
        sub = fig1.restrict(fig1.support("q1"))
        assert sub.states == {"q1", "q2", "q3"}
        assert sub.language_upto("q1", 5) == {parse_step_word("<b,c>.d")}

    def test_identity_restriction(self, fig1):
        same = fig1.restrict(fig1.states)
        assert same.delta == fig1.delta and same.gamma == fig1.gamma

    def test_rejects_non_closed_sets(self, fig1):
        with pytest.raises(AutomatonFormatError, match="support-closed"):
            fig1.restrict({"q0", "q1"})

    def test_restriction_preserves_well_nestedness(self):
        rng = random.Random(6)
        for _ in range(40):
            auto = random_automaton(rng, well_nested=True)
            for q in auto.states:
                sub = auto.restrict(auto.support(q))
                assert sub.is_well_nested()


class TestSerialization:
    def test_json_round_trip(self, fig1):
        text = fig1.to_json()
        assert text.endswith("\n")
        back = StepAutomaton.from_json(text)
        assert back.states == fig1.states
        assert back.finals == fig1.finals
        assert back.delta == fig1.delta
        assert back.gamma == fig1.gamma

    def test_json_schema_fields(self, fig1):
        data = fig1.to_json_dict()
        assert set(data) == {"states", "finals", "delta", "gamma"}
        assert data["delta"][0] == {"from": "q0", "letter": "a", "to": "q1"}
        assert data["gamma"][0] == {"from": "q1", "step": ["b", "c"], "to": "q2"}

    def test_malformed_json_rejected(self):
        with pytest.raises(AutomatonFormatError):
            StepAutomaton.from_json("{not json")
        with pytest.raises(AutomatonFormatError):
            StepAutomaton.from_json('{"states": ["q"]}')

    def test_dot_output(self, fig1):
        dot = fig1.to_dot()
        assert '"q3" [shape=doublecircle];' in dot
        assert '"q1" -> "q2" [label="<b,c>"];' in dot
        assert '"q0" -> "q1" [label="a"];' in dot
        assert dot.endswith("}\n")

    def test_words_sorted_formats_empty_word(self, fig1):
        assert words_sorted({(), (Step("a"),)}) == ["1", "a"]
