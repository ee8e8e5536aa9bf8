"""Step automata: letter and step transitions over a finite state set.

A step automaton has a sequential transition function ``delta`` (one letter
at a time) and a step transition function ``gamma`` (a whole nonempty
multiset of letters at once).  A word is a sequence of steps; ``delta``
contributes singleton steps, and a run accepts when it ends in a final
state.  Final states may carry outgoing transitions: the syntactic automaton
built from expression derivatives necessarily places transitions on
accepting (nullable) states, so the stricter convention where finals are
sinks is not imposed here.

Also provided: the support preorder and its closure sets, well-nestedness
(every transition strictly decreases the support order, i.e. the transition
graph is acyclic), restriction to a support-closed subset, a JSON file
format and DOT export.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping

from .pomset import Step, format_step_word

__all__ = ["StepAutomaton", "AutomatonFormatError"]


class AutomatonFormatError(ValueError):
    """Raised when an automaton description is malformed."""


class StepAutomaton:
    """Immutable step automaton over string-named states."""

    __slots__ = ("states", "finals", "delta", "gamma", "_support")

    def __init__(
        self,
        states: Iterable[str],
        finals: Iterable[str],
        delta: Mapping[tuple[str, str], Iterable[str]],
        gamma: Mapping[tuple[str, Step], Iterable[str]],
    ):
        self.states = frozenset(states)
        self.finals = frozenset(finals)
        if not self.finals <= self.states:
            raise AutomatonFormatError("final states must be states")
        d: dict[tuple[str, str], frozenset[str]] = {}
        for (src, letter), targets in delta.items():
            targets = frozenset(targets)
            if src not in self.states or not targets <= self.states:
                raise AutomatonFormatError(f"delta entry {(src, letter)} leaves the state set")
            if targets:
                d[(src, letter)] = targets
        g: dict[tuple[str, Step], frozenset[str]] = {}
        for (src, step), targets in gamma.items():
            targets = frozenset(targets)
            if src not in self.states or not targets <= self.states:
                raise AutomatonFormatError(f"gamma entry {(src, step)} leaves the state set")
            if len(step) == 0:
                raise AutomatonFormatError("gamma keys must be nonempty steps")
            if targets:
                g[(src, step)] = targets
        self.delta = d
        self.gamma = g
        self._support = None

    # -- basic queries ------------------------------------------------------

    def run(self, state: str, step: Step) -> frozenset[str]:
        """Targets of a unit run labelled by the given step.

        A singleton step fires both its gamma entries and the matching
        letter transition; their targets are unioned.
        """
        if state not in self.states:
            raise KeyError(f"unknown state {state!r}")
        targets = set(self.gamma.get((state, step), ()))
        if step.is_singleton():
            targets |= self.delta.get((state, step.letters[0]), frozenset())
        return frozenset(targets)

    def accepts(self, state: str, word: Iterable[Step]) -> bool:
        """Nondeterministic subset propagation along the word."""
        current = {state}
        for step in word:
            current = {t for s in current for t in self.run(s, step)}
            if not current:
                return False
        return bool(current & self.finals)

    def outgoing(self, state: str) -> list[tuple[Step, str]]:
        """All unit runs from a state, as (step, target) pairs, deduplicated."""
        seen: set[tuple[Step, str]] = set()
        for (src, letter), targets in self.delta.items():
            if src == state:
                for t in targets:
                    seen.add((Step((letter,)), t))
        for (src, step), targets in self.gamma.items():
            if src == state:
                for t in targets:
                    seen.add((step, t))
        return sorted(seen, key=lambda pair: (pair[0].letters, pair[1]))

    def language_upto(self, state: str, max_len: int) -> set[tuple[Step, ...]]:
        """Exactly the accepted words of at most ``max_len`` steps."""
        if state not in self.states:
            raise KeyError(f"unknown state {state!r}")
        memo: dict[tuple[str, int], set[tuple[Step, ...]]] = {}

        def words(q: str, budget: int) -> set[tuple[Step, ...]]:
            key = (q, budget)
            if key in memo:
                return memo[key]
            out: set[tuple[Step, ...]] = set()
            if q in self.finals:
                out.add(())
            if budget > 0:
                for step, target in self.outgoing(q):
                    for tail in words(target, budget - 1):
                        out.add((step,) + tail)
            memo[key] = out
            return out

        return words(state, max_len)

    # -- support order ------------------------------------------------------

    def _targets(self, state: str) -> set[str]:
        out: set[str] = set()
        for (src, _), targets in self.delta.items():
            if src == state:
                out |= targets
        for (src, _), targets in self.gamma.items():
            if src == state:
                out |= targets
        return out

    def support(self, state: str) -> frozenset[str]:
        """Smallest support-closed set containing the state (forward closure)."""
        if state not in self.states:
            raise KeyError(f"unknown state {state!r}")
        closed: set[str] = set()
        frontier = [state]
        while frontier:
            q = frontier.pop()
            if q in closed:
                continue
            closed.add(q)
            frontier.extend(self._targets(q))
        return frozenset(closed)

    def support_relation(self) -> frozenset[tuple[str, str]]:
        """The support preorder as a set of pairs (lower, upper)."""
        if self._support is None:
            pairs = set()
            for q in self.states:
                for lower in self.support(q):
                    pairs.add((lower, q))
            self._support = frozenset(pairs)
        return self._support

    def is_well_nested(self) -> bool:
        """Every transition target is strictly below its source.

        Equivalently, no transition lies on a cycle of the transition graph;
        a self-loop in particular breaks well-nestedness.
        """
        support = self.support_relation()
        for q in self.states:
            for target in self._targets(q):
                if (q, target) in support:  # q reachable from target: a cycle
                    return False
        return True

    def is_bounded(self) -> bool:
        """Finiteness of every support set; trivial for a finite state set."""
        return all(self.support(q) <= self.states for q in self.states)

    def restrict(self, keep: Iterable[str]) -> "StepAutomaton":
        """Sub-automaton on a support-closed subset of states."""
        keep = frozenset(keep)
        if not keep <= self.states:
            raise AutomatonFormatError("restriction set contains unknown states")
        for q in keep:
            if not self._targets(q) <= keep:
                raise AutomatonFormatError(f"state set is not support-closed at {q!r}")
        delta = {k: v for k, v in self.delta.items() if k[0] in keep}
        gamma = {k: v for k, v in self.gamma.items() if k[0] in keep}
        return StepAutomaton(keep, self.finals & keep, delta, gamma)

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        delta_rows = []
        for (src, letter), targets in sorted(self.delta.items()):
            for t in sorted(targets):
                delta_rows.append({"from": src, "letter": letter, "to": t})
        gamma_rows = []
        for (src, step), targets in sorted(
            self.gamma.items(), key=lambda kv: (kv[0][0], kv[0][1].letters)
        ):
            for t in sorted(targets):
                gamma_rows.append({"from": src, "step": list(step.letters), "to": t})
        return {
            "states": sorted(self.states),
            "finals": sorted(self.finals),
            "delta": delta_rows,
            "gamma": gamma_rows,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, data: dict) -> "StepAutomaton":
        try:
            states = list(data["states"])
            finals = list(data["finals"])
            delta: dict[tuple[str, str], set[str]] = {}
            for row in data.get("delta", ()):
                delta.setdefault((row["from"], row["letter"]), set()).add(row["to"])
            gamma: dict[tuple[str, Step], set[str]] = {}
            for row in data.get("gamma", ()):
                gamma.setdefault((row["from"], Step(row["step"])), set()).add(row["to"])
        except (KeyError, TypeError) as exc:
            raise AutomatonFormatError(f"malformed automaton description: {exc}") from exc
        return cls(states, finals, delta, gamma)

    @classmethod
    def from_json(cls, text: str) -> "StepAutomaton":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise AutomatonFormatError(f"not valid JSON: {exc}") from exc
        return cls.from_json_dict(data)

    def to_dot(self) -> str:
        lines = ["digraph step_automaton {", "  rankdir=LR;"]
        for q in sorted(self.states):
            shape = "doublecircle" if q in self.finals else "circle"
            lines.append(f'  "{q}" [shape={shape}];')
        edges: dict[tuple[str, str], list[str]] = {}
        for q in sorted(self.states):
            for step, target in self.outgoing(q):
                edges.setdefault((q, target), []).append(step.format())
        for (src, dst), labels in sorted(edges.items()):
            label = ", ".join(labels)
            lines.append(f'  "{src}" -> "{dst}" [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return (
            f"StepAutomaton(states={len(self.states)}, finals={len(self.finals)}, "
            f"delta={len(self.delta)}, gamma={len(self.gamma)})"
        )


def words_sorted(words: Iterable[tuple[Step, ...]]) -> list[str]:
    """Step words formatted and sorted for stable listings."""
    return sorted(format_step_word(w) for w in words)
