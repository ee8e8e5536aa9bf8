"""Expression/automaton translations via syntactic derivatives and systems.

``compile_expr`` builds a step automaton whose states are expressions: the
letter derivatives follow the usual partial-derivative clauses, and the step
derivatives interpret a parallel product synchronously: a step fires on
``x || y`` exactly when it splits into one initial step from each side that
has not yet finished, where a nullable side may finish and contribute the
empty part.  A parallel star fires a step by splitting it across one or more
fresh copies of its body; the remainders continue in parallel, followed by
the star itself.  Step enumeration for a parallel star is truncated at a
width cap (the number of simultaneously started copies); compilation reports
when the cap actually engaged rather than truncating silently.

Two consequences of this reading are deliberate and documented:

* the accepted step words linearize the members of the expression language
  (every accepted word subsumes a member pomset) rather than enumerating the
  pomsets themselves, which are not layered in general;
* a meaningful star or parallel star compiles to a state that can reach
  itself, so such automata are not well-nested in the strict sense, while
  loop-free expressions always compile to well-nested automata.

``extract`` goes the other way: an automaton is read as a linear system over
expressions (a step label becomes the parallel product of its letters),
which is solved by Gaussian state elimination with the star rule
``s(q) = M(q,q)* . (b(q) + sum of M(q,q').s(q'))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .automaton import StepAutomaton
from .expr import (
    ONE,
    ZERO,
    Par,
    ParStar,
    Seq,
    SprExpr,
    Star,
    Sum,
    Sym,
    Zero,
    alphabet,
    mk_par,
    mk_seq,
    mk_star,
    nullable,
    sum_of,
)
from .pomset import Step

__all__ = [
    "seq_after",
    "guard",
    "delta_spr",
    "gamma_spr",
    "initial_steps",
    "reachable",
    "CompileResult",
    "compile_expr",
    "SprSystem",
    "sa_to_system",
    "least_solution",
    "extract",
    "step_expr",
]

DEFAULT_WIDTH = 8


def seq_after(exprs, right: SprExpr) -> frozenset[SprExpr]:
    """Compose every expression with ``right`` on the right, simplifying units."""
    return frozenset(mk_seq(e, right) for e in exprs)


def guard(x: SprExpr, exprs) -> frozenset[SprExpr]:
    """Pass the set through when x is nullable, empty otherwise."""
    return frozenset(exprs) if nullable(x) else frozenset()


def delta_spr(x: SprExpr, letter: str) -> frozenset[SprExpr]:
    """Letter derivatives; parallel operators have none."""
    if isinstance(x, Sym):
        return frozenset((ONE,)) if x.letter == letter else frozenset()
    if isinstance(x, Sum):
        return delta_spr(x.left, letter) | delta_spr(x.right, letter)
    if isinstance(x, Seq):
        return seq_after(delta_spr(x.left, letter), x.right) | guard(
            x.left, delta_spr(x.right, letter)
        )
    if isinstance(x, Star):
        return seq_after(delta_spr(x.arg, letter), x)
    return frozenset()  # Zero, One, Par, ParStar


def _splits(step: Step):
    """All ways to split a step's letters into two (possibly empty) multisets."""
    letters = step.letters
    n = len(letters)
    seen = set()
    for bits in range(1 << n):
        left = tuple(letters[i] for i in range(n) if bits >> i & 1)
        right = tuple(letters[i] for i in range(n) if not bits >> i & 1)
        if (left, right) not in seen:
            seen.add((left, right))
            yield left, right


def _partitions(letters: tuple[str, ...]):
    """Multiset partitions into nonempty parts, deduplicated."""
    if not letters:
        yield ()
        return
    first, rest = letters[0], letters[1:]
    n = len(rest)
    seen = set()
    for bits in range(1 << n):
        with_first = (first,) + tuple(rest[i] for i in range(n) if bits >> i & 1)
        remainder = tuple(rest[i] for i in range(n) if not bits >> i & 1)
        for tail in _partitions(remainder):
            parts = tuple(sorted((tuple(sorted(with_first)),) + tail))
            if parts not in seen:
                seen.add(parts)
                yield parts


def _par_fold(exprs) -> SprExpr:
    acc = ONE
    for e in exprs:
        acc = mk_par(acc, e)
    return acc


def gamma_spr(x: SprExpr, step: Step) -> frozenset[SprExpr]:
    """Step derivatives under the synchronous reading of parallel operators."""
    if len(step) == 0:
        return frozenset()
    if isinstance(x, Sym):
        return frozenset((ONE,)) if step.letters == (x.letter,) else frozenset()
    if isinstance(x, Sum):
        return gamma_spr(x.left, step) | gamma_spr(x.right, step)
    if isinstance(x, Seq):
        return seq_after(gamma_spr(x.left, step), x.right) | guard(
            x.left, gamma_spr(x.right, step)
        )
    if isinstance(x, Star):
        return seq_after(gamma_spr(x.arg, step), x)
    if isinstance(x, Par):
        out = set()
        for left_letters, right_letters in _splits(step):
            lefts = (
                gamma_spr(x.left, Step(left_letters))
                if left_letters
                else guard(x.left, (ONE,))
            )
            if not lefts:
                continue
            rights = (
                gamma_spr(x.right, Step(right_letters))
                if right_letters
                else guard(x.right, (ONE,))
            )
            for le in lefts:
                for ri in rights:
                    out.add(mk_par(le, ri))
        return frozenset(out)
    if isinstance(x, ParStar):
        out = set()
        for parts in _partitions(step.letters):
            choices = [gamma_spr(x.arg, Step(part)) for part in parts]
            if any(not c for c in choices):
                continue
            for combo in itertools.product(*choices):
                out.add(mk_seq(_par_fold(combo), x))
        return frozenset(out)
    return frozenset()  # Zero, One


def _merge_steps(left: Step, right: Step) -> Step:
    return Step(left.letters + right.letters)


def initial_steps(x: SprExpr, width: int = DEFAULT_WIDTH) -> tuple[frozenset[Step], bool]:
    """The finite candidate set of steps that can fire on x, plus a cap flag.

    The flag is True when a parallel star with a nonempty step set was
    enumerated, because such a star admits steps with arbitrarily many
    parallel copies and only those using at most ``width`` copies are kept.
    """
    if isinstance(x, Sym):
        return frozenset((Step((x.letter,)),)), False
    if isinstance(x, Sum):
        ls, le = initial_steps(x.left, width)
        rs, re = initial_steps(x.right, width)
        return ls | rs, le or re
    if isinstance(x, Seq):
        ls, le = initial_steps(x.left, width)
        if nullable(x.left):
            rs, re = initial_steps(x.right, width)
            return ls | rs, le or re
        return ls, le
    if isinstance(x, Star):
        return initial_steps(x.arg, width)
    if isinstance(x, Par):
        ls, le = initial_steps(x.left, width)
        rs, re = initial_steps(x.right, width)
        out = set()
        if nullable(x.left):
            out |= rs
        if nullable(x.right):
            out |= ls
        for a in ls:
            for b in rs:
                out.add(_merge_steps(a, b))
        return frozenset(out), le or re
    if isinstance(x, ParStar):
        inner, engaged = initial_steps(x.arg, width)
        if not inner:
            return frozenset(), engaged
        out = set()
        for count in range(1, width + 1):
            for combo in itertools.combinations_with_replacement(sorted(inner), count):
                merged = combo[0]
                for part in combo[1:]:
                    merged = _merge_steps(merged, part)
                out.add(merged)
        return frozenset(out), True
    return frozenset(), False  # Zero, One


def reachable(x: SprExpr, width: int = DEFAULT_WIDTH) -> frozenset[SprExpr]:
    """Superset of the states reachable from x, closed under derivatives.

    Follows the structural reachable-set equations with two adjustments that
    the synchronous step derivatives require: the set for a parallel product
    contains the pairwise parallel products of the operand sets (one side
    may have finished, giving the plain operand sets), and the set for a
    parallel star contains the width-capped parallel products of body
    remainders, each followed by the star.  The root is always included.
    """
    out = _reach(x, width) | {x}
    return frozenset(out)


def _reach(x: SprExpr, width: int) -> frozenset[SprExpr]:
    if isinstance(x, Zero):
        return frozenset((ZERO,))
    if isinstance(x, Sym):
        return frozenset((x, ONE))
    if isinstance(x, Sum):
        return _reach(x.left, width) | _reach(x.right, width) | {x}
    if isinstance(x, Seq):
        left = _reach(x.left, width)
        return seq_after(left, x.right) | left | _reach(x.right, width) | {x}
    if isinstance(x, Star):
        inner = _reach(x.arg, width)
        return seq_after(inner, x) | inner | {x}
    if isinstance(x, Par):
        left = _reach(x.left, width) | {ONE}
        right = _reach(x.right, width) | {ONE}
        prods = {mk_par(le, ri) for le in left for ri in right}
        return frozenset(prods) | {x, ONE}
    if isinstance(x, ParStar):
        inner = _reach(x.arg, width)
        prods = {ONE}
        for count in range(1, width + 1):
            for combo in itertools.combinations_with_replacement(
                sorted(inner, key=str), count
            ):
                prods.add(_par_fold(combo))
        return seq_after(prods, x) | inner | {x, ONE}
    return frozenset((ONE,))  # One


@dataclass(frozen=True)
class CompileResult:
    """Outcome of compiling an expression to a step automaton."""

    automaton: StepAutomaton
    state: str
    expr_of: dict[str, SprExpr]
    width: int
    cap_engaged: bool


def compile_expr(x: SprExpr, width: int = DEFAULT_WIDTH) -> CompileResult:
    """Worklist closure of x under letter and step derivatives.

    States are named by their printed expression; finals are the nullable
    states.  A gamma entry on a singleton step is dropped when the letter
    transition already carries the same target, since a run treats them
    identically.
    """
    names: dict[SprExpr, str] = {x: str(x)}
    delta: dict[tuple[str, str], set[str]] = {}
    gamma: dict[tuple[str, Step], set[str]] = {}
    engaged = False
    work = [x]
    while work:
        expr = work.pop()
        name = names[expr]

        def visit(target: SprExpr) -> str:
            if target not in names:
                names[target] = str(target)
                work.append(target)
            return names[target]

        letter_targets: dict[str, set[SprExpr]] = {}
        for letter in sorted(alphabet(expr)):
            targets = delta_spr(expr, letter)
            if targets:
                letter_targets[letter] = set(targets)
                delta[(name, letter)] = {visit(t) for t in targets}
        steps, cap = initial_steps(expr, width)
        engaged = engaged or cap
        for step in sorted(steps):
            targets = set(gamma_spr(expr, step))
            if step.is_singleton():
                targets -= letter_targets.get(step.letters[0], set())
            if targets:
                gamma[(name, step)] = {visit(t) for t in targets}
    finals = {name for expr, name in names.items() if nullable(expr)}
    if len(set(names.values())) != len(names):
        raise AssertionError("printed expression names collided")
    automaton = StepAutomaton(names.values(), finals, delta, gamma)
    expr_of = {name: expr for expr, name in names.items()}
    return CompileResult(automaton, names[x], expr_of, width, engaged)


# ---------------------------------------------------------------------------
# Automata to expressions
# ---------------------------------------------------------------------------


def step_expr(step: Step) -> SprExpr:
    """The parallel product of a step's letters, as an expression."""
    return _par_fold(Sym(letter) for letter in step.letters)


@dataclass(frozen=True)
class SprSystem:
    """Linear system <M, b> over expressions; absent entries denote 0."""

    states: tuple[str, ...]
    matrix: dict[tuple[str, str], SprExpr]
    offset: dict[str, SprExpr]

    def coefficient(self, src: str, dst: str) -> SprExpr:
        return self.matrix.get((src, dst), ZERO)

    def constant(self, q: str) -> SprExpr:
        return self.offset.get(q, ZERO)


def sa_to_system(automaton: StepAutomaton) -> SprSystem:
    """Read an automaton as equations s(q) >= b(q) + sum M(q,q').s(q')."""
    terms: dict[tuple[str, str], list[SprExpr]] = {}
    for (src, letter), targets in sorted(automaton.delta.items()):
        for dst in sorted(targets):
            terms.setdefault((src, dst), []).append(Sym(letter))
    for (src, step), targets in sorted(
        automaton.gamma.items(), key=lambda kv: (kv[0][0], kv[0][1].letters)
    ):
        for dst in sorted(targets):
            terms.setdefault((src, dst), []).append(step_expr(step))
    matrix = {key: sum_of(parts) for key, parts in terms.items()}
    offset = {q: ONE for q in automaton.finals}
    return SprSystem(tuple(sorted(automaton.states)), matrix, offset)


def _elimination_order(states, matrix) -> list[str]:
    """Sources-first topological order when the reference graph is acyclic,
    so that a loop-free system solves by pure back-substitution."""
    children: dict[str, set[str]] = {q: set() for q in states}
    indegree: dict[str, int] = {q: 0 for q in states}
    for (src, dst), expr in matrix.items():
        if src != dst and not isinstance(expr, Zero):
            if dst not in children[src]:
                children[src].add(dst)
                indegree[dst] += 1
    order = []
    ready = sorted(q for q in states if indegree[q] == 0)
    while ready:
        q = ready.pop(0)
        order.append(q)
        for child in sorted(children[q]):
            indegree[child] -= 1
            if indegree[child] == 0:
                ready.append(child)
        ready.sort()
    leftover = sorted(q for q in states if q not in set(order))
    return order + leftover


def least_solution(system: SprSystem) -> dict[str, SprExpr]:
    """Solve the system by Gaussian state elimination with the star rule."""
    matrix = {
        key: value
        for key, value in system.matrix.items()
        if not isinstance(value, Zero)
    }
    offset = {q: system.constant(q) for q in system.states}
    order = _elimination_order(system.states, matrix)
    position = {q: i for i, q in enumerate(order)}
    records: dict[str, tuple[SprExpr, SprExpr, dict[str, SprExpr]]] = {}
    for idx, q in enumerate(order):
        loop_star = mk_star(matrix.pop((q, q), ZERO))
        row = {}
        for q2 in order[idx + 1 :]:
            coeff = matrix.pop((q, q2), None)
            if coeff is not None:
                row[q2] = coeff
        records[q] = (loop_star, offset[q], row)
        for p in order[idx + 1 :]:
            coeff = matrix.pop((p, q), None)
            if coeff is None:
                continue
            prefix = mk_seq(coeff, loop_star)
            offset[p] = sum_of((offset[p], mk_seq(prefix, offset[q])))
            for q2, m in row.items():
                key = (p, q2)
                combined = sum_of((matrix.get(key, ZERO), mk_seq(prefix, m)))
                if isinstance(combined, Zero):
                    matrix.pop(key, None)
                else:
                    matrix[key] = combined
    solution: dict[str, SprExpr] = {}
    for q in reversed(order):
        loop_star, constant, row = records[q]
        acc = constant
        for q2 in sorted(row, key=position.get):
            acc = sum_of((acc, mk_seq(row[q2], solution[q2])))
        solution[q] = mk_seq(loop_star, acc)
    return solution


def extract(automaton: StepAutomaton, state: str) -> SprExpr:
    """An expression for the language accepted from the given state."""
    if state not in automaton.states:
        raise KeyError(f"unknown state {state!r}")
    return least_solution(sa_to_system(automaton))[state]
