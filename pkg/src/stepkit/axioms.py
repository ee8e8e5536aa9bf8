"""Bounded-language verification of the concurrent-Kleene-algebra axioms.

Each axiom is checked as a property of exact size-bounded languages: an
equation must give equal member sets, and a conditional axiom is checked per
instance (premise at the bound implies conclusion at the bound, with
vacuously true instances counted separately).  This is a property harness,
not a decision procedure: it can refute an axiom with a concrete witness but
only ever confirms it for the sampled instances.

The ordering ``lhs <= rhs`` is containment modulo subsumption closure: every
member of the left language must sequentialize (subsume) some member of the
right one.  Plain set containment would falsify the exchange law already on
atoms, since ``(a||b).(c||d)`` and ``(a.c)||(b.d)`` are different pomsets;
closing under subsumption is the usual move that makes the inequational
axioms sound for enumerated pomset languages, and it leaves every equational
axiom checked as exact set equality.

The random instance generator is deliberately small and seeded so axiom
reports are reproducible: expression trees up to depth 5 over the letters
``a..d`` with the probability of a star node capped at 0.2.  For the
conditional axioms, random instances almost never satisfy the premise, so
the suite additionally samples instances constructed to satisfy it (for
example ``z = y*.x`` for the left star induction rule).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

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
    semantics,
)
from .pomset import Pomset, subsumes

__all__ = [
    "Axiom",
    "AxiomFailure",
    "AxiomReport",
    "AXIOMS",
    "axiom_ids",
    "check_axiom",
    "run_suite",
    "random_expr",
]


@dataclass(frozen=True)
class Axiom:
    axiom_id: str
    variables: tuple[str, ...]
    kind: str  # "eq", "le" or "cond"
    text: str
    sides: Callable[[Mapping[str, SprExpr]], tuple]


@dataclass(frozen=True)
class AxiomFailure:
    instantiation: dict[str, str]
    witness: str


@dataclass
class AxiomReport:
    axiom_id: str
    kind: str
    instances_checked: int = 0
    vacuous: int = 0
    failures: list[AxiomFailure] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.failures

    def merge(self, other: "AxiomReport") -> None:
        self.instances_checked += other.instances_checked
        self.vacuous += other.vacuous
        self.failures.extend(other.failures)

    def line(self) -> str:
        status = "holds" if self.holds else f"FAILS ({len(self.failures)} instances)"
        extra = f", vacuous {self.vacuous}" if self.kind == "cond" else ""
        return (
            f"{self.axiom_id:>4}  {status}  "
            f"[{self.kind}, checked {self.instances_checked}{extra}]"
        )


def _eq(axiom_id, variables, text, make):
    return Axiom(axiom_id, tuple(variables), "eq", text, make)


def _le(axiom_id, variables, text, make):
    return Axiom(axiom_id, tuple(variables), "le", text, make)


def _cond(axiom_id, variables, text, make):
    return Axiom(axiom_id, tuple(variables), "cond", text, make)


# Table of axioms.  A1 is commutativity of +; sides builders return
# (lhs, rhs) for eq/le and (premise_lhs, premise_rhs, lhs, rhs) for cond,
# where the premise reads premise_lhs <= premise_rhs.
AXIOMS: tuple[Axiom, ...] = (
    _eq("A1", "xy", "x+y = y+x", lambda e: (Sum(e["x"], e["y"]), Sum(e["y"], e["x"]))),
    _eq("A2", "xyz", "x+(y+z) = (x+y)+z",
        lambda e: (Sum(e["x"], Sum(e["y"], e["z"])), Sum(Sum(e["x"], e["y"]), e["z"]))),
    _eq("A3", "x", "x+x = x", lambda e: (Sum(e["x"], e["x"]), e["x"])),
    _eq("A4", "xyz", "(x+y).z = x.z+y.z",
        lambda e: (Seq(Sum(e["x"], e["y"]), e["z"]), Sum(Seq(e["x"], e["z"]), Seq(e["y"], e["z"])))),
    _eq("A5", "xyz", "x.(y+z) = x.y+x.z",
        lambda e: (Seq(e["x"], Sum(e["y"], e["z"])), Sum(Seq(e["x"], e["y"]), Seq(e["x"], e["z"])))),
    _eq("A6", "xyz", "x.(y.z) = (x.y).z",
        lambda e: (Seq(e["x"], Seq(e["y"], e["z"])), Seq(Seq(e["x"], e["y"]), e["z"]))),
    _eq("A7", "x", "x+0 = x", lambda e: (Sum(e["x"], ZERO), e["x"])),
    _eq("A8", "x", "0.x = 0", lambda e: (Seq(ZERO, e["x"]), ZERO)),
    _eq("A9", "x", "x.0 = 0", lambda e: (Seq(e["x"], ZERO), ZERO)),
    _eq("A10", "x", "x.1 = x", lambda e: (Seq(e["x"], ONE), e["x"])),
    _eq("A11", "x", "1.x = x", lambda e: (Seq(ONE, e["x"]), e["x"])),
    _eq("P1", "xy", "x||y = y||x", lambda e: (Par(e["x"], e["y"]), Par(e["y"], e["x"]))),
    _eq("P2", "xyz", "x||(y||z) = (x||y)||z",
        lambda e: (Par(e["x"], Par(e["y"], e["z"])), Par(Par(e["x"], e["y"]), e["z"]))),
    _eq("P3", "xyz", "(x+y)||z = x||z+y||z",
        lambda e: (Par(Sum(e["x"], e["y"]), e["z"]), Sum(Par(e["x"], e["z"]), Par(e["y"], e["z"])))),
    _eq("P4", "xyz", "x||(y+z) = x||y+x||z",
        lambda e: (Par(e["x"], Sum(e["y"], e["z"])), Sum(Par(e["x"], e["y"]), Par(e["x"], e["z"])))),
    _le("P5", "xyzh", "(x||y).(z||h) <= (x.z)||(y.h)",
        lambda e: (Seq(Par(e["x"], e["y"]), Par(e["z"], e["h"])),
                   Par(Seq(e["x"], e["z"]), Seq(e["y"], e["h"])))),
    _eq("P6", "x", "x||0 = 0", lambda e: (Par(e["x"], ZERO), ZERO)),
    _eq("P7", "x", "0||x = 0", lambda e: (Par(ZERO, e["x"]), ZERO)),
    _eq("P8", "x", "x||1 = x", lambda e: (Par(e["x"], ONE), e["x"])),
    _eq("P9", "x", "1||x = x", lambda e: (Par(ONE, e["x"]), e["x"])),
    _eq("A12", "x", "1+x.x* = x*",
        lambda e: (Sum(ONE, Seq(e["x"], Star(e["x"]))), Star(e["x"]))),
    _eq("A13", "x", "1+x*.x = x*",
        lambda e: (Sum(ONE, Seq(Star(e["x"]), e["x"])), Star(e["x"]))),
    _cond("A14", "xyz", "x+y.z <= z  =>  y*.x <= z",
          lambda e: (Sum(e["x"], Seq(e["y"], e["z"])), e["z"],
                     Seq(Star(e["y"]), e["x"]), e["z"])),
    _cond("A15", "xyz", "x+y.z <= y  =>  x.z* <= y",
          lambda e: (Sum(e["x"], Seq(e["y"], e["z"])), e["y"],
                     Seq(e["x"], Star(e["z"])), e["y"])),
    _eq("P10", "x", "1+x||x^* = x^*",
        lambda e: (Sum(ONE, Par(e["x"], ParStar(e["x"]))), ParStar(e["x"]))),
    _eq("P11", "x", "1+x^*||x = x^*",
        lambda e: (Sum(ONE, Par(ParStar(e["x"]), e["x"])), ParStar(e["x"]))),
    _cond("P12", "xyz", "x+y||z <= z  =>  y^*||x <= z",
          lambda e: (Sum(e["x"], Par(e["y"], e["z"])), e["z"],
                     Par(ParStar(e["y"]), e["x"]), e["z"])),
    _cond("P13", "xyz", "x+y||z <= y  =>  x||z^* <= y",
          lambda e: (Sum(e["x"], Par(e["y"], e["z"])), e["y"],
                     Par(e["x"], ParStar(e["z"])), e["y"])),
)

_BY_ID = {axiom.axiom_id: axiom for axiom in AXIOMS}


def axiom_ids() -> list[str]:
    return [axiom.axiom_id for axiom in AXIOMS]


def _contained(small, large) -> Pomset | None:
    """Containment modulo subsumption closure; a smallest offender otherwise.

    Plain members are covered by reflexivity of subsumption, so only the
    leftovers need the bijection search.
    """
    leftover = small.members - large.members
    if not leftover:
        return None
    offenders = []
    for u in leftover:
        if not any(subsumes(u, v) for v in large.members if len(v) == len(u)):
            offenders.append(u)
    if not offenders:
        return None
    return min(offenders, key=Pomset.sort_key)


def check_axiom(
    axiom_id: str, env: Mapping[str, SprExpr], bound: int
) -> AxiomReport:
    """Check one instantiation of an axiom at the given size bound."""
    axiom = _BY_ID[axiom_id]
    missing = [v for v in axiom.variables if v not in env]
    if missing:
        raise ValueError(f"instantiation misses variables {missing} of {axiom_id}")
    report = AxiomReport(axiom_id, axiom.kind, instances_checked=1)
    witness: Pomset | None = None
    if axiom.kind == "eq":
        lhs, rhs = axiom.sides(env)
        sl, sr = semantics(lhs, bound), semantics(rhs, bound)
        if sl.members != sr.members:
            witness = min(sl.members ^ sr.members, key=Pomset.sort_key)
    elif axiom.kind == "le":
        lhs, rhs = axiom.sides(env)
        witness = _contained(semantics(lhs, bound), semantics(rhs, bound))
    else:
        prem_l, prem_r, lhs, rhs = axiom.sides(env)
        if _contained(semantics(prem_l, bound), semantics(prem_r, bound)) is not None:
            report.vacuous = 1
        else:
            witness = _contained(semantics(lhs, bound), semantics(rhs, bound))
    if witness is not None:
        instantiation = {v: str(env[v]) for v in axiom.variables}
        report.failures.append(AxiomFailure(instantiation, _pomset_text(witness)))
    return report


def _pomset_text(p: Pomset) -> str:
    try:
        return p.to_text()
    except ValueError:
        return repr(p)


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


def random_expr(
    rng: random.Random,
    max_depth: int = 5,
    letters: Sequence[str] = "abcd",
    star_p: float = 0.2,
) -> SprExpr:
    """A random expression tree, biased toward small and star-light terms."""
    if max_depth <= 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.06:
            return ZERO
        if roll < 0.18:
            return ONE
        return Sym(rng.choice(letters))
    roll = rng.random()
    if roll < star_p:
        arg = random_expr(rng, max_depth - 1, letters, star_p)
        return Star(arg) if rng.random() < 0.5 else ParStar(arg)
    ctor = rng.choice((Sum, Seq, Par))
    return ctor(
        random_expr(rng, max_depth - 1, letters, star_p),
        random_expr(rng, max_depth - 1, letters, star_p),
    )


def _premise_satisfying_env(axiom_id: str, rng: random.Random) -> dict[str, SprExpr]:
    """An instantiation whose premise provably holds, for conditional axioms."""
    x = random_expr(rng, 3)
    other = random_expr(rng, 3)
    if axiom_id == "A14":
        return {"x": x, "y": other, "z": Seq(Star(other), x)}
    if axiom_id == "A15":
        return {"x": x, "z": other, "y": Seq(x, Star(other))}
    if axiom_id == "P12":
        return {"x": x, "y": other, "z": Par(ParStar(other), x)}
    if axiom_id == "P13":
        return {"x": x, "z": other, "y": Par(x, ParStar(other))}
    raise ValueError(f"{axiom_id} is not conditional")


def run_suite(
    bound: int = 4,
    samples: int = 200,
    seed: int = 0,
    ids: Sequence[str] | None = None,
) -> list[AxiomReport]:
    """Check every axiom on ``samples`` seeded random instantiations.

    Conditional axioms receive ``samples`` premise-satisfying constructed
    instances plus a smaller batch of unconstrained ones, which are expected
    to be mostly vacuous.
    """
    rng = random.Random(seed)
    reports = []
    for axiom in AXIOMS:
        if ids is not None and axiom.axiom_id not in ids:
            continue
        report = AxiomReport(axiom.axiom_id, axiom.kind)
        if axiom.kind == "cond":
            satisfied = 0
            attempts = 0
            while satisfied < samples:
                attempts += 1
                if attempts > samples * 10:
                    raise RuntimeError(
                        f"could not satisfy the premise of {axiom.axiom_id}"
                    )
                env = _premise_satisfying_env(axiom.axiom_id, rng)
                one = check_axiom(axiom.axiom_id, env, bound)
                satisfied += one.instances_checked - one.vacuous
                report.merge(one)
            for _ in range(max(1, samples // 8)):
                env = {v: random_expr(rng) for v in axiom.variables}
                report.merge(check_axiom(axiom.axiom_id, env, bound))
        else:
            for _ in range(samples):
                env = {v: random_expr(rng) for v in axiom.variables}
                report.merge(check_axiom(axiom.axiom_id, env, bound))
        reports.append(report)
    return reports
