"""Ready-made machines: demonstration STMs and classical TM descriptions.

The copy machine is the minimal three-phase loop (read a symbol, emit it,
shift the column head).  The bitwise-NOT builders exist in two planar
heights to exhibit step parallelism: the height-4 machine flips four rows
per column step, so its core pass over n columns takes n labelled steps
where the height-1 machine needs 4n for the same bits.

The classical machines (binary increment, identity, odd parity) follow the
convention required by the embedding: they halt in their accepting state
with the head on the leftmost nonblank cell.
"""

from __future__ import annotations

import itertools

from .pomset import Step
from .stm import BLANK, ClassicalTm, DeltaRule, EtaRule, GammaRule, Stm

__all__ = [
    "copy_machine",
    "bitwise_not_machine",
    "increment_tm",
    "identity_tm",
    "parity_tm",
]


def copy_machine() -> Stm:
    """Copies the input to the output, one delta/gamma pair per symbol."""
    states = ["boot", "load", "put", "shift", "done"]
    delta = [
        DeltaRule("boot", BLANK, 1, "load"),
        DeltaRule("load", "0", 1, "put"),
        DeltaRule("load", "1", 1, "put"),
        DeltaRule("load", BLANK, 1, "done"),
    ]
    gamma = [GammaRule("put", 1, "shift")]
    eta = [
        EtaRule("shift", Step("0"), ("0",), ("0",), "R", "load"),
        EtaRule("shift", Step("1"), ("1",), ("1",), "R", "load"),
    ]
    return Stm(states, "boot", ["done"], 1, delta, gamma, eta)


def bitwise_not_machine(height: int) -> Stm:
    """Flips every loaded bit in a single left-to-right planar pass.

    The input is loaded column-major into ``height`` rows (its length must
    be a multiple of ``height``); the pass states carry one eta rule per
    column content, labelled with one ``n`` action per row, so the run word
    length counts exactly the column steps of the pass.
    """
    if height < 1:
        raise ValueError("height must be positive")
    rows = range(1, height + 1)
    states = (
        ["boot"]
        + [f"load {r}" for r in rows]
        + ["shift", "unwind", "rewind", "pass", "done"]
    )
    delta = [DeltaRule("boot", BLANK, 1, "load 1")]
    for r in rows:
        after = f"load {r + 1}" if r < height else "shift"
        delta.append(DeltaRule(f"load {r}", "0", r, after))
        delta.append(DeltaRule(f"load {r}", "1", r, after))
    delta.append(DeltaRule("load 1", BLANK, 1, "unwind"))
    eta = []
    full_columns = list(itertools.product(("0", "1"), repeat=height))
    for column in full_columns:
        eta.append(EtaRule("shift", None, column, column, "R", "load 1"))
        eta.append(EtaRule("rewind", None, column, column, "L", "rewind"))
    blank_column = (BLANK,) * height
    eta.append(EtaRule("unwind", None, blank_column, blank_column, "L", "rewind"))
    eta.append(EtaRule("rewind", None, blank_column, blank_column, "R", "pass"))
    flip = {"0": "1", "1": "0"}
    label = Step("n" * height)
    for column in full_columns:
        flipped = tuple(flip[v] for v in column)
        eta.append(EtaRule("pass", label, column, flipped, "R", "pass"))
    eta.append(EtaRule("pass", None, blank_column, blank_column, "R", "done"))
    return Stm(states, "boot", ["done"], height, delta, [], eta)


def increment_tm() -> ClassicalTm:
    """Binary increment, most significant bit first (1011 -> 1100)."""
    transitions = {
        ("scan", "0"): ("scan", "0", "R"),
        ("scan", "1"): ("scan", "1", "R"),
        ("scan", BLANK): ("carry", BLANK, "L"),
        ("carry", "1"): ("carry", "0", "L"),
        ("carry", "0"): ("back", "1", "L"),
        ("carry", BLANK): ("back", "1", "L"),
        ("back", "0"): ("back", "0", "L"),
        ("back", "1"): ("back", "1", "L"),
        ("back", BLANK): ("halt", BLANK, "R"),
    }
    return ClassicalTm(
        frozenset(("scan", "carry", "back", "halt")),
        "scan",
        frozenset(("halt",)),
        transitions,
    )


def identity_tm() -> ClassicalTm:
    """Halts immediately; the output is the untouched input."""
    return ClassicalTm(frozenset(("halt",)), "halt", frozenset(("halt",)), {})


def parity_tm() -> ClassicalTm:
    """Erases the input and leaves a single parity bit (1 for an odd count)."""
    transitions = {
        ("even", "0"): ("even", BLANK, "R"),
        ("even", "1"): ("odd", BLANK, "R"),
        ("even", BLANK): ("stop0", "0", "L"),
        ("odd", "0"): ("odd", BLANK, "R"),
        ("odd", "1"): ("even", BLANK, "R"),
        ("odd", BLANK): ("stop1", "1", "L"),
        ("stop0", BLANK): ("halt", BLANK, "R"),
        ("stop1", BLANK): ("halt", BLANK, "R"),
    }
    return ClassicalTm(
        frozenset(("even", "odd", "stop0", "stop1", "halt")),
        "even",
        frozenset(("halt",)),
        transitions,
    )
