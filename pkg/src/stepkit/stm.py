"""Step Turing machines: planar step tape, transition system and execution.

A machine couples a finite control with three tapes: a read-only input tape
over ``{0,1}``, a write-only output tape, and a planar step tape of ``k``
rows whose single column head reads and writes a whole column per step.
Three rule families drive it:

* ``delta`` rules read the symbol under the input head, copy it into the
  addressed row of the current planar column, and move the input head right
  (label: the empty action);
* ``gamma`` rules copy the addressed cell of the current planar column to
  the end of the output tape (label: the empty action);
* ``eta`` rules fire when the current planar column matches their read
  vector (``eps`` entries match blank cells), replace it by their write
  vector (``eps`` erases) and move the column head left or right, emitting
  their step as the run label.  A rule labelled by the empty step must leave
  the column unchanged, so its write vector has to equal its read vector.

Input head positions run from the leading blank (position 0) over the input
symbols to the trailing blank; moving right from the trailing blank stays
there, since every further cell reads blank as well.  Execution is a
breadth-first search over configurations with deduplication; ``first-accept``
returns the shallowest accepting run (ties broken by rule order in the
machine description).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .pomset import Step

__all__ = [
    "BLANK",
    "MachineFormatError",
    "MachineRuntimeError",
    "DeltaRule",
    "GammaRule",
    "EtaRule",
    "Stm",
    "StmConfig",
    "StmOutcome",
    "TraceEntry",
    "successors",
    "run",
    "accepted_words_upto",
    "render_trace",
    "ClassicalTm",
    "from_classical_tm",
]

BLANK = None  # internal representation of the blank tape symbol
_SYMBOLS = ("0", "1")


class MachineFormatError(ValueError):
    """Raised when a machine description is malformed."""


class MachineRuntimeError(RuntimeError):
    """Raised when an accepted run violates a machine guarantee."""


def _sym_to_text(value) -> str:
    return "eps" if value is BLANK else value


def _sym_from_text(text: str, where: str):
    if text in ("eps", ""):
        return BLANK
    if text in _SYMBOLS:
        return text
    raise MachineFormatError(f"bad symbol {text!r} in {where}")


@dataclass(frozen=True)
class DeltaRule:
    src: str
    read: str | None  # input symbol, BLANK for the padding cells
    row: int  # 1-based planar row written
    dst: str


@dataclass(frozen=True)
class GammaRule:
    src: str
    row: int  # 1-based planar row copied to the output
    dst: str


@dataclass(frozen=True)
class EtaRule:
    src: str
    step: Step | None  # None labels the empty action
    read: tuple
    write: tuple
    move: str  # "L" or "R"
    dst: str


class Stm:
    """Immutable machine description with load-time validation."""

    __slots__ = ("states", "initial", "finals", "height", "delta", "gamma", "eta")

    def __init__(
        self,
        states: Iterable[str],
        initial: str,
        finals: Iterable[str],
        height: int,
        delta: Sequence[DeltaRule],
        gamma: Sequence[GammaRule],
        eta: Sequence[EtaRule],
    ):
        self.states = frozenset(states)
        self.initial = initial
        self.finals = frozenset(finals)
        self.height = height
        self.delta = tuple(delta)
        self.gamma = tuple(gamma)
        self.eta = tuple(eta)
        if initial not in self.states:
            raise MachineFormatError("initial state is not a state")
        if not self.finals <= self.states:
            raise MachineFormatError("final states must be states")
        if height < 1:
            raise MachineFormatError("planar height k must be at least 1")
        for rule in self.delta:
            self._check_endpoints(rule.src, rule.dst)
            if rule.read is not BLANK and rule.read not in _SYMBOLS:
                raise MachineFormatError(f"bad input symbol in {rule}")
            self._check_row(rule.row)
        for rule in self.gamma:
            self._check_endpoints(rule.src, rule.dst)
            self._check_row(rule.row)
        for rule in self.eta:
            self._check_endpoints(rule.src, rule.dst)
            if rule.move not in ("L", "R"):
                raise MachineFormatError(f"bad move {rule.move!r} in {rule}")
            for vec in (rule.read, rule.write):
                if len(vec) != height:
                    raise MachineFormatError(
                        f"vector length {len(vec)} differs from k={height} in {rule}"
                    )
                for entry in vec:
                    if entry is not BLANK and entry not in _SYMBOLS:
                        raise MachineFormatError(f"bad symbol {entry!r} in {rule}")
            if rule.step is not None and len(rule.step) == 0:
                raise MachineFormatError("eta step must be nonempty or omitted")
            if rule.step is None and rule.write != rule.read:
                raise MachineFormatError(
                    "a rule labelled by the empty action must leave the column unchanged"
                )

    def _check_endpoints(self, src: str, dst: str) -> None:
        if src not in self.states or dst not in self.states:
            raise MachineFormatError(f"rule endpoint outside the state set: {src}->{dst}")
        if src in self.finals:
            raise MachineFormatError(f"rule originates in final state {src!r}")

    def _check_row(self, row: int) -> None:
        if not 1 <= row <= self.height:
            raise MachineFormatError(f"cell row {row} outside 1..{self.height}")

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "states": sorted(self.states),
            "initial": self.initial,
            "finals": sorted(self.finals),
            "k": self.height,
            "delta": [
                {
                    "from": r.src,
                    "read": _sym_to_text(r.read),
                    "cell_row": r.row,
                    "to": r.dst,
                }
                for r in self.delta
            ],
            "gamma": [
                {"from": r.src, "cell_row": r.row, "to": r.dst} for r in self.gamma
            ],
            "eta": [
                {
                    "from": r.src,
                    "step": list(r.step.letters) if r.step is not None else [],
                    "read": [_sym_to_text(v) for v in r.read],
                    "write": [_sym_to_text(v) for v in r.write],
                    "move": r.move,
                    "to": r.dst,
                }
                for r in self.eta
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @classmethod
    def from_json_dict(cls, data: dict) -> "Stm":
        try:
            states = list(data["states"])
            initial = data["initial"]
            finals = list(data["finals"])
            height = int(data["k"])
            delta = [
                DeltaRule(
                    row["from"],
                    _sym_from_text(row["read"], "delta"),
                    int(row["cell_row"]),
                    row["to"],
                )
                for row in data.get("delta", ())
            ]
            gamma = [
                GammaRule(row["from"], int(row["cell_row"]), row["to"])
                for row in data.get("gamma", ())
            ]
            eta = []
            for row in data.get("eta", ()):
                letters = list(row.get("step", ()))
                eta.append(
                    EtaRule(
                        row["from"],
                        Step(letters) if letters else None,
                        tuple(_sym_from_text(v, "eta read") for v in row["read"]),
                        tuple(_sym_from_text(v, "eta write") for v in row["write"]),
                        row["move"],
                        row["to"],
                    )
                )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, MachineFormatError):
                raise
            raise MachineFormatError(f"malformed machine description: {exc}") from exc
        return cls(states, initial, finals, height, delta, gamma, eta)

    @classmethod
    def from_json(cls, text: str) -> "Stm":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MachineFormatError(f"not valid JSON: {exc}") from exc
        return cls.from_json_dict(data)

    def __repr__(self) -> str:
        return (
            f"Stm(states={len(self.states)}, k={self.height}, "
            f"delta={len(self.delta)}, gamma={len(self.gamma)}, eta={len(self.eta)})"
        )


# ---------------------------------------------------------------------------
# Configurations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StmConfig:
    """One machine configuration; planar columns are stored sparsely."""

    control: str
    input_pos: int  # 0 = leading blank, 1..n = symbols, n+1 = trailing blank
    output: tuple
    planar: tuple  # sorted ((column, vector), ...) with no all-blank vectors
    head: int  # planar column head


def initial_config(machine: Stm) -> StmConfig:
    return StmConfig(machine.initial, 0, (), (), 0)


def _read_input(word: str, pos: int):
    if 1 <= pos <= len(word):
        return word[pos - 1]
    return BLANK


def _planar_column(config: StmConfig, height: int, col: int) -> tuple:
    for c, vec in config.planar:
        if c == col:
            return vec
    return (BLANK,) * height


def _planar_store(config: StmConfig, col: int, vec: tuple) -> tuple:
    rest = tuple((c, v) for c, v in config.planar if c != col)
    if any(entry is not BLANK for entry in vec):
        rest += ((col, vec),)
    return tuple(sorted(rest))


def successors(
    machine: Stm, config: StmConfig, word: str
) -> list[tuple[Step | None, StmConfig]]:
    """All one-step successors in rule order; empty for final control states."""
    if config.control in machine.finals:
        return []
    out: list[tuple[Step | None, StmConfig]] = []
    n = len(word)
    for rule in machine.delta:
        if rule.src != config.control:
            continue
        symbol = _read_input(word, config.input_pos)
        if symbol != rule.read:
            continue
        column = list(_planar_column(config, machine.height, config.head))
        column[rule.row - 1] = symbol
        nxt = replace(
            config,
            control=rule.dst,
            input_pos=min(config.input_pos + 1, n + 1),
            planar=_planar_store(config, config.head, tuple(column)),
        )
        out.append((None, nxt))
    for rule in machine.gamma:
        if rule.src != config.control:
            continue
        value = _planar_column(config, machine.height, config.head)[rule.row - 1]
        nxt = replace(config, control=rule.dst, output=config.output + (value,))
        out.append((None, nxt))
    for rule in machine.eta:
        if rule.src != config.control:
            continue
        if _planar_column(config, machine.height, config.head) != rule.read:
            continue
        nxt = replace(
            config,
            control=rule.dst,
            planar=_planar_store(config, config.head, rule.write),
            head=config.head + (1 if rule.move == "R" else -1),
        )
        out.append((rule.step, nxt))
    return out


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    label: Step | None  # None for the empty action
    config: StmConfig


@dataclass(frozen=True)
class StmOutcome:
    status: str  # "accepted" | "rejected" | "bound_exceeded"
    output: str | None
    word: tuple
    steps_used: int
    trace: tuple | None = None
    outputs: frozenset = field(default_factory=frozenset)

    @property
    def accepted(self) -> bool:
        return self.status == "accepted"


def _output_text(output: tuple) -> str:
    if any(v is BLANK for v in output):
        raise MachineRuntimeError("accepted run emitted a blank output symbol")
    return "".join(output)


def run(
    machine: Stm,
    word: str,
    max_steps: int = 10_000,
    mode: str = "first-accept",
    want_trace: bool = False,
) -> StmOutcome:
    """Breadth-first execution from the initial configuration.

    ``first-accept`` stops at the shallowest accepting configuration (ties
    resolved by rule order); ``exhaustive`` keeps exploring to the step
    bound and additionally reports every distinct accepted output.
    """
    if mode not in ("first-accept", "exhaustive"):
        raise ValueError(f"unknown mode {mode!r}")
    if any(ch not in _SYMBOLS for ch in word):
        raise ValueError("input must be a word over {0,1}")
    start = initial_config(machine)
    seen = {start}
    frontier: list[StmConfig] = [start]
    parents: dict[StmConfig, tuple[StmConfig, Step | None]] = {}
    first_hit: StmConfig | None = None
    first_depth = 0
    all_outputs: set[str] = set()

    def finish(hit: StmConfig, depth: int) -> StmOutcome:
        entries: list[TraceEntry] = []
        cursor = hit
        while cursor in parents:
            parent, label = parents[cursor]
            entries.append(TraceEntry(label, cursor))
            cursor = parent
        entries.append(TraceEntry(None, start))
        entries.reverse()
        run_word = tuple(e.label for e in entries if e.label is not None)
        return StmOutcome(
            "accepted",
            _output_text(hit.output),
            run_word,
            depth,
            tuple(entries) if want_trace else None,
            frozenset(all_outputs) if mode == "exhaustive" else frozenset(),
        )

    depth = 0
    if start.control in machine.finals:
        first_hit, first_depth = start, 0
        all_outputs.add(_output_text(start.output))
        if mode == "first-accept":
            return finish(start, 0)
    while frontier:
        if depth >= max_steps:
            if first_hit is not None:
                return finish(first_hit, first_depth)
            return StmOutcome("bound_exceeded", None, (), depth)
        next_frontier: list[StmConfig] = []
        for config in frontier:
            for label, nxt in successors(machine, config, word):
                if nxt in seen:
                    continue
                seen.add(nxt)
                parents[nxt] = (config, label)
                if nxt.control in machine.finals:
                    if first_hit is None:
                        first_hit, first_depth = nxt, depth + 1
                    all_outputs.add(_output_text(nxt.output))
                    if mode == "first-accept":
                        return finish(nxt, depth + 1)
                next_frontier.append(nxt)
        frontier = next_frontier
        depth += 1
    if first_hit is not None:
        return finish(first_hit, first_depth)
    return StmOutcome("rejected", None, (), depth)


def accepted_words_upto(machine: Stm, word: str, max_steps: int) -> set[tuple]:
    """All run labels (empty labels dropped) of accepting runs within the bound."""
    start = initial_config(machine)
    seen = {(start, ())}
    frontier: list[tuple[StmConfig, tuple]] = [(start, ())]
    accepted: set[tuple] = set()
    if start.control in machine.finals:
        accepted.add(())
    for _ in range(max_steps):
        next_frontier: list[tuple[StmConfig, tuple]] = []
        for config, labels in frontier:
            for label, nxt in successors(machine, config, word):
                nxt_labels = labels if label is None else labels + (label,)
                key = (nxt, nxt_labels)
                if key in seen:
                    continue
                seen.add(key)
                if nxt.control in machine.finals:
                    accepted.add(nxt_labels)
                next_frontier.append(key)
        if not next_frontier:
            break
        frontier = next_frontier
    return accepted


# ---------------------------------------------------------------------------
# Trace rendering
# ---------------------------------------------------------------------------


def _render_cell(value) -> str:
    return "□" if value is BLANK else value


def _render_input(word: str, pos: int) -> str:
    cells = ["□"] + list(word) + ["□"]
    pos = min(pos, len(cells) - 1)
    cells[pos] = f"[{cells[pos]}]"
    return "".join(cells)


def _render_output(output: tuple) -> str:
    if not output:
        return "[□]"
    return "□" + "".join(_render_cell(v) for v in output) + "[□]"


def _render_planar(config: StmConfig, height: int) -> list[str]:
    columns = [c for c, _ in config.planar]
    lo = min(columns + [config.head]) - 1
    hi = max(columns + [config.head]) + 1
    stored = dict(config.planar)
    rows = []
    for r in range(height):
        cells = []
        for c in range(lo, hi + 1):
            text = _render_cell(stored.get(c, (BLANK,) * height)[r])
            cells.append(f"[{text}]" if c == config.head else text)
        rows.append("".join(cells))
    return rows


def render_trace(machine: Stm, trace: Sequence[TraceEntry], word: str = "") -> str:
    """Plain-text rendering of a run, one configuration block per step.

    Configurations do not store the read-only input, so the input word is
    passed alongside the trace.
    """
    blocks = []
    for i, entry in enumerate(trace):
        label = "1" if entry.label is None else entry.label.format()
        header = f"step {i}" if i == 0 else f"step {i}  --{label}-->"
        lines = [header, f"  state:  {entry.config.control}"]
        lines.append(f"  input:  {_render_input(word, entry.config.input_pos)}")
        lines.append(f"  output: {_render_output(entry.config.output)}")
        planar_rows = _render_planar(entry.config, machine.height)
        lines.append(f"  planar: {planar_rows[0]}")
        for row in planar_rows[1:]:
            lines.append(f"          {row}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


# ---------------------------------------------------------------------------
# Classical Turing machine embedding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassicalTm:
    """Single-tape deterministic machine over {0,1,blank} with L/R moves.

    ``transitions`` maps (state, symbol) to (state, written, move); a
    missing entry halts.  The embedding below assumes the machine halts in
    an accepting state with its head on the leftmost nonblank cell (or on a
    blank when the final tape is empty).
    """

    states: frozenset
    initial: str
    accepting: frozenset
    transitions: dict

    def __post_init__(self):
        for (src, sym), (dst, out, move) in self.transitions.items():
            if src not in self.states or dst not in self.states:
                raise ValueError(f"transition endpoint outside states: {src}->{dst}")
            if move not in ("L", "R"):
                raise ValueError(f"unsupported move {move!r}: only L and R exist")
            for value in (sym, out):
                if value is not BLANK and value not in _SYMBOLS:
                    raise ValueError(f"bad tape symbol {value!r}")


def from_classical_tm(tm: ClassicalTm) -> Stm:
    """Embed a classical machine as a height-1 step Turing machine.

    The embedding has three phases: delta rules copy the input onto the
    planar tape one column per symbol, eta rules mirror the classical
    transitions one column at a time (labelled by the written symbol), and
    gamma rules stream the final tape contents to the output.  Single
    contract on the classical side: it halts on the leftmost nonblank cell.
    """
    sim = {q: f"sim {q}" for q in tm.states}
    for q in tm.accepting:
        sim[q] = "emit scan"
    states = {
        "boot",
        "load",
        "store 0",
        "store 1",
        "unwind",
        "rewind",
        "emit scan",
        "emit back",
        "emit write",
        "emit next",
        "done",
    } | {sim[q] for q in tm.states}
    delta = [
        DeltaRule("boot", BLANK, 1, "load"),
        DeltaRule("load", "0", 1, "store 0"),
        DeltaRule("load", "1", 1, "store 1"),
        DeltaRule("load", BLANK, 1, "unwind"),
    ]
    eta = [
        EtaRule("store 0", None, ("0",), ("0",), "R", "load"),
        EtaRule("store 1", None, ("1",), ("1",), "R", "load"),
        EtaRule("unwind", None, (BLANK,), (BLANK,), "L", "rewind"),
        EtaRule("rewind", None, ("0",), ("0",), "L", "rewind"),
        EtaRule("rewind", None, ("1",), ("1",), "L", "rewind"),
        EtaRule("rewind", None, (BLANK,), (BLANK,), "R", sim[tm.initial]),
    ]
    for (src, sym), (dst, out, move) in sorted(
        tm.transitions.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))
    ):
        if src in tm.accepting:
            continue
        if out is not BLANK:
            label = Step((out,))
        elif sym is not BLANK:
            label = Step((sym,))
        else:
            label = None
        eta.append(EtaRule(sim[src], label, (sym,), (out,), move, sim[dst]))
    eta += [
        EtaRule("emit scan", None, ("0",), ("0",), "R", "emit back"),
        EtaRule("emit scan", None, ("1",), ("1",), "R", "emit back"),
        EtaRule("emit scan", None, (BLANK,), (BLANK,), "R", "done"),
        EtaRule("emit back", None, ("0",), ("0",), "L", "emit write"),
        EtaRule("emit back", None, ("1",), ("1",), "L", "emit write"),
        EtaRule("emit back", None, (BLANK,), (BLANK,), "L", "emit write"),
        EtaRule("emit next", None, ("0",), ("0",), "R", "emit scan"),
        EtaRule("emit next", None, ("1",), ("1",), "R", "emit scan"),
    ]
    gamma = [GammaRule("emit write", 1, "emit next")]
    return Stm(states, "boot", {"done"}, 1, delta, gamma, eta)
