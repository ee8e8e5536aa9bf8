"""Finite labelled posets, pomsets, steps and step words.

A pomset (partially ordered multiset) is an isomorphism class of finite
labelled posets.  This module represents a pomset by a canonical member of
its class, so that structural equality of :class:`Pomset` values coincides
with labelled-poset isomorphism.  On top of that it provides the two pomset
compositions (sequential and parallel), recognition of series-parallel
pomsets via both N-shape scanning and recursive factorization, the unique
sequential/parallel factorizations, width and depth measures, a subsumption
check, and the step/step-word vocabulary used by step automata.

Everything here is immutable and pure; sizes are expected to stay at desk
scale (a dozen nodes or so), so the algorithms favour clarity and exactness
over asymptotics.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "NotSeriesParallelError",
    "PomsetNotationError",
    "LabelledPoset",
    "Pomset",
    "Step",
    "EMPTY",
    "primitive",
    "step_pomset",
    "par_compose",
    "seq_compose",
    "is_isomorphic",
    "is_n_free",
    "is_series_parallel",
    "seq_factorize",
    "par_factorize",
    "width",
    "depth",
    "subsumes",
    "step_word_to_pomset",
    "enumerate_pomsets",
    "parse_pomset",
    "parse_step",
    "parse_step_word",
    "format_step_word",
]

_LETTERS = frozenset("abcdefghijklmnopqrstuvwxyz")


class NotSeriesParallelError(ValueError):
    """Raised by operations that are only defined on series-parallel pomsets."""


class PomsetNotationError(ValueError):
    """Raised when pomset or step-word notation cannot be parsed."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# ---------------------------------------------------------------------------
# Labelled posets
# ---------------------------------------------------------------------------


class LabelledPoset:
    """A concrete labelled poset: carrier set, full partial order, labels.

    ``order`` holds the complete relation including the diagonal; the
    constructor checks reflexivity, antisymmetry and transitivity, and that
    ``labels`` is total on the carrier.
    """

    __slots__ = ("carrier", "order", "labels")

    def __init__(
        self,
        carrier: Iterable[int],
        order: Iterable[tuple[int, int]],
        labels: Mapping[int, str],
    ):
        carrier_t = tuple(carrier)
        if len(set(carrier_t)) != len(carrier_t):
            raise ValueError("carrier contains duplicate node identifiers")
        nodes = set(carrier_t)
        order_f = frozenset((a, b) for a, b in order)
        for a, b in order_f:
            if a not in nodes or b not in nodes:
                raise ValueError(f"order pair {(a, b)} mentions a node outside the carrier")
        for a in nodes:
            if (a, a) not in order_f:
                raise ValueError(f"order is not reflexive at node {a}")
        for a, b in order_f:
            if a != b and (b, a) in order_f:
                raise ValueError(f"order is not antisymmetric on {a}, {b}")
        for a, b in order_f:
            for c, d in order_f:
                if b == c and (a, d) not in order_f:
                    raise ValueError(f"order is not transitive: {(a, b)} and {(c, d)}")
        labels_d = dict(labels)
        for a in nodes:
            if a not in labels_d:
                raise ValueError(f"node {a} has no label")
            if labels_d[a] not in _LETTERS:
                raise ValueError(f"label {labels_d[a]!r} is not a lowercase letter")
        self.carrier = carrier_t
        self.order = order_f
        self.labels = labels_d

    def __len__(self) -> int:
        return len(self.carrier)

    def __repr__(self) -> str:
        pairs = sorted((a, b) for a, b in self.order if a != b)
        lab = {a: self.labels[a] for a in self.carrier}
        return f"LabelledPoset(nodes={lab}, strict={pairs})"

    def strict_pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((a, b) for a, b in self.order if a != b)


# ---------------------------------------------------------------------------
# Canonical forms
# ---------------------------------------------------------------------------


def _refine(n: int, colour: list[int], down: list[frozenset], up: list[frozenset]) -> list[int]:
    """Iterated colour refinement by (own colour, down colours, up colours)."""
    while True:
        sigs = [
            (
                colour[i],
                tuple(sorted(colour[j] for j in down[i])),
                tuple(sorted(colour[j] for j in up[i])),
            )
            for i in range(n)
        ]
        ranks = {sig: r for r, sig in enumerate(sorted(set(sigs)))}
        new = [ranks[sigs[i]] for i in range(n)]
        if new == colour:
            return colour
        colour = new


def _canonical_form(
    labels: Sequence[str], strict: Iterable[tuple[int, int]]
) -> tuple[tuple[str, ...], tuple[tuple[int, int], ...]]:
    """Canonical relabelling of a labelled poset given by strict order pairs.

    Colour refinement with individualization on ties; among all refinement
    branches the lexicographically least (labels, pairs) encoding is chosen,
    which makes the result invariant under isomorphism.  Nodes that share a
    label and have identical down- and up-sets are interchangeable, so only
    one representative per such twin group is branched on.
    """
    n = len(labels)
    pairs = frozenset(strict)
    down = [frozenset(a for a, b in pairs if b == i) for i in range(n)]
    up = [frozenset(b for a, b in pairs if a == i) for i in range(n)]
    label_rank = {lab: r for r, lab in enumerate(sorted(set(labels)))}
    best: list = [None]

    def encode(colour: list[int]) -> tuple:
        pos = sorted(range(n), key=lambda i: colour[i])
        where = [0] * n
        for p, i in enumerate(pos):
            where[i] = p
        out_labels = tuple(labels[i] for i in pos)
        out_pairs = tuple(sorted((where[a], where[b]) for a, b in pairs))
        return (out_labels, out_pairs)

    def search(colour: list[int]) -> None:
        colour = _refine(n, colour, down, up)
        by_colour: dict[int, list[int]] = {}
        for i in range(n):
            by_colour.setdefault(colour[i], []).append(i)
        tied = [c for c, members in by_colour.items() if len(members) > 1]
        if not tied:
            enc = encode(colour)
            if best[0] is None or enc < best[0]:
                best[0] = enc
            return
        members = by_colour[min(tied)]
        twins: dict[tuple, int] = {}
        for i in members:
            twins.setdefault((labels[i], down[i], up[i]), i)
        for i in twins.values():
            branched = [c * 2 for c in colour]
            branched[i] -= 1
            search(branched)

    search([label_rank[lab] for lab in labels])
    return best[0]


class Pomset:
    """An isomorphism class of labelled posets, held in canonical form.

    Nodes are ``0..n-1`` in canonical order; ``labels[i]`` is the letter of
    node ``i`` and ``pairs`` is the strict part of the partial order.  Two
    pomsets compare equal exactly when their underlying posets are
    isomorphic.
    """

    __slots__ = ("labels", "pairs", "_hash")

    def __init__(
        self,
        labels: Sequence[str],
        strict_pairs: Iterable[tuple[int, int]] = (),
        *,
        _canonical: bool = False,
    ):
        if _canonical:
            self.labels = tuple(labels)
            self.pairs = frozenset(strict_pairs)
        else:
            for letter in labels:
                if letter not in _LETTERS:
                    raise ValueError(f"{letter!r} is not a lowercase letter")
            lab, pairs = _canonical_form(tuple(labels), strict_pairs)
            self.labels = lab
            self.pairs = frozenset(pairs)
        self._hash = hash((self.labels, tuple(sorted(self.pairs))))

    @classmethod
    def from_poset(cls, lp: LabelledPoset) -> "Pomset":
        index = {node: i for i, node in enumerate(lp.carrier)}
        labels = [lp.labels[node] for node in lp.carrier]
        strict = [(index[a], index[b]) for a, b in lp.order if a != b]
        return cls(labels, strict)

    def to_poset(self) -> LabelledPoset:
        n = len(self.labels)
        order = set(self.pairs) | {(i, i) for i in range(n)}
        return LabelledPoset(range(n), order, dict(enumerate(self.labels)))

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Pomset)
            and self.labels == other.labels
            and self.pairs == other.pairs
        )

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Pomset") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return (len(self.labels), self.labels, tuple(sorted(self.pairs)))

    def __repr__(self) -> str:
        try:
            return f"Pomset({self.to_text()!r})"
        except NotSeriesParallelError:
            return f"Pomset(labels={self.labels}, strict={sorted(self.pairs)})"

    def leq(self, a: int, b: int) -> bool:
        return a == b or (a, b) in self.pairs

    def down_sets(self) -> list[frozenset]:
        n = len(self.labels)
        return [frozenset(a for a, b in self.pairs if b == i) for i in range(n)]

    def up_sets(self) -> list[frozenset]:
        n = len(self.labels)
        return [frozenset(b for a, b in self.pairs if a == i) for i in range(n)]

    def restricted_to(self, nodes: Iterable[int]) -> "Pomset":
        """The induced sub-pomset on the given node set."""
        keep = sorted(set(nodes))
        index = {node: i for i, node in enumerate(keep)}
        labels = [self.labels[node] for node in keep]
        strict = [
            (index[a], index[b]) for a, b in self.pairs if a in index and b in index
        ]
        return Pomset(labels, strict)

    def to_text(self) -> str:
        """Canonical series-parallel notation; raises on non-SP pomsets."""
        return _sp_text(self, _PREC_TOP)

    def is_step(self) -> bool:
        return not self.pairs


EMPTY = Pomset((), ())


def primitive(letter: str) -> Pomset:
    """The one-node pomset carrying the given letter."""
    if letter not in _LETTERS:
        raise ValueError(f"{letter!r} is not a lowercase letter")
    return Pomset((letter,), (), _canonical=True)


def step_pomset(letters: Iterable[str]) -> Pomset:
    """The discretely ordered pomset over a multiset of letters."""
    labels = tuple(sorted(letters))
    for letter in labels:
        if letter not in _LETTERS:
            raise ValueError(f"{letter!r} is not a lowercase letter")
    return Pomset(labels, (), _canonical=True)


def par_compose(u: Pomset, v: Pomset) -> Pomset:
    """Parallel composition: disjoint union of carriers and orders."""
    m = len(u)
    labels = u.labels + v.labels
    strict = list(u.pairs) + [(a + m, b + m) for a, b in v.pairs]
    return Pomset(labels, strict)


def seq_compose(u: Pomset, v: Pomset) -> Pomset:
    """Sequential composition: disjoint union plus every u-node below every v-node."""
    m = len(u)
    k = len(v)
    labels = u.labels + v.labels
    strict = list(u.pairs) + [(a + m, b + m) for a, b in v.pairs]
    strict += [(a, b + m) for a in range(m) for b in range(k)]
    return Pomset(labels, strict)


# ---------------------------------------------------------------------------
# Isomorphism (search-based, independent of canonicalization)
# ---------------------------------------------------------------------------


def is_isomorphic(u: LabelledPoset, v: LabelledPoset) -> bool:
    """Label- and order-preserving bijection test by backtracking search.

    Prunes on label multisets and per-node (label, in-degree, out-degree)
    profiles before searching; deliberately does not reuse the canonical
    form so the two equality routes stay independent.
    """
    if len(u) != len(v):
        return False
    pu = Pomset.from_poset(u) if not isinstance(u, Pomset) else u
    # Work on index-normalized data.
    un, up_, ud, ul = _search_data(u)
    vn, vp_, vd, vl = _search_data(v)
    if sorted(ul) != sorted(vl):
        return False

    def profile(i, down, up, lab):
        return (lab[i], len(down[i]), len(up[i]))

    uprof = sorted(profile(i, ud, up_, ul) for i in range(un))
    vprof = sorted(profile(i, vd, vp_, vl) for i in range(vn))
    if uprof != vprof:
        return False

    assignment: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == un:
            return True
        want = (ul[i], len(ud[i]), len(up_[i]))
        for j in range(vn):
            if j in used or (vl[j], len(vd[j]), len(vp_[j])) != want:
                continue
            ok = True
            for k, jk in assignment.items():
                if ((k in ud[i]) != (jk in vd[j])) or ((k in up_[i]) != (jk in vp_[j])):
                    ok = False
                    break
            if ok:
                assignment[i] = j
                used.add(j)
                if extend(i + 1):
                    return True
                del assignment[i]
                used.discard(j)
        return False

    return extend(0)


def _search_data(lp) -> tuple[int, list[frozenset], list[frozenset], list[str]]:
    if isinstance(lp, Pomset):
        return len(lp), lp.up_sets(), lp.down_sets(), list(lp.labels)
    index = {node: i for i, node in enumerate(lp.carrier)}
    n = len(lp.carrier)
    down = [set() for _ in range(n)]
    up = [set() for _ in range(n)]
    for a, b in lp.order:
        if a != b:
            up[index[a]].add(index[b])
            down[index[b]].add(index[a])
    labels = [lp.labels[node] for node in lp.carrier]
    return n, [frozenset(s) for s in up], [frozenset(s) for s in down], labels


# ---------------------------------------------------------------------------
# Series-parallel recognition and factorization
# ---------------------------------------------------------------------------

_N_PATTERNS = None


def _n_patterns():
    """All relation sets over 4 role-assigned points matching the N shape."""
    global _N_PATTERNS
    if _N_PATTERNS is None:
        base = {(0, 1), (2, 3), (0, 3)}
        pats = set()
        for perm in itertools.permutations(range(4)):
            pats.add(frozenset((perm[a], perm[b]) for a, b in base))
        _N_PATTERNS = pats
    return _N_PATTERNS


def is_n_free(u: Pomset) -> bool:
    """Quadruple scan: no four distinct points induce exactly an N shape."""
    n = len(u)
    if n < 4:
        return True
    pats = _n_patterns()
    for quad in itertools.combinations(range(n), 4):
        induced = frozenset(
            (i, j)
            for i, j in itertools.permutations(range(4), 2)
            if (quad[i], quad[j]) in u.pairs
        )
        if induced in pats:
            return False
    return True


def _topological(u: Pomset) -> list[int]:
    order = []
    down = [set(s) for s in u.down_sets()]
    pending = sorted(range(len(u)))
    placed: set[int] = set()
    while pending:
        for node in pending:
            if down[node] <= placed:
                order.append(node)
                placed.add(node)
                pending.remove(node)
                break
        else:
            raise AssertionError("cyclic order in pomset")
    return order


def _sequential_cuts(u: Pomset) -> list[list[int]]:
    """Maximal sequential splitting of u's nodes, in order.

    Every valid cut set (a down-closed prefix A with A x rest entirely
    ordered) is a prefix of any topological order, so scanning prefixes of
    one topological order finds them all.  Returns the list of blocks
    between consecutive cuts; a single block means u is non-sequential.
    """
    n = len(u)
    if n == 0:
        return []
    topo = _topological(u)
    above = u.up_sets()
    blocks = []
    start = 0
    for end in range(1, n):
        rest = set(topo[end:])
        if all(rest <= above[a] for a in topo[:end]):
            blocks.append(topo[start:end])
            start = end
    blocks.append(topo[start:])
    return blocks


def _parallel_components(u: Pomset) -> list[list[int]]:
    """Connected components of the comparability graph."""
    n = len(u)
    adj = [set() for _ in range(n)]
    for a, b in u.pairs:
        adj[a].add(b)
        adj[b].add(a)
    seen: set[int] = set()
    comps = []
    for start in range(n):
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def is_series_parallel(u: Pomset) -> bool:
    """Membership in SP by recursive decomposition (independent of is_n_free)."""
    n = len(u)
    if n <= 1:
        return True
    comps = _parallel_components(u)
    if len(comps) > 1:
        return all(is_series_parallel(u.restricted_to(c)) for c in comps)
    blocks = _sequential_cuts(u)
    if len(blocks) > 1:
        return all(is_series_parallel(u.restricted_to(b)) for b in blocks)
    return False


def seq_factorize(u: Pomset) -> list[Pomset]:
    """The unique sequential factorization into non-sequential factors."""
    if len(u) == 0:
        raise NotSeriesParallelError("cannot factorize the empty pomset")
    if not is_series_parallel(u):
        raise NotSeriesParallelError("not series-parallel")
    return [u.restricted_to(block) for block in _sequential_cuts(u)]


def par_factorize(u: Pomset) -> list[Pomset]:
    """The unique parallel factorization, as a canonically sorted multiset."""
    if len(u) == 0:
        raise NotSeriesParallelError("cannot factorize the empty pomset")
    if not is_series_parallel(u):
        raise NotSeriesParallelError("not series-parallel")
    factors = [u.restricted_to(c) for c in _parallel_components(u)]
    return sorted(factors, key=Pomset.sort_key)


def width(u: Pomset) -> int:
    """Size of a maximum antichain, by exhaustive scan with pruning."""
    n = len(u)
    if n == 0:
        return 0
    comparable = [set() for _ in range(n)]
    for a, b in u.pairs:
        comparable[a].add(b)
        comparable[b].add(a)
    best = 0

    def grow(candidates: list[int], chosen: int) -> None:
        nonlocal best
        if chosen > best:
            best = chosen
        if chosen + len(candidates) <= best:
            return
        for idx, node in enumerate(candidates):
            rest = [m for m in candidates[idx + 1 :] if m not in comparable[node]]
            grow(rest, chosen + 1)

    grow(list(range(n)), 0)
    return best


def depth(u: Pomset) -> int:
    """Nesting depth via the unique factorization (0 for empty/primitive)."""
    if len(u) <= 1:
        return 0
    if not is_series_parallel(u):
        raise NotSeriesParallelError("depth is defined on series-parallel pomsets only")
    comps = _parallel_components(u)
    if len(comps) > 1:
        return 1 + max(depth(u.restricted_to(c)) for c in comps)
    blocks = _sequential_cuts(u)
    return 1 + max(depth(u.restricted_to(b)) for b in blocks)


def subsumes(u: Pomset, v: Pomset) -> bool:
    """True when u carries at least v's order: some label-preserving bijection
    h from v's nodes to u's nodes satisfies x <= y (in v) implies h(x) <= h(y)."""
    if len(u) != len(v) or sorted(u.labels) != sorted(v.labels):
        return False
    n = len(u)
    assignment: dict[int, int] = {}
    used: set[int] = set()
    v_down = v.down_sets()
    # Assign v-nodes in topological order so every ordered predecessor is
    # already placed when its constraint is checked.
    topo = _topological(v)

    def extend(pos: int) -> bool:
        if pos == n:
            return True
        i = topo[pos]
        for j in range(n):
            if j in used or u.labels[j] != v.labels[i]:
                continue
            if all(u.leq(assignment[x], j) for x in v_down[i]):
                assignment[i] = j
                used.add(j)
                if extend(pos + 1):
                    return True
                del assignment[i]
                used.discard(j)
        return False

    return extend(0)


# ---------------------------------------------------------------------------
# Steps and step words
# ---------------------------------------------------------------------------


class Step:
    """A nonempty multiset of letters executed simultaneously.

    The empty step is constructible (it appears as padding inside
    synchronous products) but is never a valid transition label or step-word
    element.
    """

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[str]):
        letters_t = tuple(sorted(letters))
        for letter in letters_t:
            if letter not in _LETTERS and letter not in ("0", "1"):
                raise ValueError(f"{letter!r} is not a step action")
        object.__setattr__(self, "letters", letters_t)

    def __setattr__(self, name, value):
        raise AttributeError("Step is immutable")

    def __eq__(self, other) -> bool:
        return isinstance(other, Step) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(("Step", self.letters))

    def __lt__(self, other: "Step") -> bool:
        return (len(self.letters), self.letters) < (len(other.letters), other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __repr__(self) -> str:
        return f"Step({self.format()!r})"

    def is_singleton(self) -> bool:
        return len(self.letters) == 1

    def merge(self, other: "Step") -> "Step":
        return Step(self.letters + other.letters)

    def to_pomset(self) -> Pomset:
        return step_pomset(self.letters)

    def format(self) -> str:
        if len(self.letters) == 1:
            return self.letters[0]
        return "<" + ",".join(self.letters) + ">"


StepWord = tuple  # a step word is a plain tuple of Step values


def step_word_to_pomset(word: Sequence[Step]) -> Pomset:
    """Interpret a run label sequence as the layered pomset U1 . U2 ... Un."""
    result = EMPTY
    for step in word:
        result = seq_compose(result, step.to_pomset())
    return result


def format_step_word(word: Sequence[Step]) -> str:
    if not word:
        return "1"
    return ".".join(step.format() for step in word)


def parse_step(text: str) -> Step:
    word = parse_step_word(text)
    if len(word) != 1:
        raise PomsetNotationError("expected a single step", 0)
    return word[0]


def parse_step_word(text: str) -> tuple[Step, ...]:
    """Parse ``a.<b,c>.d`` notation; ``1`` denotes the empty word."""
    stripped = text.strip()
    if stripped == "1":
        return ()
    steps: list[Step] = []
    pos = 0
    expect_step = True
    while pos < len(stripped):
        ch = stripped[pos]
        if ch == " ":
            pos += 1
            continue
        if not expect_step:
            if ch != ".":
                raise PomsetNotationError("expected '.' between steps", pos)
            pos += 1
            expect_step = True
            continue
        if ch == "<":
            end = stripped.find(">", pos)
            if end < 0:
                raise PomsetNotationError("unterminated step bracket", pos)
            letters = [part.strip() for part in stripped[pos + 1 : end].split(",")]
            if any(len(part) != 1 for part in letters):
                raise PomsetNotationError("malformed step contents", pos)
            steps.append(Step(letters))
            pos = end + 1
        elif ch in _LETTERS or ch in "01":
            steps.append(Step((ch,)))
            pos += 1
        else:
            raise PomsetNotationError(f"unexpected character {ch!r}", pos)
        expect_step = False
    if expect_step:
        raise PomsetNotationError("dangling '.' at end of step word", len(stripped))
    return tuple(steps)


# ---------------------------------------------------------------------------
# Series-parallel text notation
# ---------------------------------------------------------------------------

_PREC_TOP = 0
_PREC_PAR = 1
_PREC_SEQ = 2


def _sp_text(u: Pomset, outer: int) -> str:
    n = len(u)
    if n == 0:
        return "1"
    if n == 1:
        return u.labels[0]
    comps = _parallel_components(u)
    if len(comps) > 1:
        parts = sorted(_sp_text(u.restricted_to(c), _PREC_PAR) for c in comps)
        text = "||".join(parts)
        return f"({text})" if outer > _PREC_PAR else text
    blocks = _sequential_cuts(u)
    if len(blocks) > 1:
        text = ".".join(_sp_text(u.restricted_to(b), _PREC_SEQ) for b in blocks)
        return f"({text})" if outer > _PREC_SEQ else text
    raise NotSeriesParallelError("pomset has no series-parallel notation")


def parse_pomset(text: str) -> Pomset:
    """Parse SP notation: ``1``, letters, ``.`` (sequential), ``||`` (parallel)."""
    parser = _SpParser(text)
    result = parser.parse_par()
    parser.skip_ws()
    if parser.pos != len(parser.text):
        raise PomsetNotationError("trailing input after pomset", parser.pos)
    return result


class _SpParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse_par(self) -> Pomset:
        result = self.parse_seq()
        while True:
            self.skip_ws()
            if self.text.startswith("||", self.pos):
                self.pos += 2
                result = par_compose(result, self.parse_seq())
            else:
                return result

    def parse_seq(self) -> Pomset:
        result = self.parse_atom()
        while self.peek() == ".":
            self.pos += 1
            result = seq_compose(result, self.parse_atom())
        return result

    def parse_atom(self) -> Pomset:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.parse_par()
            if self.peek() != ")":
                raise PomsetNotationError("expected ')'", self.pos)
            self.pos += 1
            return inner
        if ch == "1":
            self.pos += 1
            return EMPTY
        if ch in _LETTERS:
            self.pos += 1
            return primitive(ch)
        raise PomsetNotationError(f"unexpected character {ch!r}", self.pos)


# ---------------------------------------------------------------------------
# Exhaustive enumeration
# ---------------------------------------------------------------------------


def enumerate_pomsets(max_nodes: int, alphabet: Iterable[str]) -> list[Pomset]:
    """Every pomset with at most ``max_nodes`` nodes over the given letters.

    Grows pomsets one maximal node at a time (any finite poset arises this
    way) and deduplicates through canonical forms, so the result contains
    exactly one representative per isomorphism class, sorted by size.
    """
    letters = sorted(set(alphabet))
    levels: list[dict[Pomset, Pomset]] = [{EMPTY: EMPTY}]
    for n in range(1, max_nodes + 1):
        level: dict[Pomset, Pomset] = {}
        for parent in levels[n - 1]:
            m = len(parent)
            down = parent.down_sets()
            for bits in range(1 << m):
                preds = [i for i in range(m) if bits >> i & 1]
                pred_set = set(preds)
                if any(not down[i] <= pred_set for i in preds):
                    continue
                strict = list(parent.pairs) + [(i, m) for i in preds]
                for letter in letters:
                    child = Pomset(parent.labels + (letter,), strict)
                    level.setdefault(child, child)
        levels.append(level)
    out: list[Pomset] = []
    for level in levels:
        out.extend(sorted(level, key=Pomset.sort_key))
    return out
