"""Size-bounded pomset languages and their composition operators.

A :class:`PomsetLanguage` is a finite set of pomsets together with a node
bound ``S`` and an ``exact`` marker meaning "these are *all* members of the
denoted language with at most S nodes".  The five composition operators
(union, sequential, parallel, star, parallel star) and substitution keep
that bound: any composite exceeding it is discarded, and exactness is
preserved because every bounded member of a composite has bounded parts.

Star and parallel star are truncated at S iterations, which is enough:
each additional nonempty factor contributes at least one node.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .pomset import (
    EMPTY,
    NotSeriesParallelError,
    Pomset,
    par_compose,
    seq_compose,
    _parallel_components,
    _sequential_cuts,
)

__all__ = [
    "PomsetLanguage",
    "lang_union",
    "lang_seq",
    "lang_par",
    "lang_star",
    "lang_parstar",
    "lang_substitute",
]


class PomsetLanguage:
    """An explicit, size-bounded set of pomsets."""

    __slots__ = ("members", "bound", "exact")

    def __init__(self, members: Iterable[Pomset], bound: int, exact: bool = True):
        if bound < 0:
            raise ValueError("size bound must be non-negative")
        kept = frozenset(p for p in members if len(p) <= bound)
        if len(kept) != len(frozenset(members)):
            raise ValueError("language member exceeds the size bound")
        self.members = kept
        self.bound = bound
        self.exact = exact

    @classmethod
    def empty(cls, bound: int) -> "PomsetLanguage":
        return cls((), bound)

    @classmethod
    def unit(cls, bound: int) -> "PomsetLanguage":
        return cls((EMPTY,), bound)

    def __contains__(self, p: Pomset) -> bool:
        return p in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PomsetLanguage)
            and self.members == other.members
            and self.bound == other.bound
        )

    def __hash__(self) -> int:
        return hash((self.members, self.bound))

    def __le__(self, other: "PomsetLanguage") -> bool:
        _check_bounds(self, other)
        return self.members <= other.members

    def __repr__(self) -> str:
        texts = sorted(_member_text(p) for p in self.members)
        return f"PomsetLanguage({{{', '.join(texts)}}}, bound={self.bound})"

    def sorted_texts(self) -> list[str]:
        """Members in canonical notation, sorted lexicographically."""
        return sorted(_member_text(p) for p in self.members)


def _member_text(p: Pomset) -> str:
    try:
        return p.to_text()
    except NotSeriesParallelError:
        return repr(p)


def _check_bounds(left: PomsetLanguage, right: PomsetLanguage) -> None:
    if left.bound != right.bound:
        raise ValueError(
            f"size bounds differ: {left.bound} vs {right.bound}"
        )


def lang_union(left: PomsetLanguage, right: PomsetLanguage) -> PomsetLanguage:
    _check_bounds(left, right)
    return PomsetLanguage(
        left.members | right.members, left.bound, left.exact and right.exact
    )


def lang_seq(left: PomsetLanguage, right: PomsetLanguage) -> PomsetLanguage:
    _check_bounds(left, right)
    bound = left.bound
    out = set()
    for u in left.members:
        room = bound - len(u)
        for v in right.members:
            if len(v) <= room:
                out.add(seq_compose(u, v))
    return PomsetLanguage(out, bound, left.exact and right.exact)


def lang_par(left: PomsetLanguage, right: PomsetLanguage) -> PomsetLanguage:
    _check_bounds(left, right)
    bound = left.bound
    out = set()
    for u in left.members:
        room = bound - len(u)
        for v in right.members:
            if len(v) <= room:
                out.add(par_compose(u, v))
    return PomsetLanguage(out, bound, left.exact and right.exact)


def _iterated(base: PomsetLanguage, combine) -> PomsetLanguage:
    bound = base.bound
    result = {EMPTY}
    layer = {EMPTY}
    for _ in range(bound):
        next_layer = set()
        for u in layer:
            room = bound - len(u)
            for v in base.members:
                if 0 < len(v) <= room:
                    next_layer.add(combine(u, v))
        next_layer -= result
        if not next_layer:
            break
        result |= next_layer
        layer = next_layer
    return PomsetLanguage(result, bound, base.exact)


def lang_star(lang: PomsetLanguage) -> PomsetLanguage:
    """Union of all finite sequential powers, truncated at the node bound."""
    return _iterated(lang, seq_compose)


def lang_parstar(lang: PomsetLanguage) -> PomsetLanguage:
    """Union of all finite parallel powers, truncated at the node bound."""
    return _iterated(lang, par_compose)


def lang_substitute(
    zeta: Mapping[str, PomsetLanguage], lang: PomsetLanguage
) -> PomsetLanguage:
    """Homomorphic substitution through the series-parallel structure.

    Each member is factorized; primitives are replaced by ``zeta[letter]``
    and the factors are recombined with the language operators, so the
    result stays bound-filtered.  Non-series-parallel members have no
    structural decomposition and are rejected.
    """
    bound = lang.bound
    for key, value in zeta.items():
        if value.bound != bound:
            raise ValueError(f"substitution for {key!r} has mismatched bound")

    def subst(p: Pomset) -> PomsetLanguage:
        if len(p) == 0:
            return PomsetLanguage.unit(bound)
        if len(p) == 1:
            letter = p.labels[0]
            if letter not in zeta:
                raise ValueError(f"no substitution for letter {letter!r}")
            return zeta[letter]
        comps = _parallel_components(p)
        if len(comps) > 1:
            acc = subst(p.restricted_to(comps[0]))
            for comp in comps[1:]:
                acc = lang_par(acc, subst(p.restricted_to(comp)))
            return acc
        blocks = _sequential_cuts(p)
        if len(blocks) > 1:
            acc = subst(p.restricted_to(blocks[0]))
            for block in blocks[1:]:
                acc = lang_seq(acc, subst(p.restricted_to(block)))
            return acc
        raise NotSeriesParallelError(
            "substitution is defined on series-parallel members only"
        )

    out = PomsetLanguage.empty(bound)
    for member in lang.members:
        out = lang_union(out, subst(member))
    exact = lang.exact and all(z.exact for z in zeta.values())
    return PomsetLanguage(out.members, bound, exact)
