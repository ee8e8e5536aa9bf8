"""Series-parallel rational expressions: syntax, parsing and semantics.

The expression language has constants ``0`` and ``1``, lowercase letters,
sum ``+``, sequential product ``.``, Kleene star ``*``, parallel product
``||`` and parallel star ``^*``.  Precedence from tightest to loosest is
stars, ``.``, ``||``, ``+``; binary operators associate to the left.

``semantics`` maps an expression to its exact size-bounded pomset language;
``nullable`` decides whether the empty pomset belongs to the language by
the usual structural rules.  The smart constructors (``mk_*``) apply the
unit/absorption simplifications used by the derivative construction; the
parser never simplifies, so parse/print round-trips are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .language import (
    PomsetLanguage,
    lang_par,
    lang_parstar,
    lang_seq,
    lang_star,
    lang_union,
)
from .pomset import Pomset, primitive

__all__ = [
    "SprExpr",
    "Zero",
    "One",
    "Sym",
    "Sum",
    "Seq",
    "Star",
    "Par",
    "ParStar",
    "ZERO",
    "ONE",
    "ParseError",
    "parse",
    "nullable",
    "par_depth",
    "parstar_depth",
    "alphabet",
    "semantics",
    "equiv_bounded",
    "mk_sum",
    "mk_seq",
    "mk_par",
    "mk_star",
    "mk_parstar",
    "sum_of",
]

_LETTERS = frozenset("abcdefghijklmnopqrstuvwxyz")


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class SprExpr:
    """Base class for expression nodes; subclasses are frozen dataclasses."""

    def __str__(self) -> str:
        return _format(self, 0)


@dataclass(frozen=True)
class Zero(SprExpr):
    pass


@dataclass(frozen=True)
class One(SprExpr):
    pass


@dataclass(frozen=True)
class Sym(SprExpr):
    letter: str

    def __post_init__(self):
        if self.letter not in _LETTERS:
            raise ValueError(f"{self.letter!r} is not a letter")


@dataclass(frozen=True)
class Sum(SprExpr):
    left: SprExpr
    right: SprExpr


@dataclass(frozen=True)
class Seq(SprExpr):
    left: SprExpr
    right: SprExpr


@dataclass(frozen=True)
class Star(SprExpr):
    arg: SprExpr


@dataclass(frozen=True)
class Par(SprExpr):
    left: SprExpr
    right: SprExpr


@dataclass(frozen=True)
class ParStar(SprExpr):
    arg: SprExpr


ZERO = Zero()
ONE = One()


# ---------------------------------------------------------------------------
# Printing (minimal parentheses, left-associative reading)
# ---------------------------------------------------------------------------

_PREC_SUM = 1
_PREC_PAR = 2
_PREC_SEQ = 3
_PREC_STAR = 4


def _format(x: SprExpr, outer: int) -> str:
    if isinstance(x, Zero):
        return "0"
    if isinstance(x, One):
        return "1"
    if isinstance(x, Sym):
        return x.letter
    if isinstance(x, Sum):
        text = f"{_format(x.left, _PREC_SUM)}+{_format(x.right, _PREC_SUM + 1)}"
        prec = _PREC_SUM
    elif isinstance(x, Par):
        text = f"{_format(x.left, _PREC_PAR)}||{_format(x.right, _PREC_PAR + 1)}"
        prec = _PREC_PAR
    elif isinstance(x, Seq):
        text = f"{_format(x.left, _PREC_SEQ)}.{_format(x.right, _PREC_SEQ + 1)}"
        prec = _PREC_SEQ
    elif isinstance(x, Star):
        text = f"{_format(x.arg, _PREC_STAR + 1)}*"
        prec = _PREC_STAR
    elif isinstance(x, ParStar):
        text = f"{_format(x.arg, _PREC_STAR + 1)}^*"
        prec = _PREC_STAR
    else:
        raise TypeError(f"not an expression: {x!r}")
    return f"({text})" if prec < outer else text


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def parse(text: str) -> SprExpr:
    """Parse expression notation into a raw (unsimplified) syntax tree."""
    parser = _Parser(text)
    result = parser.parse_sum()
    parser.skip_ws()
    if parser.pos != len(text):
        raise ParseError("trailing input after expression", parser.pos)
    return result


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse_sum(self) -> SprExpr:
        result = self.parse_par()
        while self.peek() == "+":
            self.pos += 1
            result = Sum(result, self.parse_par())
        return result

    def parse_par(self) -> SprExpr:
        result = self.parse_seq()
        while True:
            self.skip_ws()
            if self.text.startswith("||", self.pos):
                self.pos += 2
                result = Par(result, self.parse_seq())
            else:
                return result

    def parse_seq(self) -> SprExpr:
        result = self.parse_star()
        while self.peek() == ".":
            self.pos += 1
            result = Seq(result, self.parse_star())
        return result

    def parse_star(self) -> SprExpr:
        result = self.parse_atom()
        while True:
            self.skip_ws()
            if self.text.startswith("^*", self.pos):
                self.pos += 2
                result = ParStar(result)
            elif self.text.startswith("*", self.pos):
                self.pos += 1
                result = Star(result)
            else:
                return result

    def parse_atom(self) -> SprExpr:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.parse_sum()
            if self.peek() != ")":
                raise ParseError("expected ')'", self.pos)
            self.pos += 1
            return inner
        if ch == "0":
            self.pos += 1
            return ZERO
        if ch == "1":
            self.pos += 1
            return ONE
        if ch in _LETTERS:
            self.pos += 1
            return Sym(ch)
        if ch == "":
            raise ParseError("unexpected end of input", self.pos)
        raise ParseError(f"unexpected character {ch!r}", self.pos)


# ---------------------------------------------------------------------------
# Structural measures
# ---------------------------------------------------------------------------


def nullable(x: SprExpr) -> bool:
    """Whether the empty pomset belongs to the language of x."""
    if isinstance(x, One):
        return True
    if isinstance(x, (Zero, Sym)):
        return False
    if isinstance(x, Sum):
        return nullable(x.left) or nullable(x.right)
    if isinstance(x, (Seq, Par)):
        return nullable(x.left) and nullable(x.right)
    if isinstance(x, (Star, ParStar)):
        return True
    raise TypeError(f"not an expression: {x!r}")


def par_depth(x: SprExpr) -> int:
    """Nesting depth of parallel products."""
    if isinstance(x, (Zero, One, Sym)):
        return 0
    if isinstance(x, (Sum, Seq)):
        return max(par_depth(x.left), par_depth(x.right))
    if isinstance(x, Par):
        return max(par_depth(x.left), par_depth(x.right)) + 1
    if isinstance(x, (Star, ParStar)):
        return par_depth(x.arg)
    raise TypeError(f"not an expression: {x!r}")


def parstar_depth(x: SprExpr) -> int:
    """Nesting depth of parallel stars."""
    if isinstance(x, (Zero, One, Sym)):
        return 0
    if isinstance(x, (Sum, Seq, Par)):
        return max(parstar_depth(x.left), parstar_depth(x.right))
    if isinstance(x, Star):
        return parstar_depth(x.arg)
    if isinstance(x, ParStar):
        return parstar_depth(x.arg) + 1
    raise TypeError(f"not an expression: {x!r}")


def alphabet(x: SprExpr) -> frozenset[str]:
    if isinstance(x, Sym):
        return frozenset((x.letter,))
    if isinstance(x, (Sum, Seq, Par)):
        return alphabet(x.left) | alphabet(x.right)
    if isinstance(x, (Star, ParStar)):
        return alphabet(x.arg)
    return frozenset()


def subterms(x: SprExpr) -> Iterator[SprExpr]:
    yield x
    if isinstance(x, (Sum, Seq, Par)):
        yield from subterms(x.left)
        yield from subterms(x.right)
    elif isinstance(x, (Star, ParStar)):
        yield from subterms(x.arg)


# ---------------------------------------------------------------------------
# Bounded semantics
# ---------------------------------------------------------------------------

_SEM_CACHE: dict[tuple[SprExpr, int], PomsetLanguage] = {}


def semantics(x: SprExpr, bound: int) -> PomsetLanguage:
    """The exact language of x restricted to pomsets of at most ``bound`` nodes."""
    key = (x, bound)
    cached = _SEM_CACHE.get(key)
    if cached is not None:
        return cached
    if isinstance(x, Zero):
        out = PomsetLanguage.empty(bound)
    elif isinstance(x, One):
        out = PomsetLanguage.unit(bound)
    elif isinstance(x, Sym):
        members = (primitive(x.letter),) if bound >= 1 else ()
        out = PomsetLanguage(members, bound)
    elif isinstance(x, Sum):
        out = lang_union(semantics(x.left, bound), semantics(x.right, bound))
    elif isinstance(x, Seq):
        out = lang_seq(semantics(x.left, bound), semantics(x.right, bound))
    elif isinstance(x, Par):
        out = lang_par(semantics(x.left, bound), semantics(x.right, bound))
    elif isinstance(x, Star):
        out = lang_star(semantics(x.arg, bound))
    elif isinstance(x, ParStar):
        out = lang_parstar(semantics(x.arg, bound))
    else:
        raise TypeError(f"not an expression: {x!r}")
    if len(_SEM_CACHE) > 200_000:
        _SEM_CACHE.clear()
    _SEM_CACHE[key] = out
    return out


def equiv_bounded(
    x: SprExpr, y: SprExpr, bound: int
) -> tuple[bool, Pomset | None]:
    """Bounded language equality; on failure returns a smallest witness."""
    lx = semantics(x, bound)
    ly = semantics(y, bound)
    if lx.members == ly.members:
        return True, None
    diff = lx.members ^ ly.members
    witness = min(diff, key=Pomset.sort_key)
    return False, witness


# ---------------------------------------------------------------------------
# Simplifying constructors (used by derivatives and extraction)
# ---------------------------------------------------------------------------


def mk_seq(left: SprExpr, right: SprExpr) -> SprExpr:
    if isinstance(left, Zero) or isinstance(right, Zero):
        return ZERO
    if isinstance(left, One):
        return right
    if isinstance(right, One):
        return left
    return Seq(left, right)


def mk_par(left: SprExpr, right: SprExpr) -> SprExpr:
    if isinstance(left, Zero) or isinstance(right, Zero):
        return ZERO
    if isinstance(left, One):
        return right
    if isinstance(right, One):
        return left
    return Par(left, right)


def _summands(x: SprExpr) -> Iterator[SprExpr]:
    if isinstance(x, Sum):
        yield from _summands(x.left)
        yield from _summands(x.right)
    else:
        yield x


def mk_sum(left: SprExpr, right: SprExpr) -> SprExpr:
    return sum_of([left, right])


def sum_of(terms) -> SprExpr:
    """Flattened, deduplicated sum with 0 dropped; 0 when empty."""
    seen: dict[SprExpr, None] = {}
    for term in terms:
        for part in _summands(term):
            if not isinstance(part, Zero):
                seen.setdefault(part, None)
    parts = list(seen)
    if not parts:
        return ZERO
    acc = parts[0]
    for part in parts[1:]:
        acc = Sum(acc, part)
    return acc


def mk_star(arg: SprExpr) -> SprExpr:
    if isinstance(arg, (Zero, One)):
        return ONE
    return Star(arg)


def mk_parstar(arg: SprExpr) -> SprExpr:
    if isinstance(arg, (Zero, One)):
        return ONE
    return ParStar(arg)
