"""CTLF formula syntax: AST nodes, a recursive-descent parser and a printer.

Concrete syntax (ASCII)::

    pathf  := ("NAB" | "DAG") rat statef
    statef := orf
    orf    := andf ("OR" andf)*
    andf   := unf ("AND" unf)*
    unf    := "NOT" unf | modal | atom | "(" statef ")"
    modal  := ("BOX"|"BBOX"|"CIRC"|"TRI") rat unf
    rat    := int | int "/" int

Keywords map to operators as follows: ``BOX`` counts the actual history,
``BBOX`` the best history some target-compatible series could have had,
``CIRC`` counts the history against the full series length, ``TRI`` looks
at the remainder of a target-compatible series, ``NAB`` counts over a whole
series and ``DAG`` is the fraction of target-compatible completions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import ClassVar, Iterator, Union

from .errors import FormulaSyntaxError, ThresholdOutOfRange, ZeroDenominator

__all__ = [
    "Atom", "Not", "And", "Or",
    "Box", "BlackBox", "Circ", "Tri", "Nabla", "Dagger",
    "StateFormula", "PathFormula", "Formula",
    "parse_formula", "parse_state", "format_formula",
    "atoms", "is_propositional", "modal_depth", "KEYWORDS",
]


def _threshold(q) -> Fraction:
    if isinstance(q, bool) or not isinstance(q, (int, Fraction)):
        raise TypeError(f"thresholds must be int or Fraction, got {type(q).__name__}")
    q = Fraction(q)
    if not 0 <= q <= 1:
        raise ValueError(f"threshold {q} outside [0, 1]")
    return q


class _Node:
    # formulas are used as memo keys everywhere; hashing Fractions is slow
    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((type(self).__name__,) + tuple(getattr(self, f.name) for f in fields(self)))
            object.__setattr__(self, "_hash", h)
            return h


@dataclass(frozen=True)
class Atom(_Node):
    name: str
    __hash__ = _Node.__hash__


@dataclass(frozen=True)
class Not(_Node):
    arg: "StateFormula"
    __hash__ = _Node.__hash__


@dataclass(frozen=True)
class And(_Node):
    left: "StateFormula"
    right: "StateFormula"
    __hash__ = _Node.__hash__


@dataclass(frozen=True)
class Or(_Node):
    left: "StateFormula"
    right: "StateFormula"
    __hash__ = _Node.__hash__


@dataclass(frozen=True)
class _Modal(_Node):
    q: Fraction
    arg: "StateFormula"

    keyword: ClassVar[str] = ""
    __hash__ = _Node.__hash__

    def __post_init__(self):
        object.__setattr__(self, "q", _threshold(self.q))


class Box(_Modal):
    keyword = "BOX"


class BlackBox(_Modal):
    keyword = "BBOX"


class Circ(_Modal):
    keyword = "CIRC"


class Tri(_Modal):
    keyword = "TRI"


class Nabla(_Modal):
    keyword = "NAB"


class Dagger(_Modal):
    keyword = "DAG"


StateFormula = Union[Atom, Not, And, Or, Box, BlackBox, Circ, Tri]
PathFormula = Union[Nabla, Dagger]
Formula = Union[StateFormula, PathFormula]

STATE_MODALS = {c.keyword: c for c in (Box, BlackBox, Circ, Tri)}
PATH_MODALS = {c.keyword: c for c in (Nabla, Dagger)}
KEYWORDS = frozenset(STATE_MODALS) | frozenset(PATH_MODALS) | {"NOT", "AND", "OR"}


def atoms(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, Not):
        return atoms(f.arg)
    if isinstance(f, (And, Or)):
        return atoms(f.left) | atoms(f.right)
    return atoms(f.arg)


def is_propositional(f: Formula) -> bool:
    """True when `f` has no modal operator anywhere."""
    if isinstance(f, Atom):
        return True
    if isinstance(f, Not):
        return is_propositional(f.arg)
    if isinstance(f, (And, Or)):
        return is_propositional(f.left) and is_propositional(f.right)
    return False


def modal_depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.arg)
    if isinstance(f, (And, Or)):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 1 + modal_depth(f.arg)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<punct>[()/]))")


def _tokenize(text: str) -> Iterator[tuple[str, str, int]]:
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise FormulaSyntaxError(bad, "an atom, keyword, integer or parenthesis", text)
        kind = m.lastgroup
        yield kind, m.group(kind), m.start(kind)
        pos = m.end()
    yield "eof", "", len(text)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = list(_tokenize(text))
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, expected: str):
        raise FormulaSyntaxError(self.tok[2], expected, self.text)

    def is_kw(self, *words) -> bool:
        kind, value, _ = self.tok
        return kind == "ident" and value in words

    def expect_punct(self, p: str):
        kind, value, _ = self.tok
        if kind != "punct" or value != p:
            self.error(repr(p))
        self.i += 1

    def formula(self) -> Formula:
        if self.is_kw(*PATH_MODALS):
            cls = PATH_MODALS[self.tok[1]]
            self.i += 1
            q = self.rational()
            f = cls(q, self.statef())
        else:
            f = self.statef()
        if self.tok[0] != "eof":
            self.error("end of input")
        return f

    def statef(self) -> StateFormula:
        f = self.andf()
        while self.is_kw("OR"):
            self.i += 1
            f = Or(f, self.andf())
        return f

    def andf(self) -> StateFormula:
        f = self.unf()
        while self.is_kw("AND"):
            self.i += 1
            f = And(f, self.unf())
        return f

    def unf(self) -> StateFormula:
        kind, value, _ = self.tok
        if kind == "ident":
            if value == "NOT":
                self.i += 1
                return Not(self.unf())
            if value in STATE_MODALS:
                self.i += 1
                q = self.rational()
                return STATE_MODALS[value](q, self.unf())
            if value in KEYWORDS:
                self.error("an atom, NOT, a state modality or '('")
            self.i += 1
            return Atom(value)
        if kind == "punct" and value == "(":
            self.i += 1
            f = self.statef()
            self.expect_punct(")")
            return f
        self.error("an atom, NOT, a state modality or '('")

    def rational(self) -> Fraction:
        kind, value, start = self.tok
        if kind != "int":
            self.error("a threshold (int or int/int)")
        self.i += 1
        num, den = int(value), 1
        if self.tok[0] == "punct" and self.tok[1] == "/":
            self.i += 1
            kind, value, dpos = self.tok
            if kind != "int":
                self.error("a denominator")
            self.i += 1
            den = int(value)
            if den == 0:
                raise ZeroDenominator(dpos, self.text)
        q = Fraction(num, den)
        if q > 1:
            raise ThresholdOutOfRange(start, q, self.text)
        return q


def parse_formula(text: str) -> Formula:
    """Parse a state or path formula.

    >>> parse_formula("BOX 2/3 M AND NOT F")
    And(left=Box(q=Fraction(2, 3), arg=Atom(name='M')), right=Not(arg=Atom(name='F')))
    """
    return _Parser(text).formula()


def parse_state(text: str) -> StateFormula:
    f = parse_formula(text)
    if isinstance(f, (Nabla, Dagger)):
        raise FormulaSyntaxError(0, "a state formula", text)
    return f


# ---------------------------------------------------------------- printing

def _rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt(f: StateFormula, level: int) -> str:
    # level: 0 = or-context, 1 = and-context, 2 = unary operand
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "NOT " + _fmt(f.arg, 2)
    if isinstance(f, _Modal):
        return f"{f.keyword} {_rat(f.q)} {_fmt(f.arg, 2)}"
    if isinstance(f, And):
        s = f"{_fmt(f.left, 1)} AND {_fmt(f.right, 2)}"
        return s if level <= 1 else f"({s})"
    if isinstance(f, Or):
        s = f"{_fmt(f.left, 0)} OR {_fmt(f.right, 1)}"
        return s if level == 0 else f"({s})"
    raise TypeError(f"not a formula: {f!r}")


def format_formula(f: Formula) -> str:
    """Render `f` in the concrete syntax with minimal parentheses."""
    if isinstance(f, (Nabla, Dagger)):
        return f"{f.keyword} {_rat(f.q)} {_fmt(f.arg, 0)}"
    return _fmt(f, 0)
