"""AST, parser, printer and normal forms for expected-distance formulas.

Concrete syntax::

    prop    ::= ident | true | false | "!" prop | prop "&" prop | prop "|" prop | "(" prop ")"
    item    ::= number ["*"] "ED(" prop ")" | "ED(" prop ")" | number
    side    ::= ["+"|"-"] item (("+"|"-") item)*
    basic   ::= side (">=" | "<=" | ">" | "<" | "=") side
    formula ::= basic | "!" formula | formula "&" formula | formula "|" formula | "(" formula ")"

``!`` binds tighter than ``&``, which binds tighter than ``|``; binary
operators associate to the left.  Numbers are integers, decimals or
``p/q`` and are read exactly.  ED summands and constants may appear on
both sides of a relation; a basic formula is normalised to
``term rel bound`` with every ED summand on the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import Union

from .errors import DnfTooLarge, EDSyntaxError, UnknownProposition, UnknownToken
from .rational import fmt

RELATIONS = (">=", "<=", ">", "<", "=")

DEFAULT_DNF_LITERAL_CAP = 4096


# propositional layer

@dataclass(frozen=True)
class PropVar:
    name: str


@dataclass(frozen=True)
class PropConst:
    value: bool


@dataclass(frozen=True)
class PropNot:
    arg: "Prop"


@dataclass(frozen=True)
class PropAnd:
    left: "Prop"
    right: "Prop"


@dataclass(frozen=True)
class PropOr:
    left: "Prop"
    right: "Prop"


Prop = Union[PropVar, PropConst, PropNot, PropAnd, PropOr]
TRUE = PropConst(True)
FALSE = PropConst(False)


# expected-distance layer

@dataclass(frozen=True)
class EDTerm:
    summands: tuple[tuple[Fraction, Prop], ...]

    def __post_init__(self):
        if not self.summands:
            raise ValueError("an ED term needs at least one summand")


@dataclass(frozen=True)
class Basic:
    term: EDTerm
    rel: str
    bound: Fraction

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


Formula = Union[Basic, Not, And, Or]


def conjoin(formulas):
    formulas = list(formulas)
    out = formulas[0]
    for f in formulas[1:]:
        out = And(out, f)
    return out


def compare(value, rel, bound) -> bool:
    if rel == ">=":
        return value >= bound
    if rel == ">":
        return value > bound
    if rel == "<=":
        return value <= bound
    if rel == "<":
        return value < bound
    return value == bound


# tokenizer

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?(?:/\d+)?|\.\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>>=|<=|[()!&|+\-*<>=])
""", re.VERBOSE)

_UNICODE = {"¬": "!", "∧": "&", "∨": "|", "≥": ">=", "≤": "<=", "−": "-"}


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text):
    for u, a in _UNICODE.items():
        text = text.replace(u, a)
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise UnknownToken(pos, text[pos], text)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, expected):
        raise EDSyntaxError(self.tok.pos, expected, self.text)

    def accept(self, text):
        if self.tok.text == text and self.tok.kind != "eof":
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            self.error(repr(text))

    def at_ed(self):
        return self.tok.kind == "ident" and self.tok.text == "ED"

    # formulas

    def formula(self):
        left = self.conj()
        while self.accept("|"):
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.accept("&"):
            left = And(left, self.unary())
        return left

    def unary(self):
        if self.accept("!"):
            return Not(self.unary())
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        return self.basic()

    def basic(self):
        start = self.tok.pos
        lhs, lconst = self.side()
        if self.tok.text not in RELATIONS or self.tok.kind == "eof":
            self.error("a relation (>=, <=, >, <, =)")
        rel = self.tok.text
        self.i += 1
        rhs, rconst = self.side()
        summands = tuple(lhs) + tuple((-c, p) for c, p in rhs)
        if not summands:
            raise EDSyntaxError(start, "at least one ED(...) summand", self.text)
        return Basic(EDTerm(summands), rel, rconst - lconst)

    def side(self):
        summands, const = [], Fraction(0)
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        while True:
            coef, prop = self.item()
            if prop is None:
                const += sign * coef
            else:
                summands.append((sign * coef, prop))
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                return summands, const

    def item(self):
        if self.tok.kind == "num":
            try:
                coef = Fraction(self.tok.text)
            except ZeroDivisionError:
                self.error("a number with non-zero denominator")
            self.i += 1
            if self.accept("*"):
                if not self.at_ed():
                    self.error("ED(")
            if self.at_ed():
                return coef, self.ed_arg()
            return coef, None
        if self.at_ed():
            return Fraction(1), self.ed_arg()
        self.error("a number or ED(")

    def ed_arg(self):
        self.i += 1
        self.expect("(")
        p = self.prop()
        self.expect(")")
        return p

    # propositions

    def prop(self):
        left = self.prop_conj()
        while self.accept("|"):
            left = PropOr(left, self.prop_conj())
        return left

    def prop_conj(self):
        left = self.prop_unary()
        while self.accept("&"):
            left = PropAnd(left, self.prop_unary())
        return left

    def prop_unary(self):
        if self.accept("!"):
            return PropNot(self.prop_unary())
        if self.accept("("):
            p = self.prop()
            self.expect(")")
            return p
        tok = self.tok
        if tok.kind == "ident":
            if tok.text == "ED":
                self.error("a propositional formula (nested ED is not allowed)")
            self.i += 1
            if tok.text == "true":
                return TRUE
            if tok.text == "false":
                return FALSE
            return PropVar(tok.text)
        self.error("a proposition")


def parse(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.tok.kind != "eof":
        p.error("end of input")
    return f


def parse_prop(text: str) -> Prop:
    p = _Parser(text)
    f = p.prop()
    if p.tok.kind != "eof":
        p.error("end of input")
    return f


def parse_lines(text: str) -> list[Formula]:
    """One formula per non-blank line; ``#`` starts a comment."""
    out = []
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        if body.strip():
            try:
                out.append(parse(body))
            except EDSyntaxError as exc:
                exc.position += offset
                exc.args = (f"syntax error at position {exc.position}: expected {exc.expected}",)
                raise
        offset += len(line)
    return out


# printing

_PREC = {PropOr: 1, PropAnd: 2, PropNot: 3, PropVar: 4, PropConst: 4}


def print_prop(p: Prop) -> str:
    if isinstance(p, PropVar):
        return p.name
    if isinstance(p, PropConst):
        return "true" if p.value else "false"
    if isinstance(p, PropNot):
        inner = print_prop(p.arg)
        return "!" + (inner if _PREC[type(p.arg)] >= 3 else f"({inner})")
    op = " & " if isinstance(p, PropAnd) else " | "
    prec = _PREC[type(p)]
    left = print_prop(p.left)
    if _PREC[type(p.left)] < prec:
        left = f"({left})"
    right = print_prop(p.right)
    if _PREC[type(p.right)] <= prec:
        right = f"({right})"
    return left + op + right


def print_term(t: EDTerm) -> str:
    parts = []
    for k, (c, p) in enumerate(t.summands):
        body = f"ED({print_prop(p)})"
        mag = abs(c)
        s = body if mag == 1 else f"{fmt(mag)}*{body}"
        if k == 0:
            parts.append(("-" if c < 0 else "") + s)
        else:
            parts.append((" - " if c < 0 else " + ") + s)
    return "".join(parts)


def print_basic(b: Basic) -> str:
    return f"{print_term(b.term)} {b.rel} {fmt(b.bound)}"


_FPREC = {Or: 1, And: 2, Not: 3, Basic: 4}


def print_formula(f: Formula) -> str:
    if isinstance(f, Basic):
        return print_basic(f)
    if isinstance(f, Not):
        return "!" + _operand(f.arg, 3, False)
    op = " & " if isinstance(f, And) else " | "
    prec = _FPREC[type(f)]
    return _operand(f.left, prec, False) + op + _operand(f.right, prec, True)


def _operand(g, parent_prec, is_right):
    # basics are always parenthesised inside compound formulas
    if isinstance(g, Basic):
        return f"({print_basic(g)})"
    prec = _FPREC[type(g)]
    if prec > parent_prec or (prec == parent_prec and not is_right):
        return print_formula(g)
    return f"({print_formula(g)})"


# normal forms

_NEGATED = {">=": "<", ">": "<=", "<=": ">", "<": ">="}


def negate_basic(b: Basic) -> list[Basic]:
    """Disjuncts equivalent to the negation of ``b``."""
    if b.rel == "=":
        return [Basic(b.term, "<", b.bound), Basic(b.term, ">", b.bound)]
    return [Basic(b.term, _NEGATED[b.rel], b.bound)]


def to_dnf(f: Formula, max_literals=DEFAULT_DNF_LITERAL_CAP) -> list[tuple[Basic, ...]]:
    """Disjunctive normal form with negations folded into relations.

    Each conjunct is a tuple of basic formulas.  ``¬(t = α)`` becomes the
    two disjuncts ``t < α`` and ``t > α``.
    """

    def size(dnf):
        return sum(len(c) for c in dnf)

    def go(g, neg):
        if isinstance(g, Basic):
            return [(b,) for b in negate_basic(g)] if neg else [(g,)]
        if isinstance(g, Not):
            return go(g.arg, not neg)
        left, right = go(g.left, neg), go(g.right, neg)
        conjunctive = isinstance(g, And) != neg
        if conjunctive:
            if len(left) * len(right) and \
                    (size(left) * len(right) + size(right) * len(left)) > max_literals:
                raise DnfTooLarge(f"DNF exceeds {max_literals} literals")
            out = [a + b for a, b in cartesian(left, right)]
        else:
            out = left + right
        if size(out) > max_literals:
            raise DnfTooLarge(f"DNF exceeds {max_literals} literals")
        return out

    return go(f, False)


# atoms

def prop_vars(p: Prop, acc=None) -> set[str]:
    acc = set() if acc is None else acc
    if isinstance(p, PropVar):
        acc.add(p.name)
    elif isinstance(p, PropNot):
        prop_vars(p.arg, acc)
    elif isinstance(p, (PropAnd, PropOr)):
        prop_vars(p.left, acc)
        prop_vars(p.right, acc)
    return acc


def basics(f: Formula):
    if isinstance(f, Basic):
        yield f
    elif isinstance(f, Not):
        yield from basics(f.arg)
    else:
        yield from basics(f.left)
        yield from basics(f.right)


def formula_props(f: Formula) -> set[str]:
    acc = set()
    for b in basics(f):
        for _, p in b.term.summands:
            prop_vars(p, acc)
    return acc


def eval_prop(p: Prop, true_props) -> bool:
    if isinstance(p, PropVar):
        return p.name in true_props
    if isinstance(p, PropConst):
        return p.value
    if isinstance(p, PropNot):
        return not eval_prop(p.arg, true_props)
    if isinstance(p, PropAnd):
        return eval_prop(p.left, true_props) and eval_prop(p.right, true_props)
    return eval_prop(p.left, true_props) or eval_prop(p.right, true_props)


@dataclass(frozen=True)
class AtomBasis:
    """Primitive propositions and their 2^k complete sign patterns.

    Atom ``a`` (0-based) makes ``props[j]`` true iff bit ``k-1-j`` of ``a``
    is set, so atoms run in binary order with the first proposition most
    significant.
    """

    props: tuple[str, ...]

    @property
    def k(self):
        return len(self.props)

    @property
    def n(self):
        return 1 << len(self.props)

    def true_props(self, atom: int) -> frozenset[str]:
        k = self.k
        return frozenset(p for j, p in enumerate(self.props) if atom >> (k - 1 - j) & 1)

    def atom_formula(self, atom: int) -> Prop:
        if not self.props:
            return TRUE
        truth = self.true_props(atom)
        lits = [PropVar(p) if p in truth else PropNot(PropVar(p)) for p in self.props]
        out = lits[0]
        for lit in lits[1:]:
            out = PropAnd(out, lit)
        return out


def atom_basis(f: Formula, extra=()) -> AtomBasis:
    return AtomBasis(tuple(sorted(formula_props(f) | set(extra))))


def prop_to_atom_set(p: Prop, basis: AtomBasis) -> int:
    """Bitmask of the atoms whose sign pattern satisfies ``p``."""
    unknown = prop_vars(p) - set(basis.props)
    if unknown:
        raise UnknownProposition(f"propositions {sorted(unknown)} not in basis {basis.props}")
    out = 0
    for a in range(basis.n):
        if eval_prop(p, basis.true_props(a)):
            out |= 1 << a
    return out
