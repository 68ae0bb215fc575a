"""Formula and sequent syntax: AST, parser and printer.

Grammar (negations bind tightest, then ``&``, then ``|``)::

    sequent  := formula "|-" formula
    formula  := conj ("|" conj)*
    conj     := unary ("&" unary)*
    unary    := "~" unary | "!" unary | atom
    atom     := NAME | "T" | "F" | "(" formula ")"

``~`` is the pseudo-complement and ``!`` the dual pseudo-complement.  The
Unicode spellings ``∼ ¬ ∧ ∨ ⊢ ⊤ ⊥`` are accepted as aliases.  Greek letters
``α β γ δ`` denote schema metavariables when ``metavars=True``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from ..errors import FormulaSyntaxError


class Formula:
    __slots__ = ()

    def __str__(self):
        return render(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return PseudoNeg(self)


@dataclass(frozen=True, repr=False)
class Var(Formula):
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, repr=False)
class Meta(Formula):
    """Schema metavariable (alpha, beta, ...)."""

    name: str

    def __repr__(self):
        return f"Meta({self.name!r})"


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    def __repr__(self):
        return "Bot()"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class PseudoNeg(Formula):
    child: Formula

    def __repr__(self):
        return f"PseudoNeg({self.child!r})"


@dataclass(frozen=True, repr=False)
class DualNeg(Formula):
    child: Formula

    def __repr__(self):
        return f"DualNeg({self.child!r})"


TOP = Top()
BOT = Bot()


@dataclass(frozen=True)
class Sequent:
    lhs: Formula
    rhs: Formula

    def __str__(self):
        return f"{render(self.lhs)} |- {render(self.rhs)}"


GREEK = {"alpha": "α", "beta": "β", "gamma": "γ", "delta": "δ"}
_GREEK_NAMES = {v: k for k, v in GREEK.items()}


# printing -----------------------------------------------------------------------

_PREC = {Or: 1, And: 2}


def render(f: Formula, ascii_meta: bool = False) -> str:
    """Print with the fewest parentheses that reparse to the same tree."""

    def go(f, need):
        if isinstance(f, Var):
            return f.name
        if isinstance(f, Meta):
            return f.name if ascii_meta else GREEK.get(f.name, f.name)
        if isinstance(f, Top):
            return "T"
        if isinstance(f, Bot):
            return "F"
        if isinstance(f, PseudoNeg):
            return "~" + go(f.child, 3)
        if isinstance(f, DualNeg):
            return "!" + go(f.child, 3)
        p = _PREC[type(f)]
        op = " & " if isinstance(f, And) else " | "
        s = go(f.left, p) + op + go(f.right, p + 1)
        return f"({s})" if p < need else s

    return go(f, 0)


# parsing ------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<turnstile>\|-|⊢)|(?P<op>[~!&|()∼¬∧∨])|(?P<const>[⊤⊥])|(?P<greek>[αβγδ])"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_']*))"
)
_ALIASES = {"∼": "~", "¬": "!", "∧": "&", "∨": "|", "⊤": "T", "⊥": "F", "⊢": "|-"}


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = len(text) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        value = _ALIASES.get(m.group(kind), m.group(kind))
        if kind == "const":
            kind = "name"
        out.append((kind, value, m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, metavars):
        self.tokens = _tokenize(text)
        self.i = 0
        self.metavars = metavars

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise FormulaSyntaxError(f"expected {value!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def formula(self):
        f = self.conj()
        while self.peek()[1] == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek()[1] == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        kind, value, pos = self.peek()
        if value == "~":
            self.take()
            return PseudoNeg(self.unary())
        if value == "!":
            self.take()
            return DualNeg(self.unary())
        return self.atom()

    def atom(self):
        kind, value, pos = self.take()
        if value == "(":
            f = self.formula()
            self.take(")")
            return f
        if kind == "greek":
            if not self.metavars:
                raise FormulaSyntaxError(f"metavariable {value!r} not allowed here", pos)
            return Meta(_GREEK_NAMES[value])
        if kind == "name":
            if value == "T":
                return TOP
            if value == "F":
                return BOT
            if self.metavars and value in GREEK:
                return Meta(value)
            return Var(value)
        what = "end of input" if kind == "end" else repr(value)
        raise FormulaSyntaxError(f"expected a formula, found {what}", pos)


def parse(text: str, metavars: bool = False) -> Union[Formula, Sequent]:
    """Parse a formula, or a sequent if the text contains ``|-``."""
    p = _Parser(text, metavars)
    lhs = p.formula()
    if p.peek()[0] == "turnstile":
        p.take()
        rhs = p.formula()
        result = Sequent(lhs, rhs)
    else:
        result = lhs
    kind, value, pos = p.peek()
    if kind != "end":
        raise FormulaSyntaxError(f"unexpected {value!r}", pos)
    return result


def parse_formula(text: str, metavars: bool = False) -> Formula:
    f = parse(text, metavars)
    if isinstance(f, Sequent):
        raise FormulaSyntaxError("expected a formula, found a sequent", text.find("|-"))
    return f


def parse_sequent(text: str, metavars: bool = False) -> Sequent:
    s = parse(text, metavars)
    if not isinstance(s, Sequent):
        raise FormulaSyntaxError("expected a sequent containing '|-'", len(text))
    return s


# structural queries -----------------------------------------------------------------


def subformulas(f: Formula):
    yield f
    if isinstance(f, (And, Or)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, (PseudoNeg, DualNeg)):
        yield from subformulas(f.child)


def _parts(x):
    return (x.lhs, x.rhs) if isinstance(x, Sequent) else (x,)


def variables(x) -> tuple[str, ...]:
    """Sorted names of the object variables of a formula or sequent."""
    return tuple(sorted({g.name for part in _parts(x) for g in subformulas(part) if isinstance(g, Var)}))


def metavariables(x) -> tuple[str, ...]:
    return tuple(sorted({g.name for part in _parts(x) for g in subformulas(part) if isinstance(g, Meta)}))


def signature(x) -> frozenset:
    """Negations occurring: a subset of ``{'~', '!'}``."""
    sig = set()
    for part in _parts(x):
        for g in subformulas(part):
            if isinstance(g, PseudoNeg):
                sig.add("~")
            elif isinstance(g, DualNeg):
                sig.add("!")
    return frozenset(sig)


def signature_tag(x) -> str:
    """``F``, ``F~``, ``F!`` or ``F~!`` naming the smallest formula set containing ``x``."""
    sig = signature(x)
    return "F" + ("~" if "~" in sig else "") + ("!" if "!" in sig else "")


def depth(f: Formula) -> int:
    if isinstance(f, (And, Or)):
        return 1 + max(depth(f.left), depth(f.right))
    if isinstance(f, (PseudoNeg, DualNeg)):
        return 1 + depth(f.child)
    return 0


def substitute(f, subst: dict):
    """Replace metavariables (and variables named in ``subst``) by formulas."""
    if isinstance(f, Sequent):
        return Sequent(substitute(f.lhs, subst), substitute(f.rhs, subst))
    if isinstance(f, (Meta, Var)):
        return subst.get(f.name, f) if isinstance(f, Meta) or f.name in subst else f
    if isinstance(f, And):
        return And(substitute(f.left, subst), substitute(f.right, subst))
    if isinstance(f, Or):
        return Or(substitute(f.left, subst), substitute(f.right, subst))
    if isinstance(f, PseudoNeg):
        return PseudoNeg(substitute(f.child, subst))
    if isinstance(f, DualNeg):
        return DualNeg(substitute(f.child, subst))
    return f


def match(pattern, formula, subst: dict | None = None):
    """First-order syntactic matching of metavariables; returns the extended substitution or None."""
    subst = dict(subst or {})
    stack = [(pattern, formula)]
    if isinstance(pattern, Sequent):
        if not isinstance(formula, Sequent):
            return None
        stack = [(pattern.lhs, formula.lhs), (pattern.rhs, formula.rhs)]
    while stack:
        p, f = stack.pop()
        if isinstance(p, Meta):
            bound = subst.get(p.name)
            if bound is None:
                subst[p.name] = f
            elif bound != f:
                return None
        elif type(p) is not type(f):
            return None
        elif isinstance(p, (And, Or)):
            stack += [(p.left, f.left), (p.right, f.right)]
        elif isinstance(p, (PseudoNeg, DualNeg)):
            stack.append((p.child, f.child))
        elif p != f:
            return None
    return subst
