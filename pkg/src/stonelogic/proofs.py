"""Sequent calculi DLL, BDLL, L_S, L_DS and L_DBS: rule schemas, derivation
checking and exhaustive soundness audits against finite algebras.

A postulate may bundle several schemas (Conjunction Elimination has two); a
derivation step may cite either the postulate or one of its schemas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import FOUR, THREE_DUAL, THREE_PSEUDO, TWO, AlgebraStructure
from .errors import DerivationFormatError, FormulaSyntaxError, MissingConnective, TooLarge, UnknownCalculus
from .logic.enumerate import FormulaSpace
from .logic.formula import (
    GREEK,
    And,
    Bot,
    DualNeg,
    Formula,
    Meta,
    Or,
    PseudoNeg,
    Sequent,
    Top,
    Var,
    match,
    metavariables,
    parse_formula,
    parse_sequent,
    render,
    signature,
    subformulas,
    substitute,
)

META_ORDER = ("alpha", "beta", "gamma", "delta")
MAX_AUDIT_CELLS = 5 * 10**7


@dataclass(frozen=True)
class RuleSchema:
    name: str
    postulate: str
    premises: tuple
    conclusion: Sequent
    aliases: tuple = ()

    @property
    def is_axiom(self) -> bool:
        return not self.premises

    @property
    def metavars(self) -> tuple:
        found = set()
        for s in self.premises + (self.conclusion,):
            found.update(metavariables(s))
        return tuple(m for m in META_ORDER if m in found)

    def text(self, ascii_meta: bool = False) -> str:
        def seq(s):
            return f"{render(s.lhs, ascii_meta)} |- {render(s.rhs, ascii_meta)}"

        if not self.premises:
            return seq(self.conclusion)
        return ", ".join(seq(p) for p in self.premises) + " / " + seq(self.conclusion)

    def instantiate(self, subst: dict) -> tuple[tuple, Sequent]:
        return tuple(substitute(p, subst) for p in self.premises), substitute(self.conclusion, subst)


def _schema(name, postulate, text, aliases=()):
    if "/" in text:
        prem, concl = text.split("/")
        premises = tuple(parse_sequent(p, metavars=True) for p in prem.split(","))
    else:
        premises, concl = (), text
    return RuleSchema(name, postulate, premises, parse_sequent(concl, metavars=True), tuple(aliases))


_DLL = [
    _schema("Reflexivity", "Reflexivity", "α |- α"),
    _schema("Transitivity", "Transitivity", "α |- β, β |- γ / α |- γ"),
    _schema("Conj-Elim-L", "Conj-Elim", "α & β |- α"),
    _schema("Conj-Elim-R", "Conj-Elim", "α & β |- β"),
    _schema("Conj-Intro", "Conj-Intro", "α |- β, α |- γ / α |- β & γ"),
    _schema("Disj-Intro-L", "Disj-Intro", "α |- α | β"),
    _schema("Disj-Intro-R", "Disj-Intro", "β |- α | β"),
    _schema("Disj-Elim", "Disj-Elim", "α |- γ, β |- γ / α | β |- γ"),
    _schema("Distributivity", "Distributivity", "α & (β | γ) |- α & β | α & γ"),
]

_BOUNDS = [
    _schema("Top", "Top", "α |- T"),
    _schema("Bottom", "Bottom", "F |- α"),
]

_LS = [
    _schema("Contraposition", "Contraposition", "α |- β / ~β |- ~α"),
    _schema("Or-Linearity", "Or-Linearity", "~α & ~β |- ~(α | β)", ["∨-linearity", "v-linearity"]),
    _schema("Nor", "Nor", "T |- ~F"),
    _schema("S4", "S4", "α & β |- γ / α & ~γ |- ~β"),
    _schema("S5", "S5", "α & ~α |- F"),
    _schema("S6", "S6", "T |- ~α | ~~α"),
]

_LDS = [
    _schema("Contraposition", "Contraposition", "α |- β / !β |- !α"),
    _schema("And-Linearity", "And-Linearity", "!(α & β) |- !α | !β", ["∧-linearity", "^-linearity"]),
    _schema("DS3", "DS3", "!T |- F"),
    _schema("DS4", "DS4", "γ |- α | β / !β |- α | !γ"),
    _schema("DS5", "DS5", "T |- α | !α"),
    _schema("DS6", "DS6", "!α & !!α |- F"),
]


def _ldbs(variant):
    fifth = "α | !α |- F" if variant == "as_written" else "T |- α | !α"
    return [
        _schema("DBS1a", "DBS1", "~α & ~β |- ~(α | β)", ["Or-Linearity"]),
        _schema("DBS1b", "DBS1", "!(α & β) |- !α | !β", ["And-Linearity"]),
        _schema("DBS2a", "DBS2", "T |- ~F", ["Nor"]),
        _schema("DBS2b", "DBS2", "!T |- F"),
        _schema("DBS3a", "DBS3", "α |- β / ~β |- ~α", ["Contraposition"]),
        _schema("DBS3b", "DBS3", "α |- β / !β |- !α", ["Dual-Contraposition"]),
        _schema("DBS4a", "DBS4", "~α & !β |- !(α | β)"),
        _schema("DBS4b", "DBS4", "~(α & β) |- ~α | !β"),
        _schema("DBS5a", "DBS5", "α & ~α |- F"),
        _schema("DBS5b", "DBS5", fifth),
        # this rule is stated with "<=" in its conclusion; read as a sequent
        _schema("DBS6a", "DBS6", "α & β |- γ / α & ~γ |- ~β"),
        _schema("DBS6b", "DBS6", "γ |- α | β / !β |- α | !γ"),
        _schema("DBS7a", "DBS7", "T |- ~α | ~~α"),
        _schema("DBS7b", "DBS7", "!α & !!α |- F"),
    ]


CALCULI = ("DLL", "BDLL", "L_S", "L_DS", "L_DBS")
VARIANTS = ("as_written", "corrected")

_ALIASES = {
    "dll": "DLL",
    "bdll": "BDLL",
    "ls": "L_S",
    "l_s": "L_S",
    "lds": "L_DS",
    "l_ds": "L_DS",
    "ldbs": "L_DBS",
    "l_dbs": "L_DBS",
}


@dataclass(frozen=True)
class Calculus:
    name: str
    schemas: tuple
    signature: frozenset  # negations allowed
    constants: bool
    variant: Optional[str] = None

    @property
    def postulates(self) -> tuple:
        return tuple(dict.fromkeys(s.postulate for s in self.schemas))

    @property
    def generator(self) -> AlgebraStructure:
        """The algebra whose order validity the calculus is sound for."""
        if self.signature == frozenset("~!"):
            return FOUR
        if "~" in self.signature:
            return THREE_PSEUDO
        if "!" in self.signature:
            return THREE_DUAL
        return TWO

    def lookup(self, name: str) -> list[RuleSchema]:
        key = _norm(name)
        exact = [s for s in self.schemas if _norm(s.name) == key]
        if exact:
            return exact
        by_postulate = [s for s in self.schemas if _norm(s.postulate) == key]
        if by_postulate:
            return by_postulate
        return [s for s in self.schemas if key in (_norm(a) for a in s.aliases)]

    def schema(self, name: str) -> RuleSchema:
        found = [s for s in self.schemas if s.name == name]
        if not found:
            raise KeyError(name)
        return found[0]

    def admits(self, f) -> Optional[str]:
        """Reason the formula or sequent falls outside the language, else None."""
        extra = signature(f) - self.signature
        if extra:
            return f"connective {''.join(sorted(extra))} not in {self.name}"
        if not self.constants:
            parts = (f.lhs, f.rhs) if isinstance(f, Sequent) else (f,)
            for part in parts:
                if any(isinstance(g, (Top, Bot)) for g in subformulas(part)):
                    return f"constants T/F not in {self.name}"
        return None


def _norm(name: str) -> str:
    return re.sub(r"[\s_\-]", "", name).lower()


def calculus(name: str, variant: str = "corrected") -> Calculus:
    """Rule schemas of a calculus; ``variant`` only affects L_DBS."""
    key = _ALIASES.get(_norm(name), name)
    if key not in CALCULI:
        raise UnknownCalculus(f"unknown calculus {name!r}; expected one of {', '.join(CALCULI)}")
    variant = variant.replace("-", "_")
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if key == "DLL":
        return Calculus(key, tuple(_DLL), frozenset(), False)
    base = _DLL + _BOUNDS
    if key == "BDLL":
        return Calculus(key, tuple(base), frozenset(), True)
    if key == "L_S":
        return Calculus(key, tuple(base + _LS), frozenset("~"), True)
    if key == "L_DS":
        return Calculus(key, tuple(base + _LDS), frozenset("!"), True)
    return Calculus(key, tuple(base + _ldbs(variant)), frozenset("~!"), True, variant)


# derivations -----------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    index: int
    sequent: Sequent
    rule: str
    premises: tuple = ()
    subst: dict = field(default_factory=dict, hash=False)
    line: int = 0


@dataclass(frozen=True)
class Derivation:
    steps: tuple

    @property
    def conclusion(self) -> Optional[Sequent]:
        return self.steps[-1].sequent if self.steps else None


_STEP = re.compile(r"^\s*(\d+)\s*[:.]\s*(.*)$")
_JUST = re.compile(r"^\s*([^()]+?)\s*(?:\(([^()]*)\))?\s*$")
_META_NAMES = {**{v: k for k, v in GREEK.items()}, **{k: k for k in GREEK}}


def parse_derivation(text: str) -> Derivation:
    """Parse ``index: <sequent> ; <rule>(<premises>) [; <metavar>=<formula>,...]`` lines.

    Blank lines and ``#`` comments are skipped.
    """
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _STEP.match(line)
        if not m:
            raise DerivationFormatError(f"line {lineno}: expected '<index>: <sequent> ; <rule>(...)'")
        index = int(m.group(1))
        parts = [p.strip() for p in m.group(2).split(";")]
        if len(parts) not in (2, 3):
            raise DerivationFormatError(f"line {lineno}: expected 2 or 3 ';'-separated fields")
        try:
            sequent = parse_sequent(parts[0])
        except FormulaSyntaxError as e:
            raise DerivationFormatError(f"line {lineno}: {e}") from None
        j = _JUST.match(parts[1])
        if not j:
            raise DerivationFormatError(f"line {lineno}: bad justification {parts[1]!r}")
        premises = tuple(int(x) for x in re.findall(r"\d+", j.group(2) or ""))
        subst = {}
        if len(parts) == 3 and parts[2]:
            for item in parts[2].split(","):
                if "=" not in item:
                    raise DerivationFormatError(f"line {lineno}: bad substitution {item.strip()!r}")
                k, v = (x.strip() for x in item.split("=", 1))
                if k not in _META_NAMES:
                    raise DerivationFormatError(f"line {lineno}: unknown metavariable {k!r}")
                try:
                    subst[_META_NAMES[k]] = parse_formula(v)
                except FormulaSyntaxError as e:
                    raise DerivationFormatError(f"line {lineno}: {e}") from None
        steps.append(Step(index, sequent, j.group(1).strip(), premises, subst, lineno))
    return Derivation(tuple(steps))


def format_derivation(d: Derivation) -> str:
    lines = []
    for s in d.steps:
        just = s.rule + (f"({','.join(map(str, s.premises))})" if s.premises else "")
        line = f"{s.index}: {s.sequent} ; {just}"
        if s.subst:
            line += " ; " + ",".join(f"{GREEK[k]}={render(v)}" for k, v in sorted(s.subst.items()))
        lines.append(line)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    step: Optional[int] = None
    reason: str = ""
    checked: int = 0

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return f"OK {self.checked} steps"
        return f"FAIL step {self.step}: {self.reason}"


def _try_schema(schema: RuleSchema, step: Step, proved: dict) -> Optional[str]:
    """None if ``schema`` justifies ``step``, else the reason it does not."""
    if len(step.premises) != len(schema.premises):
        return f"{schema.name} takes {len(schema.premises)} premises, got {len(step.premises)}"
    unknown = set(step.subst) - set(schema.metavars)
    if unknown:
        return f"{schema.name} has no metavariable {', '.join(GREEK[u] for u in sorted(unknown))}"
    subst = match(schema.conclusion, step.sequent, step.subst)
    if subst is None:
        return f"sequent does not match the conclusion of {schema.name}: {schema.text()}"
    for pattern, ref in zip(schema.premises, step.premises):
        subst = match(pattern, proved[ref], subst)
        if subst is None:
            return f"step {ref} does not match premise {pattern} of {schema.name}"
    return None


def check_derivation(c: Calculus, d: Derivation) -> CheckReport:
    """Check every step; report the first failing step and why."""
    proved: dict[int, Sequent] = {}
    for n, step in enumerate(d.steps):
        if step.index in proved or (proved and step.index <= max(proved)):
            return CheckReport(False, step.index, "step indices must increase", n)
        bad = c.admits(step.sequent)
        if bad:
            return CheckReport(False, step.index, bad, n)
        for ref in step.premises:
            if ref >= step.index:
                return CheckReport(False, step.index, f"premise {ref} is not an earlier step", n)
            if ref not in proved:
                return CheckReport(False, step.index, f"premise {ref} does not exist", n)
        schemas = c.lookup(step.rule)
        if not schemas:
            return CheckReport(False, step.index, f"{c.name} has no rule {step.rule!r}", n)
        reasons = [_try_schema(s, step, proved) for s in schemas]
        if all(r is not None for r in reasons):
            return CheckReport(False, step.index, "; ".join(reasons), n)
        proved[step.index] = step.sequent
    return CheckReport(True, checked=len(d.steps))


# soundness audits -------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    schema: str
    instance: dict  # metavariable -> formula
    countermodel: str  # variable assignment, possibly empty
    lhs: str
    rhs: str

    def describe(self) -> str:
        inst = ",".join(f"{GREEK[k]}={render(v)}" for k, v in self.instance.items())
        where = f" with {self.countermodel}" if self.countermodel else ""
        return f"{inst}{where}: {self.lhs} not <= {self.rhs}"


@dataclass(frozen=True)
class AuditRow:
    schema: RuleSchema
    instances: int
    violations: int
    first: Optional[Violation]

    @property
    def passed(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class AuditReport:
    calculus: Calculus
    algebra: AlgebraStructure
    depth: int
    var_count: int
    classes: int
    rows: tuple

    @property
    def violations(self) -> list[AuditRow]:
        return sorted((r for r in self.rows if not r.passed), key=lambda r: r.schema.name)

    @property
    def sound(self) -> bool:
        return not self.violations

    def format(self) -> str:
        label = self.calculus.name + (f" ({self.calculus.variant})" if self.calculus.variant else "")
        head = [
            f"audit {label} in {self.algebra.name}: depth {self.depth}, {self.var_count} variables, "
            f"{self.classes} formula classes",
        ]
        width = max(len(r.schema.name) for r in self.rows)
        ordered = sorted(self.rows, key=lambda r: (r.passed, r.schema.name))
        body = []
        for r in ordered:
            status = "pass" if r.passed else "FAIL"
            cm = "-" if r.first is None else r.first.describe()
            body.append(f"{r.schema.name:<{width}}  {status}  {r.instances:>7}  {cm}   [{r.schema.text()}]")
        tail = [f"{len(self.violations)} violated schemas"]
        return "\n".join(head + body + tail) + "\n"


def _pattern_table(f: Formula, meta: dict, ev):
    if isinstance(f, Meta):
        return meta[f.name]
    if isinstance(f, Top):
        return ev.constant(ev.algebra.lattice.top)
    if isinstance(f, Bot):
        return ev.constant(ev.algebra.lattice.bottom)
    if isinstance(f, And):
        return ev.meet(_pattern_table(f.left, meta, ev), _pattern_table(f.right, meta, ev))
    if isinstance(f, Or):
        return ev.join(_pattern_table(f.left, meta, ev), _pattern_table(f.right, meta, ev))
    if isinstance(f, PseudoNeg):
        return ev.pseudo(_pattern_table(f.child, meta, ev))
    if isinstance(f, DualNeg):
        return ev.dual(_pattern_table(f.child, meta, ev))
    raise TypeError(f"unexpected {f!r} in a schema")


def _audit_schema(schema: RuleSchema, space: FormulaSpace, A: AlgebraStructure, chunk: int):
    ev = space.evaluators[0]
    M = space.matrix(0)  # (classes, valuations)
    n, V = M.shape
    leq = A.lattice.leq_matrix
    metas = schema.metavars
    k = len(metas)
    total = n**k
    violations = 0
    first = None
    # instances in product order over metavariables alpha, beta, ...
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk))
        digits = [(idx // n ** (k - 1 - j)) % n for j in range(k)]
        meta = {m: M[d] for m, d in zip(metas, digits)}

        def valid(s):
            lhs = _pattern_table(s.lhs, meta, ev)
            rhs = _pattern_table(s.rhs, meta, ev)
            lhs, rhs = np.broadcast_arrays(np.atleast_2d(lhs), np.atleast_2d(rhs))
            return leq[lhs, rhs].all(axis=1), lhs, rhs

        ok, lhs, rhs = valid(schema.conclusion)
        bad = ~ok
        for p in schema.premises:
            bad &= valid(p)[0]
        violations += int(bad.sum())
        if first is None and bad.any():
            i = int(np.flatnonzero(bad)[0])
            inst = {m: space.classes[int(d[i])].formula for m, d in zip(metas, digits)}
            row_bad = ~leq[lhs[i], rhs[i]]
            v = int(np.flatnonzero(row_bad)[0])
            names = A.names
            cm = " ".join(f"{x}={names[ev.grid[v, j]]}" for j, x in enumerate(space.variables) if _mentions(inst, x))
            first = Violation(schema.name, inst, cm, names[lhs[i, v]], names[rhs[i, v]])
    return total, violations, first


def _mentions(inst: dict, var: str) -> bool:
    return any(isinstance(g, Var) and g.name == var for f in inst.values() for g in subformulas(f))


def soundness_audit(
    c: Calculus,
    A: Optional[AlgebraStructure] = None,
    depth: int = 2,
    var_count: int = 2,
    max_cells: int = MAX_AUDIT_CELLS,
) -> AuditReport:
    """Check every schema instance built from formula classes of the given depth.

    Axioms must be order valid in ``A``; rules must carry order-valid premise
    instances to an order-valid conclusion instance.
    """
    A = c.generator if A is None else A
    missing = c.signature - A.signature
    if missing:
        raise MissingConnective(f"{A.name or 'algebra'} lacks {''.join(sorted(missing))} needed by {c.name}")
    if not 0 <= var_count <= 4:
        raise ValueError("var_count must be between 0 and 4")
    space = FormulaSpace([A], ("p", "q", "r", "s")[:var_count], depth, c.signature, c.constants)
    n, V = space.matrix(0).shape
    widest = max(len(s.metavars) for s in c.schemas)
    if n**widest * V > max_cells:
        raise TooLarge(f"{n}^{widest} instances x {V} valuations exceeds {max_cells}")
    chunk = max(1, 2_000_000 // max(1, V))
    rows = []
    for schema in c.schemas:
        total, count, first = _audit_schema(schema, space, A, chunk)
        rows.append(AuditRow(schema, total, count, first))
    return AuditReport(c, A, depth, var_count, n, tuple(rows))
