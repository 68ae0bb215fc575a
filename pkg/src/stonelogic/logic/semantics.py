"""Valuations and the consequence relations: order validity, truth/falsity
preservation, pointwise (3- and 4-valued) decomposition and rough-set semantics.

Valuations over a list of variables are enumerated in product order: the first
variable is the most significant digit and each digit runs through the element
indices of the target.  "Least countermodel" means least in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from ..algebra import FOUR, THREE, THREE_DUAL, THREE_PSEUDO, AlgebraStructure
from ..errors import MissingConnective, PointNotInUniverse, TooLarge, UnboundVariable, UnsupportedAlgebra, WrongTarget
from ..roughset import ApproximationSpace, rs_algebra
from .formula import And, Bot, DualNeg, Formula, Meta, Or, PseudoNeg, Sequent, Top, Var, signature, variables

MAX_VALUATIONS = 10**6

MODES = ("truth", "falsity", "both")


@dataclass(frozen=True)
class Valuation:
    target: AlgebraStructure
    assignment: Mapping[str, int] = field(default_factory=dict)

    @classmethod
    def of(cls, target: AlgebraStructure, **values) -> "Valuation":
        """``Valuation.of(FOUR, p="u1", q=0)``: names or indices."""
        return cls(target, {k: target.element(v) if isinstance(v, str) else int(v) for k, v in values.items()})

    def __getitem__(self, name: str) -> int:
        try:
            return self.assignment[name]
        except KeyError:
            raise UnboundVariable(f"variable {name!r} has no value") from None

    def describe(self) -> str:
        return " ".join(f"{k}={self.target.names[v]}" for k, v in sorted(self.assignment.items()))


@dataclass(frozen=True)
class Verdict:
    valid: bool
    countermodel: Optional[Valuation] = None
    point: Optional[str] = None  # rough-set and pointwise verdicts
    lhs_value: Optional[int] = None
    rhs_value: Optional[int] = None

    def __bool__(self):
        return self.valid

    def describe(self) -> str:
        if self.valid:
            return "VALID"
        parts = ["INVALID"]
        if self.countermodel is not None and self.countermodel.assignment:
            parts.append(self.countermodel.describe())
        if self.point is not None:
            parts.append(f"at {self.point}")
        return " ".join(parts)


def _require(A: AlgebraStructure, sig) -> None:
    if "~" in sig and A.pseudo_neg is None:
        raise MissingConnective(f"{A.name or 'algebra'} has no pseudo-complement table")
    if "!" in sig and A.dual_neg is None:
        raise MissingConnective(f"{A.name or 'algebra'} has no dual pseudo-complement table")


def evaluate(f: Formula, v: Valuation) -> int:
    A = v.target
    _require(A, signature(f))
    L = A.lattice

    def go(f):
        if isinstance(f, Var):
            return v[f.name]
        if isinstance(f, Top):
            return L.top
        if isinstance(f, Bot):
            return L.bottom
        if isinstance(f, And):
            return L.meet(go(f.left), go(f.right))
        if isinstance(f, Or):
            return L.join(go(f.left), go(f.right))
        if isinstance(f, PseudoNeg):
            return A.pseudo_neg[go(f.child)]
        if isinstance(f, DualNeg):
            return A.dual_neg[go(f.child)]
        if isinstance(f, Meta):
            raise UnboundVariable(f"schema metavariable {f.name!r} cannot be evaluated")
        raise TypeError(f"not a formula: {f!r}")

    return go(f)


# vectorized tables ----------------------------------------------------------------


def valuation_count(A: AlgebraStructure, nvars: int) -> int:
    return A.size**nvars


def valuation_grid(A: AlgebraStructure, nvars: int, limit: Optional[int] = MAX_VALUATIONS) -> np.ndarray:
    """All valuations as rows of element indices, in product order."""
    count = valuation_count(A, nvars)
    if limit is not None and count > limit:
        raise TooLarge(f"{A.size}^{nvars} = {count} valuations exceeds {limit}")
    if nvars == 0:
        return np.zeros((1, 0), dtype=np.intp)
    grid = np.indices((A.size,) * nvars, dtype=np.intp).reshape(nvars, -1).T
    return np.ascontiguousarray(grid)


def valuation_at(A: AlgebraStructure, names: Sequence[str], row) -> Valuation:
    return Valuation(A, {n: int(x) for n, x in zip(names, row)})


class TableEvaluator:
    """Evaluates formulas on every valuation of a fixed variable list at once."""

    def __init__(self, A: AlgebraStructure, names: Sequence[str], limit: Optional[int] = MAX_VALUATIONS):
        self.algebra = A
        self.names = tuple(names)
        self.grid = valuation_grid(A, len(self.names), limit)
        self._meet = np.asarray(A.lattice.meet_table)
        self._join = np.asarray(A.lattice.join_table)
        self._pseudo = None if A.pseudo_neg is None else np.asarray(A.pseudo_neg, dtype=np.intp)
        self._dual = None if A.dual_neg is None else np.asarray(A.dual_neg, dtype=np.intp)
        self._cache: dict = {}

    @property
    def count(self) -> int:
        return self.grid.shape[0]

    def constant(self, x: int) -> np.ndarray:
        return np.full(self.count, x, dtype=np.intp)

    def variable(self, name: str) -> np.ndarray:
        try:
            return self.grid[:, self.names.index(name)]
        except ValueError:
            raise UnboundVariable(f"variable {name!r} not in {self.names}") from None

    def meet(self, x, y):
        return self._meet[x, y]

    def join(self, x, y):
        return self._join[x, y]

    def pseudo(self, x):
        if self._pseudo is None:
            raise MissingConnective(f"{self.algebra.name or 'algebra'} has no pseudo-complement table")
        return self._pseudo[x]

    def dual(self, x):
        if self._dual is None:
            raise MissingConnective(f"{self.algebra.name or 'algebra'} has no dual pseudo-complement table")
        return self._dual[x]

    def table(self, f: Formula) -> np.ndarray:
        hit = self._cache.get(f)
        if hit is not None:
            return hit
        L = self.algebra.lattice
        if isinstance(f, Var):
            out = self.variable(f.name)
        elif isinstance(f, Top):
            out = self.constant(L.top)
        elif isinstance(f, Bot):
            out = self.constant(L.bottom)
        elif isinstance(f, And):
            out = self.meet(self.table(f.left), self.table(f.right))
        elif isinstance(f, Or):
            out = self.join(self.table(f.left), self.table(f.right))
        elif isinstance(f, PseudoNeg):
            out = self.pseudo(self.table(f.child))
        elif isinstance(f, DualNeg):
            out = self.dual(self.table(f.child))
        elif isinstance(f, Meta):
            raise UnboundVariable(f"schema metavariable {f.name!r} cannot be evaluated")
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._cache[f] = out
        return out


def formula_table(f: Formula, A: AlgebraStructure, names: Sequence[str] | None = None, limit: Optional[int] = MAX_VALUATIONS):
    names = variables(f) if names is None else tuple(names)
    return TableEvaluator(A, names, limit).table(f)


def _first_failure(bad: np.ndarray) -> Optional[int]:
    idx = np.flatnonzero(bad)
    return int(idx[0]) if idx.size else None


def _prepare(s: Sequent, A: AlgebraStructure, limit):
    _require(A, signature(s))
    names = variables(s)
    ev = TableEvaluator(A, names, limit)
    return names, ev, ev.table(s.lhs), ev.table(s.rhs)


def _verdict(A, names, ev, lhs, rhs, bad) -> Verdict:
    i = _first_failure(bad)
    if i is None:
        return Verdict(True)
    return Verdict(False, valuation_at(A, names, ev.grid[i]), None, int(lhs[i]), int(rhs[i]))


def order_valid(s: Sequent, A: AlgebraStructure, limit: Optional[int] = MAX_VALUATIONS) -> Verdict:
    """``v(lhs) <= v(rhs)`` for every valuation; otherwise the least countermodel."""
    names, ev, lhs, rhs = _prepare(s, A, limit)
    bad = ~A.lattice.leq_matrix[lhs, rhs]
    return _verdict(A, names, ev, lhs, rhs, bad)


_PRESERVATION_TARGETS = (THREE_PSEUDO, THREE_DUAL, FOUR, THREE)


def _is_preservation_target(A: AlgebraStructure) -> bool:
    for T in _PRESERVATION_TARGETS:
        if (
            A.size == T.size
            and A.lattice.same_tables(T.lattice)
            and A.pseudo_neg in (None, T.pseudo_neg)
            and A.dual_neg in (None, T.dual_neg)
        ):
            return True
    return False


def preservation_failures(lhs, rhs, A: AlgebraStructure, mode: str) -> np.ndarray:
    top, bottom = A.lattice.top, A.lattice.bottom
    truth_bad = (lhs == top) & (rhs != top)
    falsity_bad = (rhs == bottom) & (lhs != bottom)
    if mode == "truth":
        return truth_bad
    if mode == "falsity":
        return falsity_bad
    if mode == "both":
        return truth_bad | falsity_bad
    raise ValueError(f"mode must be one of {MODES}")


def preserve_valid(s: Sequent, A: AlgebraStructure, mode: str = "truth", limit: Optional[int] = MAX_VALUATIONS) -> Verdict:
    """Truth preservation (``v(lhs)=1 => v(rhs)=1``), falsity preservation
    (``v(rhs)=0 => v(lhs)=0``) or both, over the chains 3~, 3!, 4."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if not _is_preservation_target(A):
        raise UnsupportedAlgebra(f"truth/falsity preservation is defined over 3~, 3! and 4, not {A.name or A}")
    names, ev, lhs, rhs = _prepare(s, A, limit)
    return _verdict(A, names, ev, lhs, rhs, preservation_failures(lhs, rhs, A, mode))


def double_neg_transform(v: Valuation, which: str = "pseudo") -> Valuation:
    """``v*(p) = ~~v(p)`` (or ``!!v(p)`` with ``which='dual'``)."""
    A = v.target
    if which == "pseudo":
        table = A.pseudo_neg
    elif which == "dual":
        table = A.dual_neg
    else:
        raise ValueError("which must be 'pseudo' or 'dual'")
    if table is None:
        raise MissingConnective(f"{A.name or 'algebra'} lacks the {which} table")
    return Valuation(A, {k: table[table[x]] for k, x in v.assignment.items()})


# pointwise decomposition --------------------------------------------------------------


def _point_index(A: AlgebraStructure, x) -> int:
    B = A.boolean
    if isinstance(x, (int, np.integer)):
        if not 0 <= x < B.k:
            raise PointNotInUniverse(f"point {x} out of range")
        return int(x)
    try:
        return B.atom_names.index(x)
    except ValueError:
        raise PointNotInUniverse(f"{x!r} is not a point") from None


def band(A: AlgebraStructure, element: int, x) -> int:
    """Number of tuple components of ``element`` containing point ``x``.

    For pairs this indexes the chain 0 < a < 1; for triples f < u2 < u1 < t.
    """
    if A.tuples is None or A.boolean is None:
        raise WrongTarget("pointwise decomposition needs a tuple algebra over a powerset")
    i = _point_index(A, x)
    return sum(c >> i & 1 for c in A.tuples[element])


def band_target(A: AlgebraStructure) -> AlgebraStructure:
    if A.tuples is None or A.boolean is None:
        raise WrongTarget("pointwise decomposition needs a tuple algebra over a powerset")
    n = len(A.tuples[0])
    if n == 2:
        return {frozenset("~"): THREE_PSEUDO, frozenset("!"): THREE_DUAL}.get(A.signature, THREE)
    if n == 3:
        return FOUR
    raise WrongTarget(f"no pointwise chain for {n}-tuples")


def pointwise_decompose(v: Valuation, x) -> Valuation:
    """The valuation ``v_x`` sending each variable to the band of ``x`` in its value."""
    A = v.target
    T = band_target(A)
    return Valuation(T, {k: band(A, e, x) for k, e in v.assignment.items()})


def band_array(A: AlgebraStructure) -> np.ndarray:
    """``out[e, i]`` is the band of point ``i`` in element ``e``."""
    band_target(A)
    k = A.boolean.k
    comps = np.asarray(A.tuples, dtype=np.int64)
    bits = (comps[:, :, None] >> np.arange(k)[None, None, :]) & 1
    return bits.sum(axis=1).astype(np.intp)


def pointwise_valid(s: Sequent, A: AlgebraStructure, limit: Optional[int] = MAX_VALUATIONS) -> Verdict:
    """``v_x(lhs) <= v_x(rhs)`` in the band chain for every valuation ``v`` into ``A``
    and every point ``x``, each ``v_x`` built by :func:`pointwise_decompose`."""
    T = band_target(A)
    _require(A, signature(s))
    _require(T, signature(s))
    names = variables(s)
    grid = valuation_grid(A, len(names), limit)
    bands = band_array(A)
    chain = TableEvaluator(T, names)
    lhs_t, rhs_t = chain.table(s.lhs), chain.table(s.rhs)
    weights = T.size ** np.arange(len(names) - 1, -1, -1)
    # row index into the chain's valuation grid for each (valuation, point)
    vx = (bands[grid] * weights[None, :, None]).sum(axis=1) if names else np.zeros((grid.shape[0], A.boolean.k), dtype=np.intp)
    bad = ~T.lattice.leq_matrix[lhs_t[vx], rhs_t[vx]]
    hits = np.argwhere(bad)
    if not hits.size:
        return Verdict(True)
    row, point = hits[0]
    return Verdict(False, valuation_at(A, names, grid[row]), A.boolean.atom_names[point], int(lhs_t[vx[row, point]]), int(rhs_t[vx[row, point]]))


# rough-set semantics -------------------------------------------------------------------

STATUSES = ("certain", "impossible", "boundary")


def rs_status(space: ApproximationSpace, pair, x) -> str:
    try:
        i = space.point(x)
    except (ValueError, IndexError):
        raise PointNotInUniverse(f"{x!r} is not a point of the universe") from None
    lower, upper = pair
    if lower >> i & 1:
        return "certain"
    if not upper >> i & 1:
        return "impossible"
    return "boundary"


def rs_pointwise(space: ApproximationSpace, v: Valuation, x, f: Formula) -> str:
    A = v.target
    if A.tuples is None:
        raise WrongTarget("valuation must target a rough-set algebra")
    return rs_status(space, A.tuples[evaluate(f, v)], x)


def rs_valid(space: ApproximationSpace, s: Sequent, variant: str = "pseudo", limit: Optional[int] = MAX_VALUATIONS) -> Verdict:
    """pseudo: wherever ``lhs`` is certain so is ``rhs``;
    dual: wherever ``rhs`` is impossible so is ``lhs``."""
    if variant not in ("pseudo", "dual"):
        raise ValueError("variant must be 'pseudo' or 'dual'")
    A = rs_algebra(space, variant)
    names, ev, lhs, rhs = _prepare(s, A, limit)
    comps = np.asarray(A.tuples, dtype=np.int64)
    if variant == "pseudo":
        escape = comps[lhs, 0] & ~comps[rhs, 0]
    else:
        escape = comps[lhs, 1] & ~comps[rhs, 1]
    rows = np.flatnonzero(escape)
    if not rows.size:
        return Verdict(True)
    r = int(rows[0])
    low = (int(escape[r]) & -int(escape[r])).bit_length() - 1
    return Verdict(False, valuation_at(A, names, ev.grid[r]), space.universe[low], int(lhs[r]), int(rhs[r]))
