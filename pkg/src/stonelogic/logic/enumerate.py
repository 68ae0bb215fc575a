"""Exhaustive enumeration of formulas up to semantic equivalence.

Two formulas are identified when their truth tables agree in every algebra of
a given list.  Any property decided by those tables (order validity, truth or
falsity preservation, pointwise validity) is then decided once per class
instead of once per formula, and the depth-``d`` classes are exactly closed
under the connectives applied to depth-``d-1`` classes.  The representative of
each class is the first formula found, so it has minimal depth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..algebra import AlgebraStructure
from ..errors import MissingConnective
from .formula import BOT, TOP, And, DualNeg, Formula, Or, PseudoNeg, Var
from .semantics import TableEvaluator


@dataclass(frozen=True)
class FormulaClass:
    formula: Formula
    depth: int
    tables: tuple  # one array per algebra


class FormulaSpace:
    """Classes of formulas in ``variables`` built from the given negations."""

    def __init__(
        self,
        algebras: Sequence[AlgebraStructure],
        variables: Sequence[str] = ("p", "q"),
        depth: int = 3,
        negations: Iterable[str] = ("~", "!"),
        constants: bool = True,
    ):
        self.constants = constants
        self.algebras = tuple(algebras)
        self.variables = tuple(variables)
        self.negations = tuple(n for n in ("~", "!") if n in set(negations))
        for A in self.algebras:
            missing = set(self.negations) - A.signature
            if missing:
                raise MissingConnective(f"{A.name or 'algebra'} lacks {sorted(missing)}")
        self.evaluators = tuple(TableEvaluator(A, self.variables) for A in self.algebras)
        self.depth = depth
        self.classes: list[FormulaClass] = []
        self._index: dict[bytes, int] = {}
        self._build()

    def _key(self, tables) -> bytes:
        return b"".join(np.asarray(t, dtype=np.int16).tobytes() for t in tables)

    def _add(self, f: Formula, d: int, tables) -> None:
        key = self._key(tables)
        if key not in self._index:
            self._index[key] = len(self.classes)
            self.classes.append(FormulaClass(f, d, tuple(tables)))

    def _build(self):
        atoms = ((TOP, BOT) if self.constants else ()) + tuple(Var(v) for v in self.variables)
        for atom in atoms:
            self._add(atom, 0, [ev.table(atom) for ev in self.evaluators])
        for d in range(1, self.depth + 1):
            previous = list(self.classes)
            for neg in self.negations:
                for c in previous:
                    if neg == "~":
                        tables = [ev.pseudo(t) for ev, t in zip(self.evaluators, c.tables)]
                        f = PseudoNeg(c.formula)
                    else:
                        tables = [ev.dual(t) for ev, t in zip(self.evaluators, c.tables)]
                        f = DualNeg(c.formula)
                    self._add(f, d, tables)
            for kind in (And, Or):
                for a in previous:
                    for b in previous:
                        if kind is And:
                            tables = [ev.meet(x, y) for ev, x, y in zip(self.evaluators, a.tables, b.tables)]
                        else:
                            tables = [ev.join(x, y) for ev, x, y in zip(self.evaluators, a.tables, b.tables)]
                        self._add(kind(a.formula, b.formula), d, tables)

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    @property
    def formulas(self) -> list[Formula]:
        return [c.formula for c in self.classes]

    def matrix(self, which: int = 0) -> np.ndarray:
        """``(classes, valuations)`` array of element indices in algebra ``which``."""
        return np.stack([c.tables[which] for c in self.classes])

    def sequent_relation(self, which: int, relation) -> np.ndarray:
        """Boolean ``(n, n)`` matrix: entry ``[i, j]`` holds when ``relation(lhs, rhs)``
        is true at every valuation, for ``lhs`` = class ``i`` and ``rhs`` = class ``j``.

        ``relation`` maps two broadcastable element-index arrays to a boolean array.
        """
        M = self.matrix(which)
        n = len(M)
        out = np.empty((n, n), dtype=bool)
        chunk = max(1, 2_000_000 // max(1, n * M.shape[1]))
        for start in range(0, n, chunk):
            lhs = M[start : start + chunk, None, :]
            out[start : start + chunk] = relation(lhs, M[None, :, :]).all(axis=2)
        return out


def order_relation(A: AlgebraStructure):
    leq = A.lattice.leq_matrix

    def rel(x, y):
        return leq[x, y]

    return rel


def truth_relation(A: AlgebraStructure):
    top = A.lattice.top

    def rel(x, y):
        return (x != top) | (y == top)

    return rel


def falsity_relation(A: AlgebraStructure):
    bottom = A.lattice.bottom

    def rel(x, y):
        return (y != bottom) | (x == bottom)

    return rel


def formula_classes(
    algebras: Sequence[AlgebraStructure],
    variables: Sequence[str] = ("p", "q"),
    depth: int = 3,
    negations: Iterable[str] = ("~", "!"),
    constants: bool = True,
) -> FormulaSpace:
    return FormulaSpace(algebras, variables, depth, negations, constants)
