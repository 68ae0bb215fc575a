"""Finite posets and lattices, join-irreducibles and Birkhoff-style extension of order maps.

Elements are dense indices ``0..n-1`` with display names.  The order and both
operation tables are stored as full ``n x n`` numpy arrays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CyclicCovers,
    ExtensionNotIso,
    NotALattice,
    NotAnOrderIso,
    TooLarge,
    Unbounded,
)

MAX_PRODUCT_SIZE = 10**6


def _readonly(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def _bounds_of_pairs(leq, upper):
    """Least upper bounds (``upper=True``) or greatest lower bounds of all pairs.

    Raises NotALattice naming the first pair without a unique bound.
    """
    n = len(leq)
    rel = leq.T if upper else leq  # rel[c, a]: c is a candidate bound of a
    out = np.empty((n, n), dtype=np.intp)
    for a in range(n):
        bounds = rel[:, a][:, None] & rel  # bounds[c, b]
        # c is extremal among the bounds of (a, b) iff every bound d satisfies d <= c (dually)
        order = leq if upper else leq.T  # order[c, d]: c <= d  (dually d <= c)
        bad = (~order).astype(np.int32) @ bounds.astype(np.int32)  # bad[c, b]
        best = bounds & (bad == 0)
        counts = best.sum(axis=0)
        if not np.all(counts == 1):
            b = int(np.flatnonzero(counts != 1)[0])
            kind = "least upper" if upper else "greatest lower"
            raise NotALattice(f"elements {a} and {b} have no unique {kind} bound")
        out[a] = best.argmax(axis=0)
    return out


class FiniteLattice:
    """A bounded lattice on a finite carrier.

    ``leq[a, b]`` is true iff ``a <= b``; ``meet`` and ``join`` are integer tables.
    Construct through :func:`build_lattice` or :meth:`from_leq` unless the tables
    are already known to be correct.
    """

    def __init__(self, names: Sequence[str], leq, meet, join):
        self.names = tuple(str(x) for x in names)
        self.size = len(self.names)
        if self.size == 0:
            raise NotALattice("empty carrier")
        if len(set(self.names)) != self.size:
            raise NotALattice("duplicate element names")
        self._leq = None if leq is None else _readonly(np.asarray(leq, dtype=bool))
        self._meet = None if meet is None else _readonly(np.asarray(meet, dtype=np.intp))
        self._join = None if join is None else _readonly(np.asarray(join, dtype=np.intp))
        self.bottom, self.top = self._find_bounds()

    @classmethod
    def from_leq(cls, names, leq) -> "FiniteLattice":
        """Validate a partial order and derive meet/join by brute-force glb/lub search."""
        leq = np.asarray(leq, dtype=bool)
        n = len(names)
        if leq.shape != (n, n):
            raise NotALattice(f"order matrix has shape {leq.shape}, expected {(n, n)}")
        if not leq.diagonal().all():
            raise NotALattice("order is not reflexive")
        if np.any(leq & leq.T & ~np.eye(n, dtype=bool)):
            raise NotALattice("order is not antisymmetric")
        if np.any((leq.astype(np.int32) @ leq.astype(np.int32) > 0) & ~leq):
            raise NotALattice("order is not transitive")
        bottoms = np.flatnonzero(leq.all(axis=1))
        tops = np.flatnonzero(leq.all(axis=0))
        if len(bottoms) != 1 or len(tops) != 1:
            raise Unbounded("no global bottom or no global top")
        return cls(names, leq, _bounds_of_pairs(leq, upper=False), _bounds_of_pairs(leq, upper=True))

    # tables -----------------------------------------------------------------

    @property
    def leq_matrix(self) -> np.ndarray:
        return self._leq

    @property
    def meet_table(self) -> np.ndarray:
        return self._meet

    @property
    def join_table(self) -> np.ndarray:
        return self._join

    def _find_bounds(self):
        leq = self.leq_matrix
        bottoms = np.flatnonzero(leq.all(axis=1))
        tops = np.flatnonzero(leq.all(axis=0))
        if len(bottoms) != 1 or len(tops) != 1:
            raise Unbounded("no global bottom or no global top")
        return int(bottoms[0]), int(tops[0])

    # element level ------------------------------------------------------------

    def leq(self, a: int, b: int) -> bool:
        return bool(self.leq_matrix[a, b])

    def meet(self, a: int, b: int) -> int:
        return int(self.meet_table[a, b])

    def join(self, a: int, b: int) -> int:
        return int(self.join_table[a, b])

    def join_all(self, elements: Iterable[int]) -> int:
        """Join of a set of elements; the empty join is bottom."""
        return reduce(self.join, elements, self.bottom)

    def meet_all(self, elements: Iterable[int]) -> int:
        return reduce(self.meet, elements, self.top)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no element named {name!r}") from None

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(self.names)})"

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Cover pairs ``(lower, upper)`` of the Hasse diagram."""
        lt = self.leq_matrix & ~np.eye(self.size, dtype=bool)
        between = (lt.astype(np.int32) @ lt.astype(np.int32)) > 0
        cov = lt & ~between
        return tuple((int(a), int(b)) for a, b in zip(*np.nonzero(cov)))

    @cached_property
    def ranks(self) -> tuple[int, ...]:
        """Length of the longest chain from bottom to each element."""
        rank = [0] * self.size
        order = sorted(range(self.size), key=lambda x: int(self.leq_matrix[:, x].sum()))
        for b in order:
            for a, c in self.covers:
                if c == b:
                    rank[b] = max(rank[b], rank[a] + 1)
        return tuple(rank)

    def dual(self) -> "FiniteLattice":
        """The order-dual lattice (same names, reversed order)."""
        return FiniteLattice(self.names, self.leq_matrix.T, self.join_table, self.meet_table)

    def same_tables(self, other: "FiniteLattice") -> bool:
        return (
            self.names == other.names
            and np.array_equal(self.leq_matrix, other.leq_matrix)
            and np.array_equal(self.meet_table, other.meet_table)
            and np.array_equal(self.join_table, other.join_table)
        )


class ProductLattice(FiniteLattice):
    """``factor ** power`` with componentwise order; elements are tuples in lexicographic order."""

    def __init__(self, factor: FiniteLattice, power: int):
        self.factor = factor
        self.power = power
        rows = list(itertools.product(range(factor.size), repeat=power))
        self.digits = np.array(rows, dtype=np.intp).reshape(len(rows), power)
        self._weights = factor.size ** np.arange(power - 1, -1, -1, dtype=np.intp)
        names = []
        for row in self.digits:
            parts = [factor.names[d] for d in row]
            names.append(parts[0] if power == 1 else "(" + ",".join(parts) + ")")
        self._tables = None
        super().__init__(names, None, None, None)

    def encode(self, digits) -> int:
        return int(np.dot(np.asarray(digits, dtype=np.intp), self._weights))

    def unit(self, i: int, x: int) -> int:
        """The element equal to ``x`` at index ``i`` and bottom elsewhere."""
        if not 0 <= i < self.power:
            raise IndexError(f"index {i} outside 0..{self.power - 1}")
        row = [self.factor.bottom] * self.power
        row[i] = x
        return self.encode(row)

    def _find_bounds(self):
        return (
            self.encode([self.factor.bottom] * self.power),
            self.encode([self.factor.top] * self.power),
        )

    def _componentwise(self, table):
        d = self.digits
        out = table[d[:, None, :], d[None, :, :]]
        return out

    @cached_property
    def leq_matrix(self):
        return _readonly(self._componentwise(self.factor.leq_matrix).all(axis=2))

    @cached_property
    def meet_table(self):
        return _readonly(self._componentwise(self.factor.meet_table) @ self._weights)

    @cached_property
    def join_table(self):
        return _readonly(self._componentwise(self.factor.join_table) @ self._weights)

    def leq(self, a, b):
        return bool(np.all(self.factor.leq_matrix[self.digits[a], self.digits[b]]))

    def meet(self, a, b):
        return self.encode(self.factor.meet_table[self.digits[a], self.digits[b]])

    def join(self, a, b):
        return self.encode(self.factor.join_table[self.digits[a], self.digits[b]])


def build_lattice(covers: Iterable[tuple[str, str]], elements: Sequence[str] | None = None) -> FiniteLattice:
    """Build a lattice from cover pairs ``(lower, upper)`` over named elements.

    Elements keep the order of ``elements`` if given, otherwise their order of
    first appearance in ``covers``.
    """
    covers = [(str(a), str(b)) for a, b in covers]
    names = list(elements) if elements is not None else []
    for pair in covers:
        for x in pair:
            if x not in names:
                if elements is not None:
                    raise NotALattice(f"cover mentions unknown element {x!r}")
                names.append(x)
    if not names:
        raise NotALattice("empty carrier")
    pos = {x: i for i, x in enumerate(names)}
    n = len(names)
    reach = np.zeros((n, n), dtype=bool)
    for a, b in covers:
        if a == b:
            raise CyclicCovers(f"{a!r} covers itself")
        reach[pos[a], pos[b]] = True
    for k in range(n):  # Warshall closure of the strict relation
        reach |= reach[:, k][:, None] & reach[k, :][None, :]
    if reach.diagonal().any():
        x = names[int(np.flatnonzero(reach.diagonal())[0])]
        raise CyclicCovers(f"cover relation has a cycle through {x!r}")
    return FiniteLattice.from_leq(names, reach | np.eye(n, dtype=bool))


def chain(n: int, names: Sequence[str] | None = None) -> FiniteLattice:
    """The ``n``-element chain ``0 < 1 < ... < n-1``."""
    if names is None:
        names = [str(i) for i in range(n)]
    if len(names) != n:
        raise ValueError("need one name per element")
    idx = np.arange(n)
    return FiniteLattice(
        names, idx[:, None] <= idx[None, :], np.minimum.outer(idx, idx), np.maximum.outer(idx, idx)
    )


def lattice_from_elements(items: Sequence, leq, meet, join, names: Sequence[str]) -> FiniteLattice:
    """Materialize a lattice whose elements are arbitrary hashable values.

    ``meet``/``join`` must map into ``items``; a result outside raises KeyError,
    which callers translate into a closure error.
    """
    pos = {x: i for i, x in enumerate(items)}
    n = len(items)
    leq_m = np.array([[leq(x, y) for y in items] for x in items], dtype=bool)
    meet_t = np.empty((n, n), dtype=np.intp)
    join_t = np.empty((n, n), dtype=np.intp)
    for i, x in enumerate(items):
        for j, y in enumerate(items):
            meet_t[i, j] = pos[meet(x, y)]
            join_t[i, j] = pos[join(x, y)]
    return FiniteLattice(names, leq_m, meet_t, join_t)


def product_power(L: FiniteLattice, power: int) -> ProductLattice:
    """Componentwise product of ``power`` copies of ``L``; see :meth:`ProductLattice.unit`."""
    if power < 0:
        raise ValueError("power must be non-negative")
    if L.size**power > MAX_PRODUCT_SIZE:
        raise TooLarge(f"{L.size}**{power} elements exceeds {MAX_PRODUCT_SIZE}")
    return ProductLattice(L, power)


# distributivity and join-irreducibles -------------------------------------


def distributivity_failure(L: FiniteLattice):
    """First triple ``(a, b, c)`` with ``a & (b | c) != (a & b) | (a & c)``, or None."""
    m, j = L.meet_table, L.join_table
    lhs = m[:, j]  # lhs[a, b, c] = a & (b | c)
    rhs = j[m[:, :, None], m[:, None, :]]  # (a & b) | (a & c)
    bad = np.argwhere(lhs != rhs)
    return None if len(bad) == 0 else tuple(int(x) for x in bad[0])


def is_bounded_distributive(L: FiniteLattice) -> bool:
    return distributivity_failure(L) is None


def join_irreducibles(L: FiniteLattice) -> tuple[int, ...]:
    """Completely join-irreducible elements: ``a != join{x : x < a}`` (finite lattices only)."""
    out = []
    for a in range(L.size):
        below = [x for x in range(L.size) if x != a and L.leq_matrix[x, a]]
        if L.join_all(below) != a:
            out.append(a)
    return tuple(out)


def join_irreducibles_pairwise(L: FiniteLattice) -> tuple[int, ...]:
    """Independent scan: non-bottom elements that are not a join of two strictly smaller ones."""
    j = L.join_table
    out = []
    for a in range(L.size):
        if a == L.bottom:
            continue
        split = (j == a)
        split[a, :] = False
        split[:, a] = False
        if not split.any():
            out.append(a)
    return tuple(out)


def irreducibles_below(L: FiniteLattice, x: int, irreducibles: Sequence[int] | None = None) -> tuple[int, ...]:
    if irreducibles is None:
        irreducibles = join_irreducibles(L)
    return tuple(a for a in irreducibles if L.leq_matrix[a, x])


def is_join_dense(L: FiniteLattice, subset: Iterable[int]) -> bool:
    subset = tuple(subset)
    return all(
        L.join_all(s for s in subset if L.leq_matrix[s, a]) == a for a in range(L.size)
    )


# order maps ------------------------------------------------------------------


@dataclass(frozen=True)
class OrderMap:
    """A (partial) map between the carriers of two lattices; ``None`` marks undefined points."""

    source: FiniteLattice
    target: FiniteLattice
    assignment: tuple

    def __post_init__(self):
        if len(self.assignment) != self.source.size:
            raise ValueError("assignment must have one entry per source element")

    @classmethod
    def from_dict(cls, source, target, mapping: dict) -> "OrderMap":
        assignment = [None] * source.size
        for a, b in mapping.items():
            assignment[a] = b
        return cls(source, target, tuple(assignment))

    def __call__(self, a: int) -> int:
        b = self.assignment[a]
        if b is None:
            raise KeyError(f"map undefined at {self.source.names[a]}")
        return b

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(a for a, b in enumerate(self.assignment) if b is not None)

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted({b for b in self.assignment if b is not None}))

    def is_total(self) -> bool:
        return all(b is not None for b in self.assignment)

    def is_injective(self) -> bool:
        vals = [b for b in self.assignment if b is not None]
        return len(vals) == len(set(vals))

    def is_bijective(self) -> bool:
        return self.is_total() and self.is_injective() and len(self.image) == self.target.size

    def is_monotone(self) -> bool:
        dom = self.domain
        return all(
            self.target.leq_matrix[self(a), self(b)]
            for a in dom
            for b in dom
            if self.source.leq_matrix[a, b]
        )

    def reflects_order(self) -> bool:
        dom = self.domain
        return all(
            bool(self.source.leq_matrix[a, b]) == bool(self.target.leq_matrix[self(a), self(b)])
            for a in dom
            for b in dom
        )

    def preserves_lattice_ops(self, bounds: bool = True) -> bool:
        if not self.is_total():
            return False
        f = np.asarray(self.assignment, dtype=np.intp)
        s, t = self.source, self.target
        ok = np.array_equal(f[s.meet_table], t.meet_table[f[:, None], f[None, :]]) and np.array_equal(
            f[s.join_table], t.join_table[f[:, None], f[None, :]]
        )
        if bounds:
            ok = ok and f[s.bottom] == t.bottom and f[s.top] == t.top
        return bool(ok)

    def labelled(self) -> list[tuple[str, str]]:
        return [
            (self.source.names[a], self.target.names[b])
            for a, b in enumerate(self.assignment)
            if b is not None
        ]

    def compose(self, after: "OrderMap") -> "OrderMap":
        """``after`` applied to the result of ``self``."""
        return OrderMap(
            self.source,
            after.target,
            tuple(None if b is None else after.assignment[b] for b in self.assignment),
        )


def extend_order_iso(phi: OrderMap) -> OrderMap:
    """Extend an order isomorphism between join-irreducibles to ``x -> join(phi(J(x)))``.

    The result is checked to be a bijection preserving meet and join.
    """
    L, K = phi.source, phi.target
    JL, JK = join_irreducibles(L), join_irreducibles(K)
    if set(phi.domain) != set(JL):
        raise NotAnOrderIso("map is not defined exactly on the join-irreducibles of the source")
    if set(phi.image) != set(JK) or not phi.is_injective():
        raise NotAnOrderIso("map is not a bijection onto the join-irreducibles of the target")
    if not phi.reflects_order():
        raise NotAnOrderIso("map does not preserve and reflect the order")
    for M, side in ((L, "source"), (K, "target")):
        if not is_bounded_distributive(M):
            raise ExtensionNotIso(f"{side} lattice is not distributive")
    if not is_join_dense(L, JL) or not is_join_dense(K, JK):
        raise ExtensionNotIso("join-irreducibles are not join dense")
    full = tuple(K.join_all(phi(a) for a in irreducibles_below(L, x, JL)) for x in range(L.size))
    ext = OrderMap(L, K, full)
    if not ext.is_bijective() or not ext.preserves_lattice_ops():
        raise ExtensionNotIso("extension is not a lattice isomorphism")
    return ext
