"""Pawlak approximation spaces, rough sets and the Stone-type algebras they carry.

Subsets of the universe are bitmasks (point ``i`` is bit ``i``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .algebra import AlgebraStructure, BooleanAlgebra, boolean_algebra, classify, interval_power, preserves_structure
from .errors import NotAPartition, NotASubset, NotClosed, TableMismatch, TooLarge
from .lattice import FiniteLattice, OrderMap

MAX_UNIVERSE = 20
MAX_BLOCKS = 16


@dataclass(frozen=True)
class RoughPair:
    lower: int
    upper: int

    def __iter__(self):
        return iter((self.lower, self.upper))


@dataclass(frozen=True)
class ApproximationSpace:
    """A finite universe partitioned into indiscernibility classes."""

    universe: tuple
    blocks: tuple  # tuple of tuples of point indices

    def __post_init__(self):
        n = len(self.universe)
        if len(set(self.universe)) != n:
            raise NotAPartition("duplicate point names")
        seen = []
        for b in self.blocks:
            if not b:
                raise NotAPartition("empty block")
            seen.extend(b)
        if sorted(seen) != list(range(n)):
            raise NotAPartition("blocks must be disjoint and cover the universe")

    @classmethod
    def from_blocks(cls, universe: Sequence[str], blocks: Iterable[Iterable[str]]) -> "ApproximationSpace":
        universe = tuple(str(u) for u in universe)
        pos = {u: i for i, u in enumerate(universe)}
        try:
            idx = tuple(tuple(sorted(pos[str(x)] for x in b)) for b in blocks)
        except KeyError as e:
            raise NotAPartition(f"block mentions unknown point {e.args[0]!r}") from None
        return cls(universe, tuple(sorted(idx)))

    @classmethod
    def from_pairs(cls, universe: Sequence[str], pairs: Iterable[tuple[str, str]]) -> "ApproximationSpace":
        """Build the partition of an equivalence relation given as a pair list.

        The relation must already be reflexive, symmetric and transitive.
        """
        universe = tuple(str(u) for u in universe)
        pos = {u: i for i, u in enumerate(universe)}
        n = len(universe)
        rel = np.zeros((n, n), dtype=bool)
        for a, b in pairs:
            if a not in pos or b not in pos:
                raise NotAPartition(f"pair ({a}, {b}) leaves the universe")
            rel[pos[a], pos[b]] = True
        if not rel.diagonal().all():
            raise NotAPartition("relation is not reflexive")
        if not np.array_equal(rel, rel.T):
            raise NotAPartition("relation is not symmetric")
        if np.any((rel.astype(np.int32) @ rel.astype(np.int32) > 0) & ~rel):
            raise NotAPartition("relation is not transitive")
        blocks = {tuple(np.flatnonzero(rel[i])) for i in range(n)}
        return cls(universe, tuple(sorted(tuple(int(x) for x in b) for b in blocks)))

    @property
    def size(self) -> int:
        return len(self.universe)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def block_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << i for i in b) for b in self.blocks)

    def mask(self, points: Iterable[str] | int) -> int:
        if isinstance(points, (int, np.integer)):
            if points & ~self.full:
                raise NotASubset("bitmask has points outside the universe")
            return int(points)
        m = 0
        for p in points:
            try:
                m |= 1 << self.universe.index(str(p))
            except ValueError:
                raise NotASubset(f"{p!r} is not a point of the universe") from None
        return m

    def point(self, name: str | int) -> int:
        if isinstance(name, (int, np.integer)):
            if not 0 <= name < self.size:
                raise IndexError(name)
            return int(name)
        return self.universe.index(name)

    def describe(self, mask: int) -> str:
        return "{" + ",".join(u for i, u in enumerate(self.universe) if mask >> i & 1) + "}"

    def describe_pair(self, pair: RoughPair) -> str:
        return f"({self.describe(pair.lower)},{self.describe(pair.upper)})"

    def is_definable(self, mask: int) -> bool:
        return all(mask & b in (0, b) for b in self.block_masks)


def approximate(space: ApproximationSpace, subset) -> RoughPair:
    """Lower approximation (union of blocks inside) and upper (union of blocks meeting)."""
    a = space.mask(subset)
    lower = upper = 0
    for b in space.block_masks:
        if a & b == b:
            lower |= b
        if a & b:
            upper |= b
    return RoughPair(lower, upper)


def _pairs_by_enumeration(space: ApproximationSpace) -> set[tuple[int, int]]:
    subsets = np.arange(1 << space.size, dtype=np.int64)
    lower = np.zeros_like(subsets)
    upper = np.zeros_like(subsets)
    for b in space.block_masks:
        lower |= np.where(subsets & b == b, b, 0)
        upper |= np.where(subsets & b != 0, b, 0)
    return set(zip(lower.tolist(), upper.tolist()))


def rough_sets_characterized(space: ApproximationSpace) -> list[RoughPair]:
    """Definable ``D1 <= D2`` with no singleton block in ``D2 - D1``, built block by block."""
    if len(space.blocks) > MAX_BLOCKS:
        raise TooLarge(f"{len(space.blocks)} blocks exceeds {MAX_BLOCKS}")
    # per block: 0 outside, 1 boundary, 2 inside
    choices = [(0, 1, 2) if len(b) > 1 else (0, 2) for b in space.blocks]
    out = set()
    for states in itertools.product(*choices):
        lower = sum(m for m, s in zip(space.block_masks, states) if s == 2)
        upper = sum(m for m, s in zip(space.block_masks, states) if s >= 1)
        out.add((lower, upper))
    return [RoughPair(l, u) for l, u in sorted(out)]


def rough_sets(space: ApproximationSpace) -> list[RoughPair]:
    """All rough sets ``(LA, UA)``, sorted by ``(lower, upper)`` bitmasks.

    Computed as the image of :func:`approximate` over every subset and
    cross-checked against the singleton-free characterization.
    """
    if space.size > MAX_UNIVERSE:
        raise TooLarge(f"universe of {space.size} points exceeds {MAX_UNIVERSE}")
    found = _pairs_by_enumeration(space)
    pairs = [RoughPair(l, u) for l, u in sorted(found)]
    if pairs != rough_sets_characterized(space):
        raise AssertionError("rough set enumeration disagrees with its characterization")
    return pairs


def generalized_rough_sets(space: ApproximationSpace) -> list[RoughPair]:
    """All pairs of definable sets ``D1 <= D2``."""
    if len(space.blocks) > MAX_BLOCKS:
        raise TooLarge(f"{len(space.blocks)} blocks exceeds {MAX_BLOCKS}")
    out = []
    for states in itertools.product((0, 1, 2), repeat=len(space.blocks)):
        lower = sum(m for m, s in zip(space.block_masks, states) if s == 2)
        upper = sum(m for m, s in zip(space.block_masks, states) if s >= 1)
        out.append(RoughPair(lower, upper))
    return sorted(out, key=lambda p: (p.lower, p.upper))


def _space_boolean(space: ApproximationSpace) -> BooleanAlgebra:
    return boolean_algebra(space.size, space.universe)


def rs_algebra(space: ApproximationSpace, variant: str = "pseudo") -> AlgebraStructure:
    """Rough sets under componentwise union/intersection.

    ``variant`` selects the negation: ``pseudo`` with ``~(D1,D2) = (D2',D2')``,
    ``dual`` with ``!(D1,D2) = (D1',D1')``, or ``double`` for both.  The tables
    are derived from the order and must agree with those formulas.
    """
    if variant not in ("pseudo", "dual", "double"):
        raise ValueError(f"unknown variant {variant!r}")
    pairs = rough_sets(space)
    items = [(p.lower, p.upper) for p in pairs]
    pos = {x: i for i, x in enumerate(items)}
    n = len(items)
    meet = np.empty((n, n), dtype=np.intp)
    join = np.empty((n, n), dtype=np.intp)
    for i, (a, b) in enumerate(items):
        for j, (c, d) in enumerate(items):
            try:
                meet[i, j] = pos[(a & c, b & d)]
                join[i, j] = pos[(a | c, b | d)]
            except KeyError:
                raise NotClosed("componentwise operation leaves the rough sets") from None
    leq = np.array([[(a & ~c) == 0 and (b & ~d) == 0 for (c, d) in items] for (a, b) in items], dtype=bool)
    L = FiniteLattice([space.describe_pair(p) for p in pairs], leq, meet, join)
    base = classify(L, f"RS({space.size})")
    full = space.full
    try:
        pseudo = tuple(pos[(full ^ b, full ^ b)] for a, b in items)
        dual = tuple(pos[(full ^ a, full ^ a)] for a, b in items)
    except KeyError:
        raise NotClosed("negation formula leaves the rough sets") from None
    if base.pseudo_neg != pseudo or base.dual_neg != dual:
        raise TableMismatch("negation formulas disagree with the order-derived complements")
    if variant in ("pseudo", "double") and not base.is_stone:
        raise AssertionError("rough-set algebra failed the Stone check")
    if variant in ("dual", "double") and not base.is_dual_stone:
        raise AssertionError("rough-set algebra failed the dual Stone check")
    label = {"pseudo": "RS~", "dual": "RS!", "double": "RS"}[variant]
    A = replace(base, tuples=tuple(items), boolean=_space_boolean(space), name=label)
    return A.restrict(pseudo=variant != "dual", dual=variant != "pseudo")


def representation_space(points: Sequence[str]) -> tuple[ApproximationSpace, OrderMap]:
    """Double every point: ``u -> {u, u'}``; rough sets then mirror ``P(points)^[2]``.

    Returns the space and the verified isomorphism
    ``(A, B) -> (union of [a] for a in A, union of [b] for b in B)``.
    """
    points = tuple(str(p) for p in points)
    if len(points) > 10:
        raise TooLarge("at most 10 points")
    universe = []
    for p in points:
        universe += [p, p + "'"]
    blocks = [(2 * i, 2 * i + 1) for i in range(len(points))]
    space = ApproximationSpace(tuple(universe), tuple(blocks))
    source = interval_power(boolean_algebra(len(points), points or None), 2)
    target = rs_algebra(space, "double")

    def spread(mask):
        out = 0
        for i in range(len(points)):
            if mask >> i & 1:
                out |= 0b11 << (2 * i)
        return out

    pos = {t: i for i, t in enumerate(target.tuples)}
    m = OrderMap(
        source.lattice,
        target.lattice,
        tuple(pos[(spread(a), spread(b))] for a, b in source.tuples),
    )
    if not (m.is_bijective() and m.reflects_order() and preserves_structure(m, source, target)):
        raise AssertionError("doubling construction is not an isomorphism")
    return space, m
