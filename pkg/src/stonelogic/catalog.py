"""Every finite distributive lattice up to a size bound, up to isomorphism.

A finite distributive lattice is the lattice of down-sets of its poset of
join-irreducibles, so it is enough to grow posets one maximal element at a
time and stop once the down-set count passes the bound (adding an element
never loses down-sets).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .algebra import AlgebraStructure, classify
from .lattice import FiniteLattice


def _refine(leq: np.ndarray) -> list:
    """Isomorphism-invariant colour per element (iterated up/down neighbourhood counts)."""
    n = len(leq)
    colour = [(int(leq[:, i].sum()), int(leq[i].sum())) for i in range(n)]
    for _ in range(n):
        new = [
            (colour[i], tuple(sorted(colour[j] for j in range(n) if leq[j, i] and j != i)),
             tuple(sorted(colour[j] for j in range(n) if leq[i, j] and j != i)))
            for i in range(n)
        ]
        ranks = {c: r for r, c in enumerate(sorted(set(new)))}
        new = [ranks[c] for c in new]
        if len(set(new)) == len(set(colour)):
            colour = new
            break
        colour = new
    return colour


def canonical_form(leq: np.ndarray) -> bytes:
    """Least relabelled order matrix among orderings that sort by invariant colour."""
    leq = np.asarray(leq, dtype=bool)
    n = len(leq)
    if n == 0:
        return b""
    colour = _refine(leq)
    groups: dict = {}
    for i, c in enumerate(colour):
        groups.setdefault(c, []).append(i)
    best = None
    for perms in itertools.product(*(itertools.permutations(groups[c]) for c in sorted(groups))):
        order = [i for p in perms for i in p]
        key = np.packbits(leq[np.ix_(order, order)]).tobytes()
        if best is None or key < best:
            best = key
    return bytes([n]) + best


def downset_lattice(leq: np.ndarray, names=None) -> FiniteLattice:
    """Down-sets of a finite poset ordered by inclusion."""
    leq = np.asarray(leq, dtype=bool)
    n = len(leq)
    below = [int(sum(1 << j for j in range(n) if leq[j, i])) for i in range(n)]
    found = []
    for mask in range(1 << n):
        if all(below[i] & ~mask == 0 for i in range(n) if mask >> i & 1):
            found.append(mask)
    codes = np.array(found, dtype=np.int64)
    lookup = lambda a: np.searchsorted(codes, a)  # noqa: E731
    if names is None:
        names = ["{" + ",".join(str(i) for i in range(n) if m >> i & 1) + "}" for m in found]
    return FiniteLattice(
        names,
        (codes[:, None] & ~codes[None, :]) == 0,
        lookup(codes[:, None] & codes[None, :]),
        lookup(codes[:, None] | codes[None, :]),
    )


def _downset_count(leq: np.ndarray, limit: int) -> int:
    n = len(leq)
    below = [int(sum(1 << j for j in range(n) if leq[j, i])) for i in range(n)]
    count = 0
    for mask in range(1 << n):
        if all(below[i] & ~mask == 0 for i in range(n) if mask >> i & 1):
            count += 1
            if count > limit:
                break
    return count


@lru_cache(maxsize=None)
def _posets(max_downsets: int) -> tuple:
    """Posets (as order matrices) with at most ``max_downsets`` down-sets, one per iso class."""
    level = [np.ones((0, 0), dtype=bool)]
    out = list(level)
    while level:
        seen = {}
        for leq in level:
            n = len(leq)
            below_masks = [sum(1 << j for j in range(n) if leq[j, i]) for i in range(n)]
            # the new maximal element sits above a down-set of the current poset
            for mask in range(1 << n):
                if not all(below_masks[i] & ~mask == 0 for i in range(n) if mask >> i & 1):
                    continue
                grown = np.zeros((n + 1, n + 1), dtype=bool)
                grown[:n, :n] = leq
                grown[n, n] = True
                for j in range(n):
                    if mask >> j & 1:
                        grown[j, n] = True
                if _downset_count(grown, max_downsets) > max_downsets:
                    continue
                key = canonical_form(grown)
                seen.setdefault(key, grown)
        level = list(seen.values())
        out.extend(level)
    return tuple(out)


def distributive_lattices(max_size: int) -> list[FiniteLattice]:
    """All distributive lattices with at most ``max_size`` elements, smallest first."""
    lattices = [downset_lattice(leq) for leq in _posets(max_size)]
    return sorted(lattices, key=lambda L: L.size)


def stone_type_algebras(max_size: int) -> dict[str, list[AlgebraStructure]]:
    """Stone, dual Stone and double Stone algebras among the distributive lattices."""
    out: dict[str, list[AlgebraStructure]] = {"stone": [], "dual": [], "double": []}
    for i, L in enumerate(distributive_lattices(max_size)):
        A = classify(L, f"D{L.size}.{i}")
        if A.is_stone:
            out["stone"].append(A.restrict(dual=False))
        if A.is_dual_stone:
            out["dual"].append(A.restrict(pseudo=False))
        if A.is_double_stone:
            out["double"].append(A)
    return out
