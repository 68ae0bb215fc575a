"""Pseudo-complemented lattices, Stone-type classification and interval powers of Boolean algebras."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import (
    EmbeddingFailed,
    ExtensionNotIso,
    NoDualPseudoComplement,
    NoPseudoComplement,
    NotClassified,
    SignatureMismatch,
    TableMismatch,
    TooLarge,
    UnsupportedArity,
)
from .lattice import (
    MAX_PRODUCT_SIZE,
    FiniteLattice,
    OrderMap,
    chain,
    extend_order_iso,
    is_bounded_distributive,
    product_power,
)

MAX_ATOMS = 20
MAX_TABLE_SIZE = 4096


# Boolean algebras ------------------------------------------------------------------


class BooleanAlgebra:
    """Subsets of ``k`` atoms as bitmasks; element index == bitmask.

    Element names follow the set-as-word convention: atoms ``x, y, z, w`` (or
    ``a0, a1, ...`` beyond four atoms), ``0`` for the empty set and ``1`` for
    the full set, e.g. ``{0, x, y, 1}`` for two atoms.
    """

    def __init__(self, k: int, atom_names: Sequence[str] | None = None):
        if not 0 <= k <= MAX_ATOMS:
            raise TooLarge(f"atom count {k} outside 0..{MAX_ATOMS}")
        if atom_names is None:
            atom_names = list("xyzw"[:k]) if k <= 4 else [f"a{i}" for i in range(k)]
        if len(atom_names) != k:
            raise ValueError("need one name per atom")
        self.k = k
        self.atom_names = tuple(str(a) for a in atom_names)
        self.full = (1 << k) - 1
        self.size = 1 << k

    def atom(self, i: int) -> int:
        if not 0 <= i < self.k:
            raise IndexError(f"atom index {i} outside 0..{self.k - 1}")
        return 1 << i

    def complement(self, a: int) -> int:
        return self.full ^ a

    def name(self, a: int) -> str:
        if a == 0:
            return "0"
        if a == self.full:
            return "1"
        parts = [self.atom_names[i] for i in range(self.k) if a >> i & 1]
        if all(len(p) == 1 for p in self.atom_names):
            return "".join(parts)
        return "{" + ",".join(parts) + "}"

    @cached_property
    def lattice(self) -> FiniteLattice:
        if self.size > MAX_TABLE_SIZE:
            raise TooLarge(f"2**{self.k} elements is too many for full tables")
        idx = np.arange(self.size)
        return FiniteLattice(
            [self.name(a) for a in idx],
            (idx[:, None] & ~idx[None, :]) == 0,
            idx[:, None] & idx[None, :],
            idx[:, None] | idx[None, :],
        )

    def __repr__(self):
        return f"BooleanAlgebra(k={self.k})"


def boolean_algebra(k: int, atom_names: Sequence[str] | None = None) -> BooleanAlgebra:
    return BooleanAlgebra(k, atom_names)


# complements -----------------------------------------------------------------------


def pseudo_complement(L: FiniteLattice, a: int) -> int:
    """Greatest ``c`` with ``a & c == 0``."""
    ann = np.flatnonzero(L.meet_table[a] == L.bottom)
    for c in ann:
        if L.leq_matrix[ann, c].all():
            return int(c)
    raise NoPseudoComplement(f"{L.names[a]} has no pseudo-complement")


def dual_pseudo_complement(L: FiniteLattice, a: int) -> int:
    """Least ``c`` with ``a | c == 1``."""
    co = np.flatnonzero(L.join_table[a] == L.top)
    for c in co:
        if L.leq_matrix[c, co].all():
            return int(c)
    raise NoDualPseudoComplement(f"{L.names[a]} has no dual pseudo-complement")


def _table_or_none(L, fn):
    try:
        return tuple(fn(L, a) for a in range(L.size))
    except (NoPseudoComplement, NoDualPseudoComplement):
        return None


@dataclass(frozen=True)
class AlgebraStructure:
    """A lattice with optional pseudo (``~``) and dual pseudo (``!``) complement tables.

    ``tuples`` and ``boolean`` are set for interval powers and rough-set algebras:
    element ``i`` is the monotone tuple ``tuples[i]`` of bitmasks over ``boolean``.
    """

    lattice: FiniteLattice
    pseudo_neg: Optional[tuple] = None
    dual_neg: Optional[tuple] = None
    is_stone: bool = False
    is_dual_stone: bool = False
    is_double_stone: bool = False
    name: str = ""
    tuples: Optional[tuple] = None
    boolean: Optional[BooleanAlgebra] = None

    @property
    def size(self) -> int:
        return self.lattice.size

    @property
    def names(self):
        return self.lattice.names

    @property
    def signature(self) -> frozenset:
        sig = set()
        if self.pseudo_neg is not None:
            sig.add("~")
        if self.dual_neg is not None:
            sig.add("!")
        return frozenset(sig)

    def restrict(self, pseudo: bool = True, dual: bool = True, name: str | None = None) -> "AlgebraStructure":
        """Drop negation tables from the signature (classification flags are kept)."""
        return replace(
            self,
            pseudo_neg=self.pseudo_neg if pseudo else None,
            dual_neg=self.dual_neg if dual else None,
            name=self.name if name is None else name,
        )

    def pseudo(self, a: int) -> int:
        return self.pseudo_neg[a]

    def dual(self, a: int) -> int:
        return self.dual_neg[a]

    def element(self, name: str) -> int:
        return self.lattice.index(name)

    def is_tuple_algebra(self) -> bool:
        return self.tuples is not None

    def __repr__(self):
        label = self.name or f"{self.size}-element algebra"
        return f"AlgebraStructure({label}, signature={''.join(sorted(self.signature)) or '-'})"


def classify(L: FiniteLattice, name: str = "") -> AlgebraStructure:
    """Compute both negation tables (where total) and the Stone / dual Stone / double Stone flags."""
    distributive = is_bounded_distributive(L)
    pseudo = _table_or_none(L, pseudo_complement)
    dual = _table_or_none(L, dual_pseudo_complement)
    stone = (
        distributive
        and pseudo is not None
        and all(L.join(pseudo[a], pseudo[pseudo[a]]) == L.top for a in range(L.size))
    )
    dual_stone = (
        distributive
        and dual is not None
        and all(L.meet(dual[a], dual[dual[a]]) == L.bottom for a in range(L.size))
    )
    return AlgebraStructure(
        L,
        pseudo,
        dual,
        is_stone=stone,
        is_dual_stone=dual_stone,
        is_double_stone=stone and dual_stone,
        name=name,
    )


def with_tables(L: FiniteLattice, pseudo=None, dual=None, name: str = "") -> AlgebraStructure:
    """Attach negation tables after checking them against the order-derived ones."""
    base = classify(L, name)
    for given, derived, label in ((pseudo, base.pseudo_neg, "pseudo"), (dual, base.dual_neg, "dual")):
        if given is not None and (derived is None or tuple(given) != derived):
            raise TableMismatch(f"{label} negation table disagrees with the order")
    return base.restrict(pseudo=pseudo is not None, dual=dual is not None)


# named small algebras ------------------------------------------------------------

ONE = classify(chain(1, ["0"]), "1")
TWO = classify(chain(2, ["0", "1"]), "2")
THREE = classify(chain(3, ["0", "a", "1"]), "3")
THREE_PSEUDO = THREE.restrict(dual=False, name="3~")
THREE_DUAL = THREE.restrict(pseudo=False, name="3!")
FOUR = classify(chain(4, ["f", "u2", "u1", "t"]), "4")


def named_algebra(key: str) -> AlgebraStructure:
    """Look up ``3s``/``3d``/``4``/``3``/``2``/``1`` (also ``3~``/``3!``)."""
    table = {
        "1": ONE,
        "2": TWO,
        "3": THREE,
        "3s": THREE_PSEUDO,
        "3~": THREE_PSEUDO,
        "3d": THREE_DUAL,
        "3!": THREE_DUAL,
        "4": FOUR,
    }
    try:
        return table[key]
    except KeyError:
        raise KeyError(f"unknown algebra {key!r}; expected one of {sorted(table)}") from None


# powers and interval powers ------------------------------------------------------


def algebra_power(A: AlgebraStructure, power: int) -> AlgebraStructure:
    """``A ** power`` with componentwise lattice operations and negations."""
    P = product_power(A.lattice, power)

    def lift(table):
        if table is None:
            return None
        t = np.asarray(table, dtype=np.intp)
        return tuple(int(x) for x in t[P.digits] @ P._weights)

    label = f"{A.name or 'A'}^{power}"
    return replace(A, lattice=P, pseudo_neg=lift(A.pseudo_neg), dual_neg=lift(A.dual_neg), name=label)


def interval_power(B: BooleanAlgebra, n: int) -> AlgebraStructure:
    """Monotone ``n``-tuples over ``B`` (``n`` in {2, 3}) with the complement-based negations.

    Pairs: ``~(a,b) = (b',b')`` and ``!(a,b) = (a',a')``.  Triples:
    ``~(a,b,c) = (c',c',c')`` and ``!(a,b,c) = (a',a',a')``.  Both tables are
    checked against the order-derived complements.
    """
    if n not in (2, 3):
        raise UnsupportedArity(f"interval power arity must be 2 or 3, got {n}")
    count = (n + 1) ** B.k
    if count > min(MAX_PRODUCT_SIZE, MAX_TABLE_SIZE):
        raise TooLarge(f"interval power has {count} elements")
    k = B.k
    tuples = [t for t in itertools.product(range(B.size), repeat=n) if all(t[i] & ~t[i + 1] == 0 for i in range(n - 1))]
    tuples.sort()
    # one integer per tuple with the first component most significant: numeric order == tuple order
    codes = np.array([sum(c << (k * (n - 1 - i)) for i, c in enumerate(t)) for t in tuples], dtype=np.int64)
    lookup = lambda arr: np.searchsorted(codes, arr)  # noqa: E731
    L = FiniteLattice(
        ["(" + ",".join(B.name(c) for c in t) + ")" for t in tuples],
        (codes[:, None] & ~codes[None, :]) == 0,
        lookup(codes[:, None] & codes[None, :]),
        lookup(codes[:, None] | codes[None, :]),
    )
    pos = {t: i for i, t in enumerate(tuples)}
    pseudo = tuple(pos[(B.complement(t[-1]),) * n] for t in tuples)
    dual = tuple(pos[(B.complement(t[0]),) * n] for t in tuples)
    base = classify(L, f"B^[{n}]")
    if base.pseudo_neg != pseudo or base.dual_neg != dual:
        raise TableMismatch("complement formulas disagree with the order-derived negations")
    return replace(base, tuples=tuple(tuples), boolean=B, name=f"(2^{k})^[{n}]")


def tuple_index(A: AlgebraStructure, components: Sequence[int]) -> int:
    """Index of the element with the given bitmask components in a tuple algebra."""
    return A.tuples.index(tuple(components))


# canonical isomorphisms -------------------------------------------------------------


def canonical_iso(power: int, n: int) -> OrderMap:
    """The isomorphism ``3^I -> (2^I)^[2]`` (``n=2``) or ``4^I -> (2^I)^[3]`` (``n=3``).

    Defined on join-irreducibles by sending the unit at index ``i`` with value
    ``a`` to ``(0,g)`` and value ``1`` to ``(g,g)`` (for ``n=3``: ``u2, u1, 1`` to
    ``(0,0,g), (0,g,g), (g,g,g)``), where ``g`` is the ``i``-th atom, and
    extended by joins.  Commutation with both negations is verified.
    """
    if n not in (2, 3):
        raise UnsupportedArity(f"arity must be 2 or 3, got {n}")
    factor = THREE if n == 2 else FOUR
    source = algebra_power(factor, power)
    B = boolean_algebra(power)
    target = interval_power(B, n)
    S = source.lattice
    # values of the factor in increasing order, paired with how many leading zeros the tuple keeps
    levels = list(range(1, factor.size))
    phi = {}
    for i in range(power):
        g = B.atom(i)
        for x in levels:
            zeros = n - x
            comps = (0,) * zeros + (g,) * (n - zeros)
            phi[S.unit(i, x)] = tuple_index(target, comps)
    ext = extend_order_iso(OrderMap.from_dict(S, target.lattice, phi))
    check_negations(ext, source, target)
    return ext


def check_negations(m: OrderMap, source: AlgebraStructure, target: AlgebraStructure) -> None:
    for label, s_tab, t_tab in (
        ("~", source.pseudo_neg, target.pseudo_neg),
        ("!", source.dual_neg, target.dual_neg),
    ):
        if s_tab is None or t_tab is None:
            continue
        for x in range(source.size):
            if m(s_tab[x]) != t_tab[m(x)]:
                raise ExtensionNotIso(f"map does not commute with {label} at {source.names[x]}")


def preserves_structure(m: OrderMap, source: AlgebraStructure, target: AlgebraStructure) -> bool:
    """Total map preserving meet, join, bounds and every negation both sides carry."""
    if not m.preserves_lattice_ops():
        return False
    try:
        check_negations(m, source, target)
    except ExtensionNotIso:
        return False
    return True


# homomorphisms and subdirect embeddings ---------------------------------------------


def _propagate(h, pairs, A, B, tables):
    """Assign forced values; returns the extended assignment or None on conflict."""
    h = list(h)
    queue = list(pairs)
    mA, jA = A.lattice.meet_table, A.lattice.join_table
    mB, jB = B.lattice.meet_table, B.lattice.join_table
    while queue:
        x, v = queue.pop()
        if h[x] is not None:
            if h[x] != v:
                return None
            continue
        h[x] = v
        for y, w in enumerate(h):
            if w is None:
                continue
            queue.append((int(mA[x, y]), int(mB[v, w])))
            queue.append((int(jA[x, y]), int(jB[v, w])))
        for ta, tb in tables:
            queue.append((ta[x], tb[v]))
    return h


def enumerate_homomorphisms(A: AlgebraStructure, B: AlgebraStructure) -> list[tuple[int, ...]]:
    """All maps preserving meet, join, 0, 1 and every negation in the (common) signature."""
    if A.signature != B.signature:
        raise SignatureMismatch(f"signatures differ: {sorted(A.signature)} vs {sorted(B.signature)}")
    tables = []
    if A.pseudo_neg is not None:
        tables.append((A.pseudo_neg, B.pseudo_neg))
    if A.dual_neg is not None:
        tables.append((A.dual_neg, B.dual_neg))
    start = _propagate(
        [None] * A.size,
        [(A.lattice.bottom, B.lattice.bottom), (A.lattice.top, B.lattice.top)],
        A,
        B,
        tables,
    )
    out = []

    def search(h):
        if h is None:
            return
        try:
            x = h.index(None)
        except ValueError:
            out.append(tuple(h))
            return
        for v in range(B.size):
            search(_propagate(h, [(x, v)], A, B, tables))

    search(start)
    return sorted(out)


def _si_factors(A: AlgebraStructure):
    """Subdirectly irreducible factors for A's class and their embedding into the largest one."""
    if A.pseudo_neg is not None and A.dual_neg is not None:
        if not A.is_double_stone:
            raise NotClassified("algebra is not a double Stone algebra")
        big = FOUR
        # 2 -> {f, t}; 3 -> {f, u1, t}
        factors = [(TWO, (0, 3)), (THREE, (0, 2, 3)), (FOUR, (0, 1, 2, 3))]
    elif A.pseudo_neg is not None:
        if not A.is_stone:
            raise NotClassified("algebra is not a Stone algebra")
        big = THREE_PSEUDO
        factors = [(TWO.restrict(dual=False), (0, 2)), (THREE_PSEUDO, (0, 1, 2))]
    elif A.dual_neg is not None:
        if not A.is_dual_stone:
            raise NotClassified("algebra is not a dual Stone algebra")
        big = THREE_DUAL
        factors = [(TWO.restrict(pseudo=False), (0, 2)), (THREE_DUAL, (0, 1, 2))]
    else:
        raise NotClassified("algebra carries no negation table")
    return big, factors


@dataclass(frozen=True)
class Embedding:
    """Product of surjective homomorphisms onto subdirectly irreducible factors."""

    source: AlgebraStructure
    target: AlgebraStructure  # factor ** I
    map: OrderMap
    homomorphisms: tuple  # (factor name, tuple map into the big factor)

    @property
    def index_count(self) -> int:
        return len(self.homomorphisms)

    @cached_property
    def interval_target(self) -> AlgebraStructure:
        n = 3 if self.target.lattice.factor.size == 4 else 2
        return interval_power(boolean_algebra(self.index_count), n)

    @cached_property
    def interval_map(self) -> OrderMap:
        """The embedding composed with the canonical isomorphism into ``(2^I)^[n]``."""
        n = 3 if self.target.lattice.factor.size == 4 else 2
        iso = canonical_iso(self.index_count, n)
        return OrderMap(self.source.lattice, self.interval_target.lattice, self.map.compose(iso).assignment)


def _separates(homs, size):
    return len({tuple(h[x] for h in homs) for x in range(size)}) == size


def subdirect_embedding(A: AlgebraStructure, minimal: bool = True) -> Embedding:
    """Embed a (dual/double) Stone algebra into ``3~^I``, ``3!^I`` or ``4^I``.

    The index set is the surjective homomorphisms onto the subdirectly
    irreducible factors of A's class.  With ``minimal`` set, factors that are
    not needed to separate points are dropped (smallest factors first).
    """
    big, factors = _si_factors(A)
    homs = []
    for F, emb in factors:
        for h in enumerate_homomorphisms(A, F):
            if len(set(h)) == F.size:
                homs.append((F.name, tuple(emb[v] for v in h)))
    if minimal:
        keep = list(homs)
        for entry in list(homs):
            trial = [e for e in keep if e is not entry]
            if _separates([h for _, h in trial], A.size):
                keep = trial
        homs = keep
    target = algebra_power(big, len(homs))
    P = target.lattice
    assignment = tuple(P.encode([h[x] for _, h in homs]) for x in range(A.size))
    m = OrderMap(A.lattice, P, assignment)
    if not (m.is_injective() and preserves_structure(m, A, target)):
        raise EmbeddingFailed("product of factor homomorphisms is not an embedding")
    return Embedding(A, target, m, tuple(homs))

