import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import join_irreducibles_by_subsets, leq_of, sup
from stonelogic.catalog import distributive_lattices
from stonelogic.errors import CyclicCovers, ExtensionNotIso, NotALattice, NotAnOrderIso, TooLarge
from stonelogic.lattice import (
    OrderMap,
    build_lattice,
    chain,
    distributivity_failure,
    extend_order_iso,
    irreducibles_below,
    is_bounded_distributive,
    is_join_dense,
    join_irreducibles,
    join_irreducibles_pairwise,
    product_power,
)


def diamond():
    # M3: 0 < a, b, c < 1
    return build_lattice([("0", x) for x in "abc"] + [(x, "1") for x in "abc"])


def pentagon():
    return build_lattice([("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])


def test_chain_tables():
    L = chain(4)
    assert L.bottom == 0 and L.top == 3
    assert L.meet(1, 3) == 1 and L.join(1, 2) == 2
    assert L.covers == ((0, 1), (1, 2), (2, 3))


def test_build_rejects_cycles_and_non_lattices():
    with pytest.raises(CyclicCovers):
        build_lattice([("a", "b"), ("b", "a")])
    with pytest.raises(CyclicCovers):
        build_lattice([("a", "a")])
    # two maximal elements
    with pytest.raises(NotALattice):
        build_lattice([("0", "a"), ("0", "b")])
    # a and b have two minimal upper bounds c, d
    with pytest.raises(NotALattice):
        build_lattice([("0", "a"), ("0", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "1"), ("d", "1")])


def test_meet_join_agree_with_definition():
    for L in (diamond(), pentagon(), product_power(chain(3), 2)):
        leq = leq_of(L)
        for a in range(L.size):
            for b in range(L.size):
                assert L.join(a, b) == sup(L, leq, [a, b])


def test_distributivity():
    assert distributivity_failure(diamond()) is not None
    assert distributivity_failure(pentagon()) is not None
    assert is_bounded_distributive(product_power(chain(3), 2))


def test_product_power_shapes():
    P = product_power(chain(3, ["0", "a", "1"]), 2)
    assert P.size == 9
    assert P.names[P.unit(1, 1)] == "(0,a)"
    assert product_power(chain(2), 0).size == 1
    with pytest.raises(TooLarge):
        product_power(chain(4), 11)


def test_join_irreducibles_of_small_lattices():
    # [DERIVED] definitional all-subsets oracle
    for L in (chain(5), diamond(), pentagon(), product_power(chain(2), 3)):
        expected = join_irreducibles_by_subsets(L)
        assert list(join_irreducibles(L)) == expected
        assert list(join_irreducibles_pairwise(L)) == expected


def test_chain_irreducibles():
    assert join_irreducibles(chain(4)) == (1, 2, 3)


def test_join_density():
    L = product_power(chain(3), 2)
    J = join_irreducibles(L)
    assert is_join_dense(L, J)
    assert not is_join_dense(L, J[:-1])
    x = L.top
    assert L.join_all(irreducibles_below(L, x, J)) == x


@given(st.integers(0, 341))
def test_irreducibles_agree_on_distributive_catalog(i):
    L = _catalog()[i]
    expected = join_irreducibles_by_subsets(L) if L.size <= 9 else list(join_irreducibles_pairwise(L))
    assert list(join_irreducibles(L)) == expected
    # Birkhoff: a finite distributive lattice has as many irreducibles as its longest chain is long
    assert len(join_irreducibles(L)) == max(L.ranks)


_CACHE = {}


def _catalog():
    if "c" not in _CACHE:
        _CACHE["c"] = distributive_lattices(12)
    return _CACHE["c"]


def test_order_map_properties():
    L = chain(3)
    m = OrderMap(L, L, (0, 2, None))
    assert not m.is_total() and m.domain == (0, 1) and m.image == (0, 2)
    assert m.is_monotone() and m.reflects_order()
    flip = OrderMap(L, L, (2, 1, 0))
    assert flip.is_bijective() and not flip.is_monotone()


def test_extend_order_iso_identity_and_failures():
    L = product_power(chain(2), 2)
    J = join_irreducibles(L)
    phi = OrderMap.from_dict(L, L, {j: j for j in J})
    ext = extend_order_iso(phi)
    assert ext.assignment == tuple(range(L.size))
    with pytest.raises(NotAnOrderIso):
        extend_order_iso(OrderMap.from_dict(L, L, {J[0]: J[0]}))
    M = diamond()
    JM = join_irreducibles(M)
    with pytest.raises(ExtensionNotIso):
        extend_order_iso(OrderMap.from_dict(M, M, {j: j for j in JM}))


def test_extend_swaps_components():
    L = product_power(chain(3), 2)
    J = join_irreducibles(L)
    swap = {}
    for j in J:
        a, b = L.digits[j]
        swap[j] = L.encode([b, a])
    ext = extend_order_iso(OrderMap.from_dict(L, L, swap))
    for x in range(L.size):
        a, b = L.digits[x]
        assert ext(x) == L.encode([b, a])


def test_dual_lattice():
    L = pentagon()
    D = L.dual()
    assert D.bottom == L.top and np.array_equal(D.leq_matrix, L.leq_matrix.T)
