import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import SMALL_MODULES, module, module_with_subs, modules
from samod.errors import NotAddClosedError, NotDOrderedError, NotStableError
from samod.lattice import ElementSet, generate, is_sa, parse_set
from samod.order import (
    arch_class, c_omega, cbar_of, cbar_of_set, coset_order, d_isolated, d_max, d_quasiorder,
    fix_set, is_convex, is_d_ordered, is_subsemiring, is_upper_bound, leq_v, maximal_elements,
    o_ring, quotient, sa_through_quotient, w_of,
)


def S(V, text):
    return ElementSet(V, parse_set(V, text))


@given(modules())
def test_natural_order_matches_definition(V):
    q = leq_v(V)
    for x in range(V.size):
        for y in range(V.size):
            assert q.leq(x, y) == any(V.add[x][z] == y for z in range(V.size))


@given(module_with_subs(1))
def test_d_order_is_a_quasiorder(case):
    V, (D,) = case
    q = d_quasiorder(V, D)
    assert q.is_transitive()
    assert all(q.leq(x, x) for x in range(V.size))


@pytest.mark.parametrize("fid,ub", [("C4", True), ("NSAT4", True), ("ZMOD(3)", False),
                                    ("SUPERTROP(2)", True), ("QUOT(ZMOD(3))", True)])
def test_upper_bound(fid, ub):
    assert is_upper_bound(module(fid)) is ub


@given(modules(tuple(SMALL_MODULES)))
def test_quotient_is_upper_bound(V):
    q = quotient(V)
    assert is_upper_bound(q.module)
    assert q.module.size == len(leq_v(V).equivalence_classes())


@given(module_with_subs(1))
def test_sa_through_quotient_agrees(case):
    V, (W,) = case
    lhs, rhs = sa_through_quotient(quotient(V), W)
    assert lhs == rhs == oracles.is_sa(V, set(W.elements), range(V.size))


def test_fix_set_and_max_on_c4():
    V = module("C4")
    D = S(V, "{0,1}")
    assert fix_set(S(V, "{0,1,3}"), D).elements == [1, 3]
    assert d_max(V, D) == 1
    assert d_isolated(V, D).elements == [2, 3]
    assert is_d_ordered(V, D)


def test_fix_set_requires_stability():
    V = module("C4")
    with pytest.raises(NotStableError):
        fix_set(S(V, "{0,2}"), S(V, "{0,1}"))


def test_coset_order_requires_d_ordered():
    V = module("ZMOD(3)")
    with pytest.raises(NotDOrderedError):
        coset_order(V, S(V, "{0,1,2}"))


@given(module_with_subs(1))
def test_coset_maximal_elements_are_fixed(case):
    V, (D,) = case
    if not is_d_ordered(V, D):
        return
    U = ElementSet(V, V.full_mask)
    top = maximal_elements(coset_order(V, D), U.mask)
    assert top == fix_set(U, D).mask


@given(modules(), st.data())
def test_cbar_is_sa_submonoid(V, data):
    x = data.draw(st.integers(0, V.size - 1))
    C = cbar_of(V, x)
    q = leq_v(V)
    assert C.elements == [u for u in range(V.size) if q.leq(V.add[u][x], x)]
    assert is_sa(C)
    assert c_omega(V, x).mask & C.mask == C.mask


@given(modules(), st.data())
def test_archimedean_classes_share_c_omega(V, data):
    x = data.draw(st.integers(0, V.size - 1))
    for y in arch_class(V, x):
        assert c_omega(V, y).mask == c_omega(V, x).mask
    assert w_of(V, x).mask >> x & 1


def test_cbar_of_set_needs_add_closed():
    V = module("NSAT4")
    with pytest.raises(NotAddClosedError):
        cbar_of_set(V, S(V, "{1}"))


@pytest.mark.parametrize("fid", ["BOOL", "NSAT4", "SUPERTROP(2)", "CHAIN(3)"])
def test_o_ring_is_convex_subsemiring(fid):
    R = module(fid).ring
    o = o_ring(R)
    assert is_subsemiring(R, o)
    assert is_convex(leq_v(R), o)


def test_generate_then_quotient_sizes():
    V = module("ZMOD(4)")
    assert quotient(V).module.size == 1
    assert generate(V, 0).elements == [0]
