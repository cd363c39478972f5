import pytest
from hypothesis import given

import oracles
from conftest import module, module_with_subs
from samod.errors import ContainmentError, PreconditionError
from samod.extensions import (
    compl_posets, find_d_complements, hull_is_universal_complement, is_complementary,
    is_d_complement, is_sa_extension, is_saturated, nac_extension, reduce_complement,
    rest_closed_and_absorbing, saturation, strip_to_zero, sum_of_units,
)
from samod.fixtures import make_fixture
from samod.lattice import generate, is_sa, parse_set, subtractive_hull, sum_


def sub(V, text):
    return generate(V, parse_set(V, text))


def test_extension_pin_in_c4():
    V = module("C4")
    A, D, T = sub(V, "{0,1,3}"), sub(V, "{0,1}"), sub(V, "{0,1}")
    assert is_sa_extension(A, D)
    assert is_complementary(A, D, T)
    assert is_saturated(A, D, T)


def test_unique_complement_in_b2():
    V = module("B2")
    W, D = sub(V, "{00,01}"), sub(V, "{00}")
    comps = find_d_complements(W, D)
    assert [c.elements for c in comps] == [sub(V, "{00,10}").elements]
    assert is_d_complement(W, D, comps[0])


@given(module_with_subs(2))
def test_sa_extension_has_intrinsic_form(case):
    V, (A, D) = case
    if D.mask & ~A.mask:
        D = generate(V, D.mask & A.mask)
    direct = oracles.is_sa(V, set(D.elements), A.elements)
    assert is_sa_extension(A, D) == direct == rest_closed_and_absorbing(A, D)


@given(module_with_subs(2))
def test_d_complements_match_definition(case):
    V, (W, D) = case
    D = generate(V, D.mask & W.mask)
    w, d = set(W.elements), set(D.elements)
    expected = set()
    for T in oracles.all_submodules(V):
        whole = {V.add[a][t] for a in w for t in T} == set(range(V.size))
        meet = (w & T) == d
        apart = all(V.add[x][t] not in T for x in w - d for t in T)
        if whole and meet and apart:
            expected.add(T)
    assert {frozenset(T.elements) for T in find_d_complements(W, D)} == expected
    if oracles.is_sa(V, d, w):
        assert len(expected) <= 1


@given(module_with_subs(2))
def test_saturation_formula(case):
    V, (A, D) = case
    D = generate(V, D.mask & A.mask)
    T = subtractive_hull(D)
    expect = {V.add[a][t] for a in set(A.elements) - set(D.elements) for t in T} | set(D.elements)
    assert set(saturation(A, D, T).elements) == expect


@given(module_with_subs(1))
def test_hull_is_complementary_to_every_extension(case):
    V, (D,) = case
    ok, bad = hull_is_universal_complement(D)
    assert ok and bad == []


@pytest.mark.parametrize("fid", ["C3", "C4", "B2", "NSAT4", "FREE(BOOL,3)", "SUPERTROP(2)"])
def test_nac_extension_on_fixtures(fid):
    V = module(fid)
    from samod.lattice import enumerate_submodules
    for D in enumerate_submodules(V):
        rep = nac_extension(D)
        if "A0 not a submodule" not in rep.failures:
            assert rep.ok, (D, rep.failures)


def test_strip_to_zero_over_boolean_ring():
    V = module("C4")
    A, D, T = sub(V, "{0,1,3}"), sub(V, "{0,1}"), sub(V, "{0,1}")
    A0 = strip_to_zero(A, D, T)
    assert A0.elements == [0, 3]


def test_strip_to_zero_needs_sums_of_units():
    R, V = make_fixture("NSAT4")
    assert sum_of_units(R)
    assert not sum_of_units(make_fixture("SUPERTROP(2)")[0])
    V = module("SUPERTROP(2)")
    with pytest.raises(PreconditionError):
        strip_to_zero(sub(V, "{0}"), sub(V, "{0}"))


def test_reduce_complement_keeps_guarantees():
    V = module("C4")
    A, D, T = sub(V, "{0,1,3}"), sub(V, "{0,1}"), sub(V, "{0,1}")
    Tp = reduce_complement(A, D, T, sum_(A, T))
    assert Tp.elements == T.elements


def test_complement_posets_on_pin():
    V = module("C4")
    P = compl_posets(sub(V, "{0,1,3}"), sub(V, "{0,1}"))
    assert P.bijective and P.order_preserving and P.order_reflecting


def test_complementary_requires_d_inside_a():
    V = module("C3")
    with pytest.raises(ContainmentError):
        is_complementary(sub(V, "{0,1}"), sub(V, "{0,2}"), sub(V, "{0,2}"))


def test_is_sa_agrees_with_extension_wrapper():
    V = module("C3")
    A, D = sub(V, "{0,1,2}"), sub(V, "{0,1}")
    assert is_sa(D, A) is is_sa_extension(A, D) is True
