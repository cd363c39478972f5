import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import module
from samod.algebra import ModuleMap, validate_homomorphism, validate_monoid
from samod.errors import ConvexityError, NotRetractionError, PreconditionError, SamodError
from samod.lattice import mask_of
from samod.order import is_upper_bound, leq_v
from samod.retraction import (
    RetractionSpec, build_from_retraction, is_bipotent, is_monotone, is_special_retraction,
    lift_submonoid, monoid_from_chain, order_from_bipotent, supertropical_retraction, v5_spec,
)


def test_v5_pin():
    b = build_from_retraction(v5_spec())
    M = b.module
    a, bb, one = M.index("a"), M.index("b"), M.index("1")
    assert M.size == 5
    assert M.add[a][bb] == one
    assert b.report.ok and b.report.upper_bound and b.report.fibers_convex
    assert all(M.add[v][v] == b.retraction.phi[v] for v in range(M.size))


@st.composite
def retraction_specs(draw):
    k = draw(st.integers(2, 4))
    extra = draw(st.integers(0, 3))
    order = (0,) + tuple(draw(st.permutations(range(1, k))))
    phi = tuple(range(k)) + tuple(draw(st.integers(1, k - 1)) for _ in range(extra))
    return RetractionSpec(k + extra, tuple(range(k)), phi, order)


@given(retraction_specs())
def test_built_monoid_laws(spec):
    b = build_from_retraction(spec)
    M, phi = b.module, spec.phi
    assert validate_monoid(M).ok
    assert is_upper_bound(M)
    assert all(M.add[v][v] == phi[v] for v in range(M.size))
    rank = {x: i for i, x in enumerate(spec.order)}
    for u in range(M.size):
        for v in range(M.size):
            ru, rv = rank[phi[u]], rank[phi[v]]
            want = v if ru < rv else u if ru > rv else phi[u]
            assert M.add[u][v] == want
    assert is_special_retraction(M, b.retraction.X, phi)


def test_zero_fiber_must_be_trivial():
    with pytest.raises(PreconditionError):
        build_from_retraction(RetractionSpec(3, (0, 1), (0, 1, 0), (0, 1)))


@pytest.mark.parametrize("bad", [dict(carrier=3, X=(0, 1), phi=(0, 1), order=(0, 1)),
                                 dict(carrier=2, X=(0, 1), phi=(1, 1), order=(0, 1)),
                                 dict(carrier=2, X=(0, 1), phi=(0, 1), order=(0,))])
def test_malformed_specs(bad):
    with pytest.raises(SamodError):
        RetractionSpec(**bad)


@given(st.permutations(range(1, 5)))
def test_chain_round_trip(perm):
    order = (0,) + tuple(perm)
    M = monoid_from_chain(order)
    assert is_bipotent(M)
    assert order_from_bipotent(M) == order


@given(st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_monotone_iff_homomorphism(f):
    a = b = (0, 1, 2, 3)
    Ma, Mb = monoid_from_chain(a), monoid_from_chain(b)
    hom = not validate_homomorphism(ModuleMap(Ma, Mb, tuple(f)))
    assert hom == is_monotone(a, b, f)


def test_one_plus_one_blocks_bipotence():
    assert not is_bipotent(module("SUPERTROP(1)"))
    assert is_bipotent(module("C4"))


def test_ghost_map_is_special():
    ret = supertropical_retraction(2)
    assert is_special_retraction(ret.monoid, ret.X, ret.phi)


def test_non_retraction_rejected():
    M = module("C3")
    with pytest.raises(NotRetractionError):
        is_special_retraction(M, 0b011, (0, 1, 2))


def test_lift_needs_convex_interval():
    b = build_from_retraction(RetractionSpec(4, (0, 1, 2, 3), (0, 1, 2, 3), (0, 1, 2, 3)))
    ret = b.retraction
    with pytest.raises(ConvexityError):
        lift_submonoid(ret, mask_of([0, 1, 3]))
    D = lift_submonoid(ret, mask_of([0, 1, 2]))
    assert D.elements == [0, 1, 2]
    q = leq_v(ret.monoid)
    assert q.is_antisymmetric()
