"""Instances where a claimed statement fails, each confirmed with the set-based oracles."""

from conftest import module
import oracles
from samod.extensions import compl_posets, is_complementary, is_sa_extension, is_saturated, nac_extension, saturation
from samod.harness.hierarchy import hierarchy_pipeline
from samod.lattice import ElementSet, generate, generate_submonoid, parse_set
from samod.order import d_isolated, is_upper_bound
from samod.retraction import is_special_retraction, product_retraction, x_isolated
from samod.algebra import is_lzs, Monoid


def S(V, text):
    return set(oracles.elems(parse_set(V, text)))


def sub(V, text):
    return generate(V, parse_set(V, text))


def test_lzs_does_not_imply_upper_bound():
    # a + a = b, b + b = a, a + b = b: no nonzero sums to zero, yet a ≤ b ≤ a.
    M = Monoid(3, [[0, 1, 2], [1, 2, 2], [2, 2, 1]], labels=["0", "a", "b"])
    assert is_lzs(M)
    assert not is_upper_bound(M)


def test_complement_need_not_lie_in_every_cosummand():
    V = module("SUPERTROP(1)")
    W = D = T = S(V, "{0,1,1v}")
    U = S(V, "{0,1v}")
    assert oracles.is_submodule(V, U)
    assert {V.add[w][u] for w in W for u in U} == set(range(V.size))
    assert not T <= U


def test_reduced_complement_can_be_empty():
    V = module("SUPERTROP(1)")
    A, T, U = S(V, "{0,1v}"), S(V, "{0}"), S(V, "{0}")
    reduced = {x for x in T
               if all(V.add[a][V.act[r][x]] in U for a in A for r in range(V.ring.size))}
    assert reduced == set()


def test_saturated_extension_without_amalgamation():
    V = module("FREE(BOOL,3)")
    A = S(V, "{000,001,010,011,101,110,111}")
    D = S(V, "{000,001,101}")
    T = S(V, "{000,001,100,101}")
    for X in (A, D, T):
        assert oracles.is_submodule(V, X)
    assert oracles.is_sa(V, D, A)
    assert A & T == D
    assert all(V.add[a][t] not in T for a in A - D for t in T)
    assert {V.add[a][t] for a in A - D for t in T} | D == A
    assert not oracles.has_am(V, [A, T])
    # library agrees
    a, d, t = (ElementSet(V, oracles.to_mask(x)) for x in (A, D, T))
    assert is_sa_extension(a, d) and is_complementary(a, d, t) and is_saturated(a, d, t)


def test_stripped_extension_without_amalgamation():
    V = module("C4")
    A0, T = S(V, "{0,2,3}"), S(V, "{0,1}")
    assert oracles.is_submodule(V, A0)
    assert {V.add[a][t] for a in A0 - {0} for t in T} | {0} == A0
    assert not oracles.has_am(V, [A0, T])


AMALG_MOD = "AMALG(PRODUCT(CHAIN(1),NSAT(2)),{0.2,1.0},{0.1,1.0})"


def test_saturation_need_not_be_scalar_closed():
    V = module(AMALG_MOD)
    A = S(V, "{0.0|0.0,0.0|0.2,0.0|1.0,0.0|1.2}")
    D = S(V, "{0.0|0.0,0.0|0.2}")
    T = S(V, "{0.0|0.0,0.0|0.1,0.0|0.2}")
    assert oracles.is_submodule(V, A) and oracles.is_submodule(V, T)
    assert oracles.is_sa(V, D, A)
    B = {V.add[a][t] for a in A - D for t in T} | D
    assert not oracles.is_submodule(V, B)
    assert B == set(saturation(*(ElementSet(V, oracles.to_mask(x)) for x in (A, D, T))).elements)


def test_no_access_union_need_not_be_submodule():
    V = module("AMALG(PRODUCT(CHAIN(1),NSAT(2)),{1.1,1.2},{0.2})")
    D = generate(V, parse_set(V, "{0.0|0.2}"))
    d = set(D.elements)
    no_access = {x for x in range(V.size) if all(V.add[x][v] not in d for v in range(V.size))}
    assert not oracles.is_submodule(V, no_access | d)
    assert nac_extension(D).failures == ["A0 not a submodule"]


def test_isolation_does_not_lift_through_non_special_retraction():
    ret = product_retraction(2, module("SUPERTROP(1)"))
    V = ret.monoid
    assert not is_special_retraction(V, ret.X, ret.phi)
    zero = 1 << V.zero
    assert x_isolated(ret, zero) >> V.zero & 1
    D = ret.preimage(zero)
    fiber = ret.fiber(V.zero)
    assert fiber == D
    assert fiber & ~d_isolated(V, D).mask
    # an element of the zero fiber is moved by D
    v = V.index("0.1")
    assert V.add[v][v] != v and v in oracles.elems(D)


def test_hierarchy_pieces_do_not_sum_to_total():
    V = module("C3")
    A1, A2 = sub(V, "{0,2}"), sub(V, "{0,1,2}")
    S1 = generate_submonoid(V, parse_set(V, "{0,2}"))
    S2 = generate_submonoid(V, parse_set(V, "{0}"))
    rep = hierarchy_pipeline(V, [A1, A2], [S1, S2])
    assert rep.failures == ["parts_sum"]
    assert rep.corrected_failures == []
    # In the amalgam, (2,1) ~ (2,0): the second copy of 1 enters C̄(S) without lying in C̄(S_2) = {0}.
    classes = oracles.exchange_classes(V, [{0, 2}, {0, 1, 2}])
    assert any({(2, 1), (2, 0)} <= c for c in classes)
    assert not any({(0, 1), (0, 0)} <= c for c in classes)


def test_modules_with_a_complement_need_not_form_a_lower_set():
    V = module("FREE(BOOL,2)")
    A, D = S(V, "{00,10}"), S(V, "{00}")
    subs = oracles.all_submodules(V)

    def has_complement_in(U):
        return any(T <= U and A & T == D and {V.add[a][t] for a in A for t in T} == U
                   and all(V.add[a][t] not in T for a in A - D for t in T) for T in subs)

    full, middle = set(range(V.size)), S(V, "{00,10,11}")
    assert middle in subs and A < middle < full
    assert has_complement_in(full)
    assert not has_complement_in(middle)
    cp = compl_posets(sub(V, "{00,10}"), sub(V, "{00}"))
    assert cp.lower1 and not cp.lower2
