from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SMALL_MODULES, module
from samod.algebra import (
    FiniteModule, ModuleMap, Monoid, SemiringTable, identity_map, is_lzs, validate_homomorphism,
    validate_module, validate_monoid, validate_semiring,
)
from samod.errors import FixtureError, MalformedTableError, NotHomomorphismError
from samod.fixtures import ghost_map, make_fixture, nsat, supertropical, zmod


@pytest.mark.parametrize("fid", SMALL_MODULES + ["CHAIN(6)", "NSAT(6)", "SUPERTROP(3)", "ZMOD(4)"])
def test_fixture_modules_satisfy_module_laws(fid):
    R, V = make_fixture(fid)
    assert validate_semiring(R).ok
    assert validate_module(V).ok


@pytest.mark.parametrize("fid,size", [("BOOL", 2), ("B2", 4), ("C3", 3), ("C4", 4), ("NSAT4", 4),
                                      ("Z2", 2), ("SUPERTROP(2)", 5), ("FREE(BOOL,3)", 8),
                                      ("PRODUCT(C3,BOOL)", 6)])
def test_fixture_sizes(fid, size):
    assert module(fid).size == size


def test_aliases_match_long_names():
    assert module("C3").add == module("CHAIN(2)").add
    assert module("NSAT4").add == module("NSAT(3)").add


@pytest.mark.parametrize("bad", ["CHAIN(-1)", "NOPE", "CHAIN(", "NSAT(0)"])
def test_bad_fixture_ids_are_rejected(bad):
    with pytest.raises(FixtureError):
        make_fixture(bad)


def test_broken_associativity_is_reported_with_witness():
    # x+y saturates at 2 but 1+1 = 0: not associative.
    M = Monoid(3, [[0, 1, 2], [1, 0, 2], [2, 2, 1]])
    rep = validate_monoid(M)
    assert not rep.ok
    x, y, w = rep.witness("add-associativity")
    a = M.add
    assert a[a[x][y]][w] != a[x][a[y][w]]


def test_ragged_table_is_malformed():
    with pytest.raises(MalformedTableError):
        validate_monoid(Monoid(2, [[0, 1], [1]]))


def test_semiring_with_zero_multiplication_has_no_identity():
    bad = SemiringTable(2, [[0, 1], [1, 1]], [[0, 0], [0, 0]], one=1)
    assert "mul-identity" in validate_semiring(bad).names()


def test_module_with_wrong_zero_scalar():
    R = nsat(1)
    V = FiniteModule(R, 2, [[0, 1], [1, 1]], [[0, 1], [0, 1]])
    assert "zero-scalar" in validate_module(V).names()


@pytest.mark.parametrize("fid,expected", [("C3", True), ("NSAT4", True), ("ZMOD(3)", False),
                                          ("SUPERTROP(2)", True), ("QUOT(ZMOD(4))", True)])
def test_lzs(fid, expected):
    assert is_lzs(module(fid)) is expected


@given(st.sampled_from(SMALL_MODULES))
def test_lzs_matches_definition(fid):
    V = module(fid)
    direct = all(V.add[x][y] != V.zero for x, y in product(range(V.size), repeat=2)
                 if (x, y) != (V.zero, V.zero))
    assert is_lzs(V) is direct


def test_supertropical_sum_and_ghost_map():
    T = supertropical(2)
    one, two, onev, twov = (T.index(s) for s in ("1", "2", "1v", "2v"))
    assert T.add[one][one] == onev
    assert T.add[one][two] == two
    assert T.add[onev][one] == onev
    nu = ghost_map(T)
    assert nu[one] == onev and nu[twov] == twov and nu[0] == 0


def test_zmod_units():
    assert zmod(4).units() == [1, 3]


def test_identity_is_homomorphism():
    assert validate_homomorphism(identity_map(module("C4"))) == []


def test_non_additive_map_detected():
    V = module("C3")
    bad = ModuleMap(V, V, (0, 2, 1))
    assert validate_homomorphism(bad) == [("additive", (1, 2))]


def test_out_of_range_map_raises():
    V = module("C3")
    with pytest.raises(NotHomomorphismError):
        validate_homomorphism(ModuleMap(V, V, (0, 1)))


def test_labels_resolve():
    V = module("B2")
    assert V.labels[V.index("10")] == "10"
    with pytest.raises(KeyError):
        V.index("22")


@given(st.sampled_from(SMALL_MODULES), st.data())
def test_multiples_orbit_is_closed(fid, data):
    V = module(fid)
    x = data.draw(st.integers(0, V.size - 1))
    orbit = V.multiples(x)
    assert orbit[0] == x
    assert V.add[orbit[-1]][x] in orbit
