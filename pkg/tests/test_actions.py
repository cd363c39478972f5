import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import module, modules
from samod.actions import (
    ActionTable, c_alpha, c_alpha_set, constant_action, orbit_stabilization, quotient_action,
    stabilizer_sum_law, tilde_map, translation_action, validate_action,
)
from samod.errors import MalformedTableError, NotAddClosedError
from samod.lattice import ElementSet
from samod.order import is_upper_bound


@given(modules())
def test_standard_actions_are_valid(V):
    assert validate_action(translation_action(V)).ok
    assert validate_action(quotient_action(V)).ok
    assert validate_action(constant_action(V, V)).ok == (V.size == 1)


@given(modules(), st.data())
def test_stabilizers_are_sa_for_upper_bound_targets(V, data):
    a = quotient_action(V)
    s = data.draw(st.integers(0, a.target.size - 1))
    C = c_alpha(a, s)
    assert C.elements == [u for u in range(V.size) if a.table[u][s] == s]
    assert oracles.is_sa(V, set(C.elements), range(V.size))


@given(modules(), st.data())
def test_stabilizer_sum_law(V, data):
    a = quotient_action(V)
    s1 = data.draw(st.integers(0, a.target.size - 1))
    s2 = data.draw(st.integers(0, a.target.size - 1))
    assert stabilizer_sum_law(a, s1, s2)


@given(modules())
def test_tilde_is_additive(V):
    f = tilde_map(quotient_action(V))
    assert f.mapping[V.zero] == quotient_action(V).target.zero


def test_translation_stabilizers_on_c3():
    a = translation_action(module("C3"))
    assert [c_alpha(a, s).elements for s in range(3)] == [[0], [0, 1], [0, 1, 2]]


def test_orbit_stabilization_in_nsat():
    V = module("NSAT4")
    n_star, C = orbit_stabilization(translation_action(V), 1)
    assert n_star == 3
    assert C.elements == [0, 1, 2, 3]


def test_stabilizer_of_set_needs_add_closed():
    V = module("NSAT4")
    with pytest.raises(NotAddClosedError):
        c_alpha_set(translation_action(V), ElementSet(V, 0b10))


def test_ragged_action_table():
    V = module("C3")
    with pytest.raises(MalformedTableError):
        ActionTable(V, V, [[0, 1, 2], [1, 1]])


def test_upper_bound_target_is_the_quotient():
    assert is_upper_bound(quotient_action(module("ZMOD(3)")).target)
