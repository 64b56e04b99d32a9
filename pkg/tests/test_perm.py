from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cosetforge.perm import (
    Permutation,
    conjugate,
    cycle_lengths,
    format_cycles,
    inverse,
    is_two_element,
    mul,
    order_of,
    parse_cycles,
    power,
    sign,
)
from oracles import compose, elem_order, inv

perms = st.integers(min_value=1, max_value=9).flatmap(lambda n: st.permutations(list(range(n))).map(tuple))


def test_product_acts_left_to_right():
    p = parse_cycles("(1,2)", 3)
    q = parse_cycles("(2,3)", 3)
    # 1 -> 2 under p, then 2 -> 3 under q
    assert (p * q)(0) == 2
    assert mul(p, q) == compose(p, q)


def test_conjugate_is_g_inverse_p_g():
    p = parse_cycles("(1,2,3)", 4)
    g = parse_cycles("(3,4)", 4)
    assert conjugate(p, g) == mul(mul(inverse(g), p), g)
    assert format_cycles(conjugate(p, g)) == "(1,2,4)"


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_cycles("(1,2", 3)
    with pytest.raises(ValueError):
        parse_cycles("(1,1)", 3)
    with pytest.raises(ValueError):
        parse_cycles("(1,4)", 3)


def test_identity_spellings():
    assert parse_cycles("()", 3) == (0, 1, 2)
    assert parse_cycles("", 3) == (0, 1, 2)
    assert format_cycles((0, 1, 2)) == "()"


@given(perms)
def test_cycle_round_trip(p):
    assert parse_cycles(format_cycles(p), len(p)) == p


@given(perms)
def test_inverse_and_order_match_oracle(p):
    assert inverse(p) == inv(p)
    assert order_of(p) == elem_order(p)
    assert power(p, order_of(p)) == tuple(range(len(p)))
    assert power(p, -1) == inv(p)


@given(perms, perms)
def test_sign_is_a_homomorphism(p, q):
    n = max(len(p), len(q))
    p = tuple(p) + tuple(range(len(p), n))
    q = tuple(q) + tuple(range(len(q), n))
    assert sign(mul(p, q)) == sign(p) * sign(q)


@given(perms)
def test_two_element_means_power_of_two_order(p):
    o = elem_order(p)
    assert is_two_element(p) == (o & (o - 1) == 0)
    assert sum(cycle_lengths(p)) == len(p)


def test_permutation_validation():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))
    assert Permutation((1, 0)).order() == 2
