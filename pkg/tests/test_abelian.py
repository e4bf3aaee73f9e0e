from collections import Counter

import pytest
from hypothesis import given, strategies as st

from schurpair.abelian import (TRIVIAL, AbelianInvariants, cancel_direct_factor, canonicalize,
                               direct_sum, factorize, from_elementary_divisors,
                               multiplier_abelian, parse_invariants, render, tensor)
from schurpair.errors import NonPositiveOrder, NotADirectFactor, ParseError


def inv(*f):
    return AbelianInvariants(tuple(f))


def test_canonicalize_examples():
    assert canonicalize([2, 4]) == inv(4, 2)
    assert canonicalize([6]) == inv(6)
    assert canonicalize([2, 3]) == inv(6)
    assert canonicalize([1, 1]) == TRIVIAL
    with pytest.raises(NonPositiveOrder):
        canonicalize([0, 2])


def test_invalid_chains_rejected():
    with pytest.raises(ValueError):
        AbelianInvariants((2, 4))
    with pytest.raises(ValueError):
        AbelianInvariants((1,))


def test_tensor_and_sum():
    assert tensor(inv(4, 2), inv(2)) == inv(2, 2)
    assert tensor(inv(9), inv(3, 3)) == inv(3, 3)
    assert tensor(TRIVIAL, inv(5)) == TRIVIAL
    assert direct_sum(inv(4), inv(2), TRIVIAL) == inv(4, 2)


def test_multiplier_abelian():
    assert multiplier_abelian(inv(2, 2, 2)) == inv(2, 2, 2)
    assert multiplier_abelian(inv(4, 2)) == inv(2)
    assert multiplier_abelian(inv(9)) == TRIVIAL
    assert multiplier_abelian(inv(8, 4, 2)) == inv(4, 2, 2)


def test_cancel_direct_factor():
    assert cancel_direct_factor(inv(4, 2, 2), inv(2)) == inv(4, 2)
    assert cancel_direct_factor(inv(2), TRIVIAL) == inv(2)
    with pytest.raises(NotADirectFactor, match="4"):
        cancel_direct_factor(inv(2, 2), inv(4))


def test_elementary_divisors_round_trip():
    A = inv(12, 2)
    ed = A.elementary_divisors()
    assert ed == Counter({(2, 2): 1, (2, 1): 1, (3, 1): 1})
    assert from_elementary_divisors(ed) == A


def test_render_and_parse():
    assert render(inv(4, 2)) == "Z4 x Z2"
    assert render(TRIVIAL) == "1"
    assert parse_invariants("Z2 x Z4") == inv(4, 2)
    assert parse_invariants("1") == TRIVIAL
    with pytest.raises(ParseError):
        parse_invariants("Z2 x Q8")


def test_factorize():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(1) == {}


orders = st.lists(st.integers(1, 60), max_size=5)


@given(orders)
def test_canonical_order_preserved(os):
    from math import prod
    assert canonicalize(os).order == prod(os)


@given(orders, orders)
def test_cancel_inverts_sum(a, b):
    A, B = canonicalize(a), canonicalize(b)
    assert cancel_direct_factor(direct_sum(A, B), B) == A


@given(orders, orders)
def test_tensor_commutes(a, b):
    A, B = canonicalize(a), canonicalize(b)
    assert tensor(A, B) == tensor(B, A)
