import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heislw.errors import DivisionByZero, EvenCharacteristic, NotPrime, ReducibleModulus
from heislw.field import (
    FieldCtx,
    default_modulus,
    enumerate_elements,
    field_create,
    field_for_order,
    is_irreducible,
)

ORDERS = [3, 5, 7, 9, 11, 13, 25, 27]


def test_create_prime_and_extension():
    assert field_create(5).q == 5
    F9 = field_create(3, 2, [1, 0, 1])
    assert F9.q == 9
    assert F9.modulus == (1, 0, 1)


def test_create_rejects_bad_input():
    with pytest.raises(EvenCharacteristic):
        field_create(2)
    with pytest.raises(NotPrime):
        field_create(6)
    with pytest.raises(ReducibleModulus):
        field_create(3, 2, [2, 0, 1])  # x^2 - 1


def test_default_modulus_is_irreducible():
    for p, r in [(3, 2), (3, 3), (5, 2), (7, 2)]:
        m = default_modulus(p, r)
        assert len(m) == r + 1 and m[-1] == 1
        assert is_irreducible(m, p)
    assert default_modulus(3, 2) == (1, 0, 1)


def test_pinned_values():
    F5, F7 = field_create(5), field_create(7)
    assert F5.half(1) == 3
    assert F7.inv(3) == 5
    assert F5.add(4, 0) == 4
    assert list(enumerate_elements(field_create(3))) == [0, 1, 2]
    assert sorted(enumerate_elements(field_for_order(9))) == list(range(9))
    assert sum(enumerate_elements(F5)) % 5 == 0


def test_zero_division():
    F = field_for_order(9)
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        F.div(1, 0)


@pytest.mark.parametrize("q", ORDERS)
def test_field_axioms_exhaustive(q):
    F = field_for_order(q)
    a = np.repeat(np.arange(q), q)
    b = np.tile(np.arange(q), q)
    add, mul = F.add(a, b).reshape(q, q), F.mul(a, b).reshape(q, q)
    assert np.array_equal(add, add.T) and np.array_equal(mul, mul.T)
    # Latin squares: every row of + is a permutation, every nonzero row of * too
    assert all(len(set(row)) == q for row in add)
    assert all(len(set(row[1:])) == q - 1 for row in mul[1:])
    assert np.array_equal(F.mul(F.inv(np.arange(1, q)), np.arange(1, q)), np.ones(q - 1))
    assert np.all(F.add(F.half(np.arange(q)), F.half(np.arange(q))) == np.arange(q))
    c = np.arange(q)
    # distributivity over all triples
    lhs = F.mul(a[:, None], F.add(b[:, None], c[None, :]))
    rhs = F.add(F.mul(a, b)[:, None], F.mul(a[:, None], c[None, :]))
    assert np.array_equal(lhs, rhs)


@pytest.mark.parametrize("q", [9, 27, 25])
def test_extension_multiplication_matches_polynomials(q):
    # log/exp tables against schoolbook polynomial multiplication
    from heislw.field import _poly_mod, _poly_mul

    F = field_for_order(q)
    for a in range(q):
        for b in range(q):
            prod = _poly_mod(_poly_mul(F._poly(a), F._poly(b), F.p), F.modulus, F.p)
            assert F.mul(a, b) == F._code(prod)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(ORDERS), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_ring_identities(q, x, y, z):
    F = field_for_order(q)
    a, b, c = x % q, y % q, z % q
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.sub(F.add(a, b), b) == a
    assert F.add(a, F.neg(a)) == 0
    if b:
        assert F.mul(F.div(a, b), b) == a
    assert F.power(a, q) == a  # Frobenius fixes F_q


def test_scalar_in_scalar_out():
    F = field_for_order(9)
    assert isinstance(F.mul(2, 5), int)
    assert isinstance(F.mul(np.array([2]), 5), np.ndarray)


def test_json_roundtrip():
    for q in ORDERS:
        F = field_for_order(q)
        assert FieldCtx.from_json(F.to_json()) == F
