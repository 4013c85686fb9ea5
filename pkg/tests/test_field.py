import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pep2gi.field import (
    DEFAULT_MODULI,
    FieldElement,
    FieldError,
    FieldSpec,
    field_make,
    field_of_order,
    inv,
    is_irreducible,
    power,
    quadratic_character,
    sum_of_two_squares,
)

from .conftest import ALL_Q, ODD_Q, fields


def _poly_mulmod(a, b, modulus, p):
    """Schoolbook product of coefficient lists reduced mod a monic modulus."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    m = len(modulus) - 1
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        if c:
            for i in range(m + 1):
                prod[d - m + i] = (prod[d - m + i] - c * modulus[i]) % p
    return (prod + [0] * m)[:m]


def test_field_make_examples():
    F3 = field_make(3)
    assert F3.q == 3 and F3.is_prime_field
    F9 = field_make(3, 2)
    assert F9.modulus == (1, 0, 1)
    with pytest.raises(FieldError):
        field_make(4, 1)


def test_prime_field_accepts_linear_modulus():
    assert field_make(3, 1, [0, 1]) == field_make(3)
    with pytest.raises(FieldError):
        field_make(3, 1, [1, 2])


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        field_make(3, 2, (2, 0, 1))  # t^2 - 1 = (t - 1)(t + 1)


def test_default_moduli_irreducible_by_root_and_factor_search():
    for (p, m), mod in DEFAULT_MODULI.items():
        assert mod[-1] == 1 and len(mod) == m + 1
        roots = [x for x in range(p) if sum(c * x**i for i, c in enumerate(mod)) % p == 0]
        assert roots == []
        assert is_irreducible(mod, p)


def test_scalar_examples():
    F3 = field_of_order(3)
    assert F3.add(2, 2) == 1
    assert F3.inv(2) == 2
    F9 = field_of_order(9)
    t = F9.from_coeffs([0, 1])
    assert F9.mul(t, t) == 2


def test_character_examples():
    F3 = field_of_order(3)
    assert F3.chi(0) == 0
    assert F3.chi(1) == 1
    assert F3.chi(2) == -1
    with pytest.raises(ValueError):
        field_of_order(4).chi(1)


def test_sum_of_two_squares_examples():
    assert field_of_order(3).sum_of_two_squares(2) == (1, 1)
    assert field_of_order(3).sum_of_two_squares(0) == (0, 0)
    assert field_of_order(5).sum_of_two_squares(3) == (2, 2)


@pytest.mark.parametrize("q", ALL_Q)
def test_tables_match_polynomial_arithmetic(q):
    F = field_of_order(q)
    mod = list(F.modulus) if F.m > 1 else [0, 1]
    for x, y in itertools.product(F.elements(), repeat=2):
        cx, cy = list(F.coeffs(x)), list(F.coeffs(y))
        s = [(a + b) % F.p for a, b in zip(cx, cy)]
        assert F.add(x, y) == F.from_coeffs(s)
        if F.m > 1:
            assert F.mul(x, y) == F.from_coeffs(_poly_mulmod(cx, cy, mod, F.p))
        else:
            assert F.mul(x, y) == x * y % q


@pytest.mark.parametrize("q", ALL_Q)
def test_field_axioms_exhaustive(q):
    F = field_of_order(q)
    for x in F.nonzero():
        assert F.mul(x, F.inv(x)) == 1
        assert F.pow(x, q - 1) == 1
    for x in F.elements():
        assert F.add(x, F.neg(x)) == 0
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@pytest.mark.parametrize("q", [q for q in ALL_Q if q % 2] + [11, 13, 17, 19, 23])
def test_character_multiplicative_and_balanced(q):
    F = field_of_order(q)
    chi = [F.chi(x) for x in F.elements()]
    for x, y in itertools.product(F.nonzero(), repeat=2):
        assert chi[F.mul(x, y)] == chi[x] * chi[y]
    assert chi.count(1) == (q - 1) // 2
    # Euler's criterion as an independent oracle
    for x in F.nonzero():
        assert (F.pow(x, (q - 1) // 2) == 1) == (chi[x] == 1)


@pytest.mark.parametrize("q", ODD_Q + (17, 19, 23))
def test_sum_of_two_squares_exhaustive(q):
    F = field_of_order(q)
    for c in F.elements():
        a, b = F.sum_of_two_squares(c)
        assert F.add(F.mul(a, a), F.mul(b, b)) == c
    gamma = F.smallest_nonsquare
    assert not F.is_square(gamma) and all(F.is_square(x) for x in range(1, gamma))


@given(fields(), st.data())
def test_power_law(F, data):
    x = data.draw(st.integers(1, F.q - 1))
    a, b = data.draw(st.integers(0, 40)), data.draw(st.integers(0, 40))
    assert F.mul(F.pow(x, a), F.pow(x, b)) == F.pow(x, a + b)


@given(fields(), st.data())
def test_vectorized_ops_agree_with_scalar(F, data):
    xs = data.draw(st.lists(st.integers(0, F.q - 1), min_size=1, max_size=20))
    ys = data.draw(st.lists(st.integers(0, F.q - 1), min_size=len(xs), max_size=len(xs)))
    x, y = np.array(xs), np.array(ys)
    assert F.vadd(x, y).tolist() == [F.add(a, b) for a, b in zip(xs, ys)]
    assert F.vmul(x, y).tolist() == [F.mul(a, b) for a, b in zip(xs, ys)]
    assert F.vsub(x, y).tolist() == [F.sub(a, b) for a, b in zip(xs, ys)]
    assert F.vsum(x) == F.sum(xs)


def test_field_element_wrapper():
    F9 = field_of_order(9)
    t = F9([0, 1])
    assert t * t == FieldElement(F9, 2)
    assert (t * t) == 2
    assert power(t, 4) == 1
    assert inv(t) * t == 1
    assert quadratic_character(t) in (-1, 1)
    a, b = sum_of_two_squares(FieldElement(F9, F9.smallest_nonsquare))
    assert a * a + b * b == F9.smallest_nonsquare
    with pytest.raises(ValueError):
        FieldElement(F9, 9)


def test_element_order_is_coefficient_lexicographic():
    F9 = field_of_order(9)
    keys = [tuple(reversed(F9.coeffs(x))) for x in F9.elements()]
    assert keys == sorted(keys)


@pytest.mark.parametrize("q", ALL_Q)
def test_json_round_trip(q):
    F = field_of_order(q)
    assert FieldSpec.from_json(F.to_json()) == F
