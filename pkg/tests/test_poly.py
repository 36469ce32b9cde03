import pytest
from hypothesis import given, strategies as st

from galeroot.poly import (ONE, ZERO, IntPoly, add, binomial_row, g_from_h,
                           is_palindromic, mul, p_poly, shift)

polys = st.lists(st.integers(-50, 50), max_size=7).map(IntPoly)


def P(*cs):
    return IntPoly(cs)


def test_add_examples():
    assert add(P(1, 2), P(0, 1)) == P(1, 3)
    assert add(P(4, 0, 5), ZERO) == P(4, 0, 5)
    assert add(P(1, 1), P(-1, -1)) == ZERO
    assert add(P(1, 1), P(-1, -1)).coeffs == ()


def test_mul_examples():
    assert mul(P(1, 1), P(1, 1)) == P(1, 2, 1)
    assert mul(P(3, 0, 2), ONE) == P(3, 0, 2)
    assert p_poly(2) * p_poly(2) * p_poly(2) == P(1, 3, 3, 1)


def test_shift_examples():
    assert shift(P(3, 2), -1) == P(1, 2)
    assert shift(P(5, 7, 1), 0) == P(5, 7, 1)
    assert shift(P(0, 0, 1), 1) == P(1, 2, 1)


def test_p_poly():
    assert p_poly(1) == ONE
    assert p_poly(3) == P(1, 1, 1)
    assert p_poly(0) == ZERO
    with pytest.raises(ValueError):
        p_poly(-1)


def test_palindromic():
    assert is_palindromic(P(1, 3, 3, 1))
    assert not is_palindromic(P(1, 2))
    assert is_palindromic(ZERO)


def test_g_from_h():
    assert g_from_h(P(1, 3, 3, 1), 3) == P(1, 2)
    assert g_from_h(ONE, 0) == ONE
    assert g_from_h(P(1, 2, 1), 2) == P(1, 1)
    with pytest.raises(ValueError):
        g_from_h(P(1, 3, 3, 1), 2)


def test_zero_has_no_degree():
    with pytest.raises(ValueError):
        ZERO.degree
    assert P(0, 0, 3).degree == 2


def test_normalization_and_immutability():
    p = IntPoly([1, 2, 0, 0])
    assert p.coeffs == (1, 2)
    with pytest.raises(AttributeError):
        p.coeffs = (1,)


def test_divide_by_t():
    assert P(0, 0, 3, 1).divide_by_t(2) == P(3, 1)
    with pytest.raises(ValueError):
        P(1, 1).divide_by_t(1)


def test_substitute_square_and_eval():
    assert P(1, 2).substitute_square() == P(1, 0, 2)
    assert P(1, 2, 3)(2) == 17


def test_json_and_format():
    p = P(1, -2, 0, 10 ** 30)
    assert IntPoly.from_json(p.to_json()) == p
    assert p.to_json() == {"var": "t", "coeffs": ["1", "-2", "0", str(10 ** 30)]}
    assert str(P(1, 2, 0, -1)) == "1 + 2*t - t^3"
    assert str(ZERO) == "0"


def test_binomial_row():
    assert binomial_row(3) == P(1, 3, 3, 1)
    assert binomial_row(3, 1) == P(0, 3, 3, 1)


def test_big_integers_exact():
    big = P(2 ** 70, 1) ** 3
    assert big[0] == 2 ** 210


@given(polys, st.integers(-5, 5))
def test_shift_roundtrip(p, a):
    assert shift(shift(p, a), -a) == p


@given(polys, st.integers(-4, 4), st.integers(-4, 4))
def test_shift_matches_evaluation(p, a, x):
    assert shift(p, a)(x) == p(x + a)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a - a == ZERO


@given(polys, polys, st.integers(-3, 3))
def test_mul_is_evaluation_homomorphism(a, b, x):
    assert (a * b)(x) == a(x) * b(x)
