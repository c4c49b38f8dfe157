import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from wrtkit.cyclo import (Cyclotomic, cyclo_arith, cyclo_eq, cyclo_eval, cyclo_root,
                          cyclotomic_polynomial, euler_phi, q_integer)

ORDERS = [1, 2, 3, 4, 5, 6, 8, 9, 12, 15, 20]
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def elements(draw, order=None):
    n = order if order is not None else draw(st.sampled_from(ORDERS))
    return Cyclotomic(n, draw(st.lists(rationals, min_size=n, max_size=n)))


@st.composite
def triples(draw):
    n = draw(st.sampled_from(ORDERS))
    return draw(elements(n)), draw(elements(n)), draw(elements(n))


def close(a, b, tol=1e-25):
    return abs(a - b) < tol


@given(triples())
def test_ring_axioms(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == Cyclotomic.rational(0, a.order)


@given(triples())
def test_evaluation_is_homomorphism(t):
    a, b, _ = t
    with mpmath.workdps(40):
        assert close(cyclo_eval(a * b, 35), cyclo_eval(a, 35) * cyclo_eval(b, 35))
        assert close(cyclo_eval(a + b, 35), cyclo_eval(a, 35) + cyclo_eval(b, 35))


@given(elements())
def test_equality_agrees_with_value(a):
    # adding the sum of all N-th roots (zero for N > 1) changes the representative only
    n = a.order
    if n > 1:
        assert a + Cyclotomic(n, [1] * n) == a


@given(elements())
def test_inverse(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
        return
    assert a * a.inverse() == Cyclotomic.rational(1, a.order)


@given(elements(), st.sampled_from([2, 3, 5]))
def test_promotion_preserves_value(a, m):
    b = a.promote(a.order * m)
    assert b == a
    assert close(b.evaluate(30), a.evaluate(30))


@given(elements())
def test_string_round_trip(a):
    assert Cyclotomic.from_str(a.order, a.to_str()) == a


@given(elements())
def test_reduced_form(a):
    r = a.reduced()
    assert r == a
    assert all(c == 0 for c in r.coeffs[euler_phi(a.order):])


@given(triples(), st.integers(1, 40))
def test_galois_is_ring_map(t, j):
    a, b, _ = t
    if math.gcd(j, a.order) != 1:
        return
    assert (a * b).galois(j) == a.galois(j) * b.galois(j)


@pytest.mark.parametrize("n", range(1, 40))
def test_cyclotomic_polynomial_degree(n):
    assert len(cyclotomic_polynomial(n)) - 1 == euler_phi(n)


def test_known_cyclotomic_polynomials():
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)


@pytest.mark.parametrize("n", [2, 3, 6, 10, 12])
def test_roots_sum_to_zero(n):
    s = sum((cyclo_root(n, j) for j in range(n)), Cyclotomic.rational(0, n))
    assert s.is_zero()


def test_half_turn_is_minus_one():
    assert cyclo_root(8, 4) == Cyclotomic.rational(-1, 8)
    assert cyclo_eq(cyclo_arith(cyclo_root(8, 2), cyclo_root(8, 2), "mul"), Cyclotomic.rational(-1, 8))


@given(st.integers(1, 12), st.integers(-15, 15))
def test_quantum_integer_value(k, n):
    K = k + 2
    with mpmath.workdps(30):
        want = mpmath.sin(n * mpmath.pi / K) / mpmath.sin(mpmath.pi / K)
        assert close(q_integer(n, 4 * K).evaluate(30), want, 1e-25)


def test_rational_value():
    x = Cyclotomic.rational(Fraction(3, 7), 5)
    assert x.is_rational() and x.rational_value() == Fraction(3, 7)


def test_low_precision_rejected():
    with pytest.raises(ValueError):
        cyclo_eval(cyclo_root(5, 1), 10)
