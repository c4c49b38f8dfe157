import gmpy2
import mpmath
import pytest
from hypothesis import given, strategies as st

from wrtkit.checks import random_forest
from wrtkit.mtc import make_mtc
from wrtkit.numeric import numeric_mtc, rt_invariant_numeric, to_mpc
from wrtkit.surgery import poincare_star, rt_invariant

forests = st.randoms(use_true_random=False).map(lambda r: random_forest(r, 5, 5))


@given(forests, st.integers(1, 10))
def test_extended_precision_matches_exact_su2(g, k):
    exact = rt_invariant(make_mtc("su2", k), g, 45)
    fast = to_mpc(rt_invariant_numeric(numeric_mtc("su2", k, 40), g))
    assert abs(fast - exact) < 1e-33


@given(forests, st.sampled_from([2, 4, 6]))
def test_extended_precision_matches_exact_u1(g, k):
    exact = rt_invariant(make_mtc("u1", k), g, 45)
    fast = to_mpc(rt_invariant_numeric(numeric_mtc("u1", k, 40), g))
    assert abs(fast - exact) < 1e-33


@given(forests, st.integers(1, 10))
def test_double_precision_matches_exact(g, k):
    exact = rt_invariant(make_mtc("su2", k), g, 30)
    assert abs(complex(rt_invariant_numeric(numeric_mtc("su2", k), g)) - complex(exact)) < 1e-10


def test_to_mpc_keeps_digits():
    with gmpy2.context(gmpy2.get_context(), precision=200):
        x = gmpy2.mpc(gmpy2.const_pi(), 1)
    with mpmath.workdps(50):
        assert abs(to_mpc(x).real - mpmath.pi) < 1e-50


def test_large_level_is_finite():
    z = rt_invariant_numeric(numeric_mtc("su2", 300), poincare_star())
    assert abs(complex(z)) < 10


def test_odd_u1_rejected():
    with pytest.raises(ValueError):
        numeric_mtc("u1", 5)
