import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from wrtkit import resurgence as rs

fr = st.fractions(min_value=-9, max_value=9, max_denominator=5)
series = st.lists(fr, min_size=1, max_size=12).map(rs.FormalSeries)


@given(series, series, fr)
def test_borel_transform_is_linear(a, b, c):
    lhs = rs.borel_transform(a + b.scale(c))
    rhs = rs.borel_transform(a) + rs.borel_transform(b).scale(c)
    assert lhs.coeffs == rhs.coeffs


def test_borel_of_factorial_series_is_geometric():
    b = rs.borel_transform(rs.synthetic_series("factorial", 10))
    assert b.is_exact and all(c == 1 for c in b.coeffs)


@pytest.mark.parametrize("kind,target", [("factorial", 1), ("alternating", -1), ("planted", 0.3 + 0.4j)])
def test_planted_singularities(kind, target):
    r = rs.borel_poles(rs.synthetic_series(kind, 20, target))
    assert any(abs(z - target) < 1e-5 for z, _ in r.poles)


@given(st.complex_numbers(min_magnitude=0.2, max_magnitude=3, allow_nan=False))
def test_planted_anywhere(w):
    r = rs.borel_poles(rs.synthetic_series("planted", 20, w))
    assert min(abs(z - w) for z, _ in r.poles) < 1e-5 * abs(w)


@given(st.lists(fr.filter(lambda x: x != 0), min_size=1, max_size=3, unique=True))
def test_pade_recovers_rational_function(roots):
    # 1 / prod (1 - r x) has an exact [0/M] approximant
    q = [Fraction(1)]
    for r in roots:
        q = [a - r * b for a, b in zip(q + [0], [0] + q)]
    n = 2 * len(q) + 2
    c = [Fraction(0)] * n
    for i in range(n):  # invert the power series of q
        c[i] = (Fraction(int(i == 0)) - sum(q[j] * c[i - j] for j in range(1, min(i, len(q) - 1) + 1)))
    p = rs.pade(rs.FormalSeries(c), 2, len(q) - 1)
    assert p.exact
    x = Fraction(1, 11)  # 1 - r x never vanishes for the sampled r
    assert p(x) == 1 / sum(a * x ** i for i, a in enumerate(q))


def test_pade_degree_reduction_on_polynomials():
    p = rs.pade(rs.FormalSeries([1, 2, 3, 0, 0, 0, 0]), 3, 3)
    assert p.reduced_from == (3, 3) and p.M == 0


def test_pade_float_path():
    s = rs.FormalSeries([mpmath.mpf(1) / 2 ** n for n in range(12)])
    p = rs.pade(s, 2, 2)
    assert not p.exact
    assert abs(p(mpmath.mpf("0.3")) - 1 / (1 - mpmath.mpf("0.15"))) < 1e-25


def test_pade_argument_errors():
    with pytest.raises(ValueError):
        rs.pade(rs.FormalSeries([1, 2]), 2, 2)
    with pytest.raises(ValueError):
        rs.borel_poles(rs.FormalSeries([1] * 5))


def test_stokes_examples():
    r = rs.borel_poles(rs.synthetic_series("factorial", 20))
    m = rs.stokes_location_check(r, [Fraction(0), Fraction(1)], 0.02)
    assert m[0].matched and m[0].omega == 1 and m[0].gap < 1e-10
    m = rs.stokes_location_check(r, [Fraction(0), Fraction(1, 2)], 0.02)
    assert m[0].omega == Fraction(1, 2) or m[0].omega == Fraction(3, 2)
    assert not m[0].matched


def test_stokes_without_differences():
    r = rs.borel_poles(rs.synthetic_series("factorial", 20))
    assert not rs.stokes_location_check(r, [0], 0.02)[0].matched


def test_instanton_variable():
    b = rs.to_instanton_variable([1, 1, 1])
    assert abs(b.coeffs[1] + 2j * mpmath.pi) < 1e-30
    assert abs(b.coeffs[2] + 4 * mpmath.pi ** 2) < 1e-28


def test_report_json_round_trip():
    import json
    r = rs.borel_poles(rs.synthetic_series("alternating", 16))
    d = json.loads(rs.report_json(r))
    assert d["poles"][0]["loc"][0] == pytest.approx(-1)
    assert d["series_length"] == 16


def test_unknown_synthetic():
    with pytest.raises(ValueError):
        rs.synthetic_series("geometric")
