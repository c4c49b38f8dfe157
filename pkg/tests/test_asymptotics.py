import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from wrtkit import asymptotics as asy
from wrtkit.checks import abelian_c0_fit
from wrtkit.surgery import PlumbingGraph, lens_graph


def synthetic(ks, f):
    return asy.KSweep(None, "su2", tuple(ks), tuple(complex(f(k)) for k in ks))


def test_s3_normalized_sweep_is_one():
    sw = asy.k_sweep("su2", PlumbingGraph(), 1, 40, normalization="divided-by-S3")
    assert np.allclose(sw.as_array(), 1, atol=1e-12)


def test_u1_sweep_uses_even_levels():
    sw = asy.k_sweep("u1", lens_graph(3, 1), 1, 20)
    assert sw.k_values == tuple(range(2, 21, 2)) and sw.step == 2


def test_sweep_precision_modes_agree():
    a = asy.k_sweep("su2", lens_graph(5, 2), 3, 30)
    b = asy.k_sweep("su2", lens_graph(5, 2), 3, 30, precision=35)
    assert max(abs(complex(x) - complex(y)) for x, y in zip(a.values, b.values)) < 1e-11


def test_workers_do_not_change_output():
    a = asy.k_sweep("su2", lens_graph(3, 1), 5, 40, precision=20)
    b = asy.k_sweep("su2", lens_graph(3, 1), 5, 40, precision=20, workers=2)
    assert a.to_csv() == b.to_csv()


@given(st.lists(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=30))
def test_csv_round_trip_float(vals):
    sw = asy.KSweep(None, "su2", tuple(range(1, len(vals) + 1)), tuple(vals))
    back = asy.KSweep.from_csv(sw.to_csv())
    assert back.values == sw.values and back.k_values == sw.k_values


def test_csv_round_trip_extended():
    sw = asy.k_sweep("su2", lens_graph(3, 1), 10, 20, precision=40)
    back = asy.KSweep.from_csv(sw.to_csv(), precision=40)
    with mpmath.workdps(40):
        assert max(abs(x - y) for x, y in zip(sw.values, back.values)) < 1e-38


def test_csv_header_required():
    with pytest.raises(ValueError):
        asy.KSweep.from_csv("a,b,c\n1,2,3\n")


def test_levels_must_increase():
    with pytest.raises(ValueError):
        asy.KSweep(None, "su2", (3, 2), (0, 0))


@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False), min_size=4, max_size=64))
def test_parseval(vals):
    sw = asy.KSweep(None, "su2", tuple(range(len(vals))), tuple(vals))
    X = asy.dft(sw)
    assert np.sum(np.abs(X) ** 2) == pytest.approx(np.mean(np.abs(np.array(vals)) ** 2), rel=1e-9, abs=1e-12)


def test_planted_frequencies_found():
    sw = synthetic(range(20, 277), lambda k: np.exp(2j * np.pi * k / 3) + 0.4 * np.exp(2j * np.pi * 3 * k / 4))
    spec = asy.phase_spectrum(sw, snap_denominator=12)
    assert sorted(spec.locations()) == pytest.approx([1 / 3, 3 / 4])
    amps = dict(spec.peaks)
    assert amps[Fraction(1, 3)] == pytest.approx(1, rel=0.02)
    assert amps[Fraction(3, 4)] == pytest.approx(0.4, rel=0.05)
    assert asy.PhaseSpectrum.from_json(spec.to_json()).peaks == spec.peaks


def test_short_window_rejected():
    with pytest.raises(ValueError):
        asy.phase_spectrum(synthetic(range(10), lambda k: 1))


@given(st.integers(1, 50), st.integers(1, 50))
def test_snap_frequency(p, q):
    x = Fraction(p, q) % 1
    assert asy.snap_frequency(float(x) + 1e-12, 50, 1e-9) == x


def test_snap_keeps_irrational():
    assert asy.snap_frequency(math.sqrt(2) - 1, 20, 1e-9) == math.sqrt(2) - 1


def test_snap_to_pi_rational():
    v, r = asy.snap_to_pi_rational(mpmath.pi * 7 / 60 + 1e-12, 240, 1e-9)
    assert r == Fraction(7, 60)
    assert asy.snap_to_pi_rational(mpmath.mpf(1), 10, 1e-9)[1] is None


def test_perturbative_fit_recovers_coefficients():
    ks = np.arange(50, 200)
    vals = [3 * (1 + 2 / (k + 2) - 5 / (k + 2) ** 2) for k in ks]
    fit = asy.perturbative_fit(ks, vals, 2, shift=2)
    assert fit.amplitude == pytest.approx(3)
    assert fit.coeffs[0] == pytest.approx(2, abs=1e-8)
    assert fit.coeffs[1] == pytest.approx(-5, abs=1e-6)
    assert fit.stable


def test_compare_shifts_prefers_true_shift():
    ks = np.arange(50, 200)
    vals = [(k + 2) ** -1.5 * (1 + 1 / (k + 2)) for k in ks]
    out = asy.compare_shifts(ks, vals, 1, d=-3)
    assert out["best_shift"] == 2


def test_fit_needs_enough_points():
    with pytest.raises(ValueError):
        asy.perturbative_fit([1, 2, 3], [1, 1, 1], 2)


def test_transseries_fit_synthetic():
    ks = list(range(100, 200))
    with mpmath.workdps(40):
        vals = [(k + 2) ** mpmath.mpf(-1.5) * (1 + mpmath.mpf(2) / (k + 2))
                + mpmath.mpf(1) / 2 * mpmath.expjpi(2 * k * mpmath.mpf(1) / 3) for k in ks]
    fit = asy.transseries_fit(ks, vals, [mpmath.mpf(1) / 3], 3, 0, precision=40)
    s = fit.trivial_series()
    assert abs(s[1] - 2) < 1e-20 and abs(s[2]) < 1e-18
    assert abs(list(fit.sectors.values())[0][0] - 0.5) < 1e-20
    assert fit.residual < 1e-25


def test_u1_one_loop_exactness():
    fit = abelian_c0_fit([[3]], k_max=300)
    assert all(abs(a) < 1e-6 for a in fit.coeffs)


@pytest.mark.parametrize("p", [2, 3])
def test_lens_zero_frequency_scaling(p):
    # observed: the zero-frequency amplitude of Z(L(p,1))/Z(S3) is p^(-3/2)
    sw = asy.k_sweep("su2", lens_graph(p, 1), 20, 276, normalization="divided-by-S3")
    _, c0 = asy.trivial_coeff(sw)
    assert abs(c0[0]) * p ** 1.5 == pytest.approx(1, rel=1e-3)


def test_trivial_coeff_sliding():
    sw = synthetic(range(100), lambda k: 2 + np.exp(2j * np.pi * k / 4))
    centres, c0 = asy.trivial_coeff(sw, window=20, taper="rect", stride=5)
    assert len(c0) == 17 and np.allclose(c0, 2)
    assert centres[0] == pytest.approx(9.5)


def test_bohr_sommerfeld():
    orb = asy.bohr_sommerfeld_orbits(3)
    assert len(orb) == 4 and orb[0] == pytest.approx(math.pi / 5)
