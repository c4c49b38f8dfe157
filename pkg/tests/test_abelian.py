import mpmath
import pytest
from hypothesis import given, strategies as st

from wrtkit.abelian import (block_sum, homology_data, linking_form_invariant, u1_gauss_counts,
                            u1_surgery_invariant, u1_surgery_sum)
from wrtkit.checks import calibrate_abelian, random_forest
from wrtkit.mtc import mtc_u1
from wrtkit.surgery import PlumbingGraph, plumbing_matrix, rt_invariant

matrices = st.randoms(use_true_random=False).map(lambda r: plumbing_matrix(random_forest(r, 4, 4)))
even_k = st.sampled_from([2, 4, 6, 8])


@pytest.mark.parametrize("B,b1,tors", [
    ([], 0, ()), ([[0]], 1, ()), ([[5]], 0, (5,)),
    ([[2, 1], [1, 2]], 0, (3,)), ([[0, 1], [1, 0]], 0, ()), (block_sum([[2]], [[2]]), 0, (2, 2)),
])
def test_homology(B, b1, tors):
    h = homology_data(B, 4)
    assert h.b1 == b1 and h.torsion_orders == tors


def test_linking_form_of_lens_space():
    h = homology_data([[5]], 2)
    assert h.linking_form[0][0] == pytest.approx(4 / 5)  # -1/5 mod 1
    h = homology_data([[3, 1], [1, 2]], 2)  # L(5,2)
    assert h.torsion_orders == (5,)
    assert 5 * h.linking_form[0][0] % 1 == 0


@given(matrices, even_k)
def test_linking_form_values_in_unit_interval(B, k):
    h = homology_data(B, k)
    for row in h.linking_form:
        for x in row:
            assert 0 <= x < 1


@given(matrices, even_k)
def test_gauss_count_total(B, k):
    assert u1_gauss_counts(B, k).sum() == k ** len(B)


@given(matrices, even_k)
def test_surgery_sum_agrees_with_generic_surgery(B, k):
    n = len(B)
    graph = PlumbingGraph(tuple((i, B[i][i]) for i in range(n)),
                          tuple((i, j) for i in range(n) for j in range(i + 1, n) if B[i][j]))
    assert abs(u1_surgery_invariant(B, k) - rt_invariant(mtc_u1(k), graph)) < 1e-20


@given(matrices, matrices, even_k)
def test_disjoint_union_is_multiplicative(A, B, k):
    C = block_sum(A, B)
    assert abs(linking_form_invariant(C, k) - linking_form_invariant(A, k) * linking_form_invariant(B, k)) < 1e-20
    D = mpmath.sqrt(k)
    assert abs(u1_surgery_invariant(C, k) - D * u1_surgery_invariant(A, k) * u1_surgery_invariant(B, k)) < 1e-20


@given(matrices, even_k)
def test_flat_domain_ratio_is_total_dimension(B, k):
    zs = u1_surgery_invariant(B, k)
    zl = linking_form_invariant(B, k)
    assert abs(zl - mpmath.sqrt(k) * zs) < 1e-20


def test_surgery_sum_exact():
    # S1 x S2: every colour contributes 1
    assert u1_surgery_sum([[0]], 6).rational_value() == 6


def test_calibration_triple():
    alpha, beta, gamma, _ = calibrate_abelian(4)
    assert abs(alpha) < 1e-12 and abs(beta - 1) < 1e-12 and abs(gamma) < 1e-12


def test_h1_domain_on_trivial_torsion():
    for B in ([], [[0]], [[1]]):
        assert abs(linking_form_invariant(B, 4, "h1_mod_k") - linking_form_invariant(B, 4)) < 1e-20


@pytest.mark.parametrize("k", [1, 3, 0])
def test_odd_level_rejected(k):
    with pytest.raises(ValueError, match="spin"):
        linking_form_invariant([[2]], k)


def test_unknown_domain():
    with pytest.raises(ValueError):
        linking_form_invariant([[2]], 4, "everything")
