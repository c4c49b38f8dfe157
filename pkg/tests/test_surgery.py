import json

import mpmath
import pytest
from hypothesis import given, strategies as st

from wrtkit.checks import random_forest
from wrtkit.mtc import mtc_su2, mtc_u1
from wrtkit.surgery import (GraphError, PlumbingGraph, blow_down, blow_up_edge, blow_up_leaf,
                            builtin_manifolds, chain, colored_sum_bruteforce, colored_sum_F,
                            lens_graph, linking_matrix, negative_continued_fraction, parse_manifold,
                            poincare_move_sequence, poincare_sphere, poincare_star, rt_invariant,
                            seifert_graph, stabilize, torus_bundle_trace)

forests = st.randoms(use_true_random=False).map(lambda r: random_forest(r, 4, 4))
levels = st.integers(1, 5)


def Z(k, g, p=30):
    return rt_invariant(mtc_su2(k), g, p)


@given(forests, levels)
def test_tree_contraction_matches_bruteforce(g, k):
    m = mtc_su2(k)
    assert colored_sum_F(m, g) == colored_sum_bruteforce(m, g)


@given(forests, levels, st.sampled_from([1, -1]))
def test_stabilization_multiplies_by_twist_sum(g, k, sign):
    m = mtc_su2(k)
    kt = m.kappa_unnorm if sign == 1 else m.kappa_unnorm_minus
    g2 = stabilize(g, sign)
    assert colored_sum_F(m, g2) == kt * colored_sum_F(m, g)
    assert abs(Z(k, g2) - Z(k, g)) < 1e-20


@given(forests, levels)
def test_blow_down_invariance(g, k):
    for v, f in g.vertices:
        if f in (1, -1) and g.degree(v) <= 2:
            assert abs(Z(k, blow_down(g, v)) - Z(k, g)) < 1e-20


@given(forests, levels, st.sampled_from([1, -1]), st.data())
def test_blow_up_invariance(g, k, eps, data):
    z = Z(k, g)
    u = data.draw(st.sampled_from(g.ids))
    assert abs(Z(k, blow_up_leaf(g, u, eps)) - z) < 1e-20
    if g.edges:
        a, b = data.draw(st.sampled_from(g.edges))
        assert abs(Z(k, blow_up_edge(g, a, b, eps)) - z) < 1e-20


@given(forests, st.permutations(range(5)))
def test_relabeling_does_not_change_invariant(g, perm):
    mapping = {v: 10 + perm[i] for i, v in enumerate(g.ids)}
    assert colored_sum_F(mtc_su2(3), g.relabel(mapping)) == colored_sum_F(mtc_su2(3), g)


@given(forests, forests, levels)
def test_connected_sum(g, h, k):
    D = mtc_su2(k).total_dim(30)
    with mpmath.workdps(30):
        assert abs(Z(k, g.disjoint_union(h)) - D * Z(k, g) * Z(k, h)) < 1e-20


@given(forests, levels)
def test_orientation_reversal_conjugates(g, k):
    rev = PlumbingGraph(tuple((v, -f) for v, f in g.vertices), g.edges)
    # edges keep sign +1: on a forest this is an isotopy of the mirror link
    assert abs(Z(k, rev) - mpmath.conj(Z(k, g))) < 1e-20


@given(forests)
def test_json_round_trip(g):
    assert PlumbingGraph.from_json(g.to_json()) == g
    assert PlumbingGraph.from_dict(json.loads(g.to_json())) == g


@pytest.mark.parametrize("k", range(1, 17))
def test_canonical_values(k):
    K = k + 2
    with mpmath.workdps(30):
        assert abs(Z(k, PlumbingGraph()) - mpmath.sqrt(2.0 / K) * mpmath.sin(mpmath.pi / K)) < 1e-12
    assert abs(Z(k, PlumbingGraph(((0, 0),))) - 1) < 1e-20


def test_projective_space_vanishes_at_level_one():
    assert abs(Z(1, lens_graph(2, 1))) < 1e-25


@pytest.mark.parametrize("p,q,cf", [(5, 2, [3, 2]), (7, 1, [7]), (7, 3, [3, 2, 2]), (1, 1, [1])])
def test_negative_continued_fraction(p, q, cf):
    assert negative_continued_fraction(p, q) == cf


@given(st.integers(1, 30), st.integers(1, 30))
def test_lens_linking_determinant(p, q):
    import math
    if q >= p and (p, q) != (1, 1) or math.gcd(p, q) != 1:
        with pytest.raises(GraphError):
            lens_graph(p, q)
        return
    ld = linking_matrix(lens_graph(p, q))
    assert abs(ld.det) == p and ld.b1 == 0 and ld.torsion_order == p


@pytest.mark.parametrize("k", range(1, 9))
def test_e8_and_star_agree(k):
    assert abs(Z(k, poincare_sphere()) - Z(k, poincare_star())) < 1e-20


def test_move_sequence():
    seq = poincare_move_sequence()
    assert seq[0] == poincare_sphere()
    assert len(seq) == 11
    end, star = seq[-1], poincare_star()
    assert sorted(f for _, f in end.vertices) == sorted(f for _, f in star.vertices)
    assert sorted(end.degree(v) for v in end.ids) == sorted(star.degree(v) for v in star.ids)
    for k in (2, 3):
        vals = [Z(k, g) for g in seq]
        assert max(abs(v - vals[0]) for v in vals) < 1e-20


def test_star_orientations():
    # same Seifert invariants with centre -1 is a different manifold
    assert linking_matrix(poincare_star()).det == -1
    assert linking_matrix(poincare_sphere()).det == 1
    assert abs(linking_matrix(seifert_graph(-1, [(2, 1), (3, 1), (5, 1)])).det) == 61


@pytest.mark.parametrize("k", [1, 4, 7])
def test_torus_traces(k):
    m = mtc_su2(k)
    assert abs(torus_bundle_trace(m, []) - (k + 1)) < 1e-20
    assert abs(torus_bundle_trace(m, ["S", "S"]) - (k + 1)) < 1e-20
    assert abs(torus_bundle_trace(m, ["T", "Ti"]) - (k + 1)) < 1e-20
    with pytest.raises(ValueError):
        torus_bundle_trace(m, ["X"])


def test_generic_family_u1():
    # surgery evaluation accepts any category; U(1)_k on S1 x S2 is 1
    assert abs(rt_invariant(mtc_u1(4), PlumbingGraph(((0, 0),))) - 1) < 1e-20


def test_graph_validation():
    with pytest.raises(GraphError):
        PlumbingGraph(((0, 1), (1, 1), (2, 1)), ((0, 1), (1, 2), (0, 2)))
    with pytest.raises(GraphError):
        PlumbingGraph(((0, 1),), ((0, 1),))
    with pytest.raises(GraphError):
        blow_down(chain([2, 2]), 0)


@pytest.mark.parametrize("spec", ["s3", "s1xs2", "poincare", "poincare-star", "lens:5,2",
                                  "seifert:-2;2/1,3/1,5/1", "lens_3_1"])
def test_parse_manifold(spec):
    assert isinstance(parse_manifold(spec), PlumbingGraph)


def test_parse_manifold_file(tmp_path):
    f = tmp_path / "g.json"
    f.write_text(lens_graph(7, 3).to_json())
    assert parse_manifold(f"@{f}") == lens_graph(7, 3)
    f.write_text(json.dumps({"matrix": [[2]]}))
    with pytest.raises(GraphError):
        parse_manifold(f"@{f}")


@pytest.mark.parametrize("spec", ["lens:2", "lens:4,2", "seifert:1;2", "torus", "seifert:x;2/1"])
def test_parse_manifold_errors(spec):
    with pytest.raises(GraphError):
        parse_manifold(spec)


def test_builtin_library():
    lib = builtin_manifolds()
    assert lib["poincare_e8"] == poincare_sphere()
    assert lib["lens_5_2"] == lens_graph(5, 2)
