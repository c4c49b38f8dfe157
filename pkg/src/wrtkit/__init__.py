"""Exact and numerical quantum invariants of plumbed 3-manifolds."""

from .cyclo import Cyclotomic, cyclo_arith, cyclo_eq, cyclo_eval, cyclo_root
from .mtc import MtcData, check_modular, fusion, make_mtc, mtc_su2, mtc_u1, verlinde_dim
from .surgery import PlumbingGraph, lens_graph, parse_manifold, poincare_sphere, rt_invariant

__all__ = [
    "Cyclotomic", "cyclo_arith", "cyclo_eq", "cyclo_eval", "cyclo_root",
    "MtcData", "check_modular", "fusion", "make_mtc", "mtc_su2", "mtc_u1", "verlinde_dim",
    "PlumbingGraph", "lens_graph", "parse_manifold", "poincare_sphere", "rt_invariant",
]

__version__ = "0.1.0"
