"""Closed-form MTC data in floating point for large-level sweeps.

The exact cyclotomic path is too heavy for levels in the hundreds, so sweeps
use the same closed forms evaluated either in numpy complex128 or, for
extended precision, as numpy object arrays of gmpy2 numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import gmpy2
import mpmath
import numpy as np

from .surgery import PlumbingGraph, contract_tree, linking_matrix


def _bits(digits: int) -> int:
    return int(digits * 3.33) + 16


@dataclass(frozen=True, eq=False)
class NumericMtc:
    family: str
    level: int
    dims: np.ndarray
    twists: np.ndarray
    s_unnorm: np.ndarray
    total_dim: object
    kappa: object
    precision: int | None = None  # None: complex128

    @property
    def rank(self) -> int:
        return len(self.dims)


class _Backend:
    def __init__(self, precision):
        self.precision = precision
        if precision is not None:
            self.ctx = gmpy2.context(gmpy2.get_context(), precision=_bits(precision))

    def __enter__(self):
        if self.precision is not None:
            self._cm = gmpy2.context(self.ctx)
            self._cm.__enter__()
        return self

    def __exit__(self, *exc):
        if self.precision is not None:
            self._cm.__exit__(*exc)

    def pi(self):
        return np.pi if self.precision is None else gmpy2.const_pi()

    def sin(self, x):
        return np.sin(x) if self.precision is None else gmpy2.sin(x)

    def sqrt(self, x):
        return np.sqrt(x) if self.precision is None else gmpy2.sqrt(x)

    def expi(self, x):
        """exp(i x) for real x."""
        if self.precision is None:
            return np.exp(1j * x)
        return gmpy2.mpc(gmpy2.cos(x), gmpy2.sin(x))

    def real(self, x):
        return float(x) if self.precision is None else gmpy2.mpfr(x)

    def array(self, seq):
        if self.precision is None:
            return np.array(seq, dtype=complex)
        out = np.empty(len(seq), dtype=object)
        out[:] = [gmpy2.mpc(x) for x in seq]
        return out


@lru_cache(maxsize=64)
def numeric_mtc(family: str, k: int, precision: int | None = None) -> NumericMtc:
    """su2_k or U(1)_k data from closed forms at the given precision."""
    with _Backend(precision) as bk:
        pi = bk.pi()
        if family == "su2":
            K = k + 2
            sines = [bk.sin(m * pi / K) for m in range(2 * K)]
            s1 = sines[1]
            dims = bk.array([sines[(j + 1) % (2 * K)] / s1 for j in range(k + 1)])
            tw_tab = [bk.expi(pi * t / (2 * K)) for t in range(4 * K)]
            twists = bk.array([tw_tab[(j * (j + 2)) % (4 * K)] for j in range(k + 1)])
            rows = [[sines[((i + 1) * (j + 1)) % (2 * K)] / s1 for j in range(k + 1)]
                    for i in range(k + 1)]
            D = bk.sqrt(bk.real(K) / 2) / s1
            kappa = bk.expi(2 * pi * 3 * k / (8 * bk.real(K)))
        elif family == "u1":
            if k < 2 or k % 2:
                raise ValueError(f"U(1) level must be even (got {k})")
            tab = [bk.expi(pi * t / k) for t in range(2 * k)]
            dims = bk.array([1] * k)
            twists = bk.array([tab[(a * a) % (2 * k)] for a in range(k)])
            rows = [[tab[(2 * a * b) % (2 * k)] for b in range(k)] for a in range(k)]
            D = bk.sqrt(bk.real(k))
            kappa = bk.expi(pi / 4)
        else:
            raise ValueError(f"unknown family {family!r}")
        if precision is None:
            S = np.array(rows, dtype=complex)
        else:
            S = np.empty((len(rows), len(rows)), dtype=object)
            for i, r in enumerate(rows):
                S[i, :] = [gmpy2.mpc(x) for x in r]
    return NumericMtc(family, k, dims, twists, S, D, kappa, precision)


def colored_sum_numeric(nm: NumericMtc, g: PlumbingGraph):
    with _Backend(nm.precision):
        def weights(v):
            f, deg = g.framing(v), g.degree(v)
            return nm.twists ** f * nm.dims ** (2 - deg)

        one = 1.0 + 0j if nm.precision is None else gmpy2.mpc(1)
        return contract_tree(g, weights, lambda vec: nm.s_unnorm.dot(vec),
                             lambda a, b: a * b, lambda vec: vec.sum(), one)


def rt_invariant_numeric(nm: NumericMtc, g: PlumbingGraph, ld=None):
    """Z = kappa^(-sigma) D^(-(m+1)) F in the backend's number type."""
    ld = ld or linking_matrix(g)
    with _Backend(nm.precision):
        F = colored_sum_numeric(nm, g)
        return nm.kappa ** (-ld.signature) * nm.total_dim ** (-(ld.m + 1)) * F


def to_mpc(x):
    """Convert a backend number to mpmath without losing bits."""
    if isinstance(x, gmpy2.mpc):
        with mpmath.workprec(max(x.real.precision, x.imag.precision)):
            return mpmath.mpc(mpmath.mpf(str(x.real)), mpmath.mpf(str(x.imag)))
    return mpmath.mpc(x)
