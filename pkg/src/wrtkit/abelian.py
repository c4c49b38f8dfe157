"""U(1) level-k invariants: linking-form Gauss sums and the abelian surgery sum.

For an abelian theory the colored invariant of any framed link depends only
on its linking matrix, so these routines accept arbitrary symmetric integer
matrices rather than plumbing graphs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from . import intlinalg
from .cyclo import DEFAULT_PRECISION, Cyclotomic


def _require_even(k: int):
    if k < 2 or k % 2:
        raise ValueError(f"U(1) level must be even and positive (got k={k}): odd levels "
                         "need a spin structure")


@dataclass(frozen=True)
class HomologyData:
    """H_1 and H^1(.; Z/k) of the surgery manifold, plus the torsion linking form.

    ``torsion_orders`` lists the nontrivial cyclic factors d_i > 1 of H_1;
    ``linking_form[i][j]`` is lambda(g_i, g_j) in [0, 1) on their generators.
    """

    smith_diagonal: tuple[int, ...]
    b1: int
    torsion_orders: tuple[int, ...]
    h1_mod_k: tuple[int, ...]
    linking_form: tuple[tuple[Fraction, ...], ...]
    k: int

    @property
    def torsion_size(self) -> int:
        return math.prod(self.torsion_orders)


def homology_data(B: Sequence[Sequence[int]], k: int) -> HomologyData:
    """Smith form, H^1(M; Z/k) and the linking form -B^{-1} on torsion.

    With U B V = diag(d), the torsion generator g_i = U^{-1} e_i satisfies
    d_i g_i = B (V e_i), so lambda(g_i, g_j) = -g_i . V e_j / d_j mod 1, which
    also works when B is degenerate.
    """
    B = [list(map(int, row)) for row in B]
    if not intlinalg.is_symmetric(B):
        raise ValueError("linking matrix must be symmetric")
    m = len(B)
    if m == 0:
        return HomologyData((), 0, (), (), (), k)
    U, diag, V = intlinalg.smith_normal_form(B)
    Uinv = intlinalg.unimodular_inverse(U)
    tors = [i for i, d in enumerate(diag) if d > 1]
    b1 = sum(1 for d in diag if d == 0)
    gens = [[Uinv[r][i] for r in range(m)] for i in tors]
    lam = []
    for gi in gens:
        row = []
        for j in tors:
            v = sum(gi[r] * V[r][j] for r in range(m))
            row.append(Fraction(-v, diag[j]) % 1)
        lam.append(tuple(row))
    h1 = tuple(math.gcd(diag[i], k) for i in tors if math.gcd(diag[i], k) > 1) + (k,) * b1
    return HomologyData(tuple(diag), b1, tuple(diag[i] for i in tors), h1, tuple(lam), k)


def _quadratic_phase_sum(orders: Sequence[int], lam, k: int, scale: Sequence[int]) -> Cyclotomic:
    """Sum of exp(pi i k lambda(x, x)) over x = sum_i t_i scale_i g_i, t_i mod orders_i."""
    den = 1
    for row in lam:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    # exp(pi i k lambda) = zeta_{2 den}^{k lambda den}
    N = 2 * den
    counts = [0] * N
    n = len(orders)
    L = [[int(lam[i][j] * den) for j in range(n)] for i in range(n)]
    for ts in itertools.product(*(range(o) for o in orders)):
        x = [t * s for t, s in zip(ts, scale)]
        val = sum(x[i] * x[j] * L[i][j] for i in range(n) for j in range(n))
        counts[(k * val) % N] += 1
    return Cyclotomic(N, counts)


def linking_form_invariant(B: Sequence[Sequence[int]], k: int, domain: str = "flat",
                           precision: int = DEFAULT_PRECISION) -> mpmath.mpc:
    """Gauss sum of exp(2 pi i k q(gamma)), q = lambda/2, times k^(b1/2).

    Args:
        domain: ``"flat"`` sums over Tors H_1 (+) (Z/k)^b1 with the torsion
            factor |Tors|^(-1/2); ``"h1_mod_k"`` sums over H^1(M; Z/k) only,
            identified with the k-torsion of H_1 through the linking form.
    """
    _require_even(k)
    h = homology_data(B, k)
    with mpmath.workdps(precision + 5):
        if domain == "flat":
            s = _quadratic_phase_sum(h.torsion_orders, h.linking_form, k, [1] * len(h.torsion_orders))
            pref = mpmath.mpf(k) ** (mpmath.mpf(h.b1) / 2) / mpmath.sqrt(h.torsion_size)
        elif domain == "h1_mod_k":
            orders = [math.gcd(d, k) for d in h.torsion_orders]
            scale = [d // g for d, g in zip(h.torsion_orders, orders)]
            s = _quadratic_phase_sum(orders, h.linking_form, k, scale)
            pref = mpmath.mpf(k) ** (mpmath.mpf(h.b1) / 2)
        else:
            raise ValueError(f"unknown summation domain {domain!r}")
        return pref * s.evaluate(precision)


def _signature(B) -> int:
    p, n, _ = intlinalg.inertia(B)
    return p - n


def u1_gauss_counts(B: Sequence[Sequence[int]], k: int) -> np.ndarray:
    """Histogram of a^T B a mod 2k over a in (Z/k)^m."""
    Bm = np.array(B, dtype=np.int64).reshape(len(B), len(B))
    m = Bm.shape[0]
    N = 2 * k
    if m == 0:
        out = np.zeros(N, dtype=np.int64)
        out[0] = 1
        return out
    inner = min(m, max(1, int(math.log(2e6) / math.log(max(k, 2)))))
    grids = np.meshgrid(*([np.arange(k)] * inner), indexing="ij")
    tail = np.stack([g.ravel() for g in grids], axis=1)  # last `inner` coordinates
    Bt = Bm[m - inner:, m - inner:]
    tail_q = np.einsum("ni,ij,nj->n", tail, Bt, tail) % N
    counts = np.zeros(N, dtype=np.int64)
    for head in itertools.product(range(k), repeat=m - inner):
        h = np.array(head, dtype=np.int64)
        hq = int(h @ Bm[: m - inner, : m - inner] @ h) if len(h) else 0
        cross = tail @ (2 * Bm[m - inner:, : m - inner] @ h) if len(h) else 0
        counts += np.bincount((tail_q + cross + hq) % N, minlength=N)
    return counts


def u1_surgery_sum(B: Sequence[Sequence[int]], k: int) -> Cyclotomic:
    """Exact sum over a in (Z/k)^m of exp(pi i a^T B a / k)."""
    _require_even(k)
    return Cyclotomic(2 * k, [int(c) for c in u1_gauss_counts(B, k)])


def u1_surgery_invariant(B: Sequence[Sequence[int]], k: int,
                         precision: int = DEFAULT_PRECISION) -> mpmath.mpc:
    """kappa^(-sigma) k^(-(m+1)/2) sum_a theta^B, with kappa = exp(2 pi i/8) for U(1)_k."""
    _require_even(k)
    B = [list(map(int, row)) for row in B]
    if not intlinalg.is_symmetric(B):
        raise ValueError("linking matrix must be symmetric")
    m = len(B)
    sigma = _signature(B)
    F = u1_surgery_sum(B, k)
    with mpmath.workdps(precision + 5):
        kappa = mpmath.expjpi(mpmath.mpf(1) / 4)
        return kappa ** (-sigma) * mpmath.mpf(k) ** (-mpmath.mpf(m + 1) / 2) * F.evaluate(precision)


def block_sum(*mats: Sequence[Sequence[int]]) -> list[list[int]]:
    n = sum(len(m) for m in mats)
    out = [[0] * n for _ in range(n)]
    off = 0
    for M in mats:
        for i, row in enumerate(M):
            for j, x in enumerate(row):
                out[off + i][off + j] = int(x)
        off += len(M)
    return out
