"""Modular tensor category data for su(2)_k and U(1)_k.

Exact entries (quantum dimensions, twists, unnormalised S, D^2, the twist
sum) are cyclotomic; anything involving sqrt(D^2) is assembled in the
complex embedding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import mpmath

from .cyclo import DEFAULT_PRECISION, Cyclotomic, q_integer

INTEGER_TOL = 1e-6


class NonIntegralError(ArithmeticError):
    """A quantity that must be an integer was not, to within INTEGER_TOL."""


@dataclass(frozen=True, eq=False)
class MtcData:
    family: str
    level: int
    labels: tuple
    root_order: int
    qdims: tuple[Cyclotomic, ...]
    twists: tuple[Cyclotomic, ...]
    s_unnorm: tuple[tuple[Cyclotomic, ...], ...]
    t_diag: tuple[Cyclotomic, ...]
    total_dim_sq: Cyclotomic
    kappa_unnorm: Cyclotomic
    central_charge: Fraction
    duals: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def qdim_inverse(self, i: int) -> Cyclotomic:
        key = ("qinv", i)
        if key not in self._cache:
            self._cache[key] = self.qdims[i].inverse()
        return self._cache[key]

    @cached_property
    def kappa_unnorm_minus(self) -> Cyclotomic:
        """sum_i dim_i^2 / theta_i, the twist sum for a -1 framed unknot."""
        return self.kappa_unnorm.conjugate()

    # -- numeric views -------------------------------------------------------

    def _numeric(self, name: str, precision: int, build):
        key = (name, precision)
        if key not in self._cache:
            with mpmath.workdps(precision + 5):
                self._cache[key] = build()
        return self._cache[key]

    def total_dim(self, precision: int = DEFAULT_PRECISION) -> mpmath.mpf:
        return self._numeric("D", precision,
                             lambda: mpmath.sqrt(mpmath.re(self.total_dim_sq.evaluate(precision))))

    def kappa(self, precision: int = DEFAULT_PRECISION) -> mpmath.mpc:
        return self._numeric("kappa", precision,
                             lambda: self.kappa_unnorm.evaluate(precision) / self.total_dim(precision))

    def s_matrix(self, precision: int = DEFAULT_PRECISION) -> mpmath.matrix:
        """Normalised S = s_unnorm / D."""

        def build():
            n = self.rank
            D = self.total_dim(precision)
            S = mpmath.matrix(n, n)
            for i in range(n):
                for j in range(i, n):
                    S[i, j] = S[j, i] = self.s_unnorm[i][j].evaluate(precision) / D
            return S

        return self._numeric("S", precision, build)

    def t_matrix(self, precision: int = DEFAULT_PRECISION) -> mpmath.matrix:
        def build():
            return mpmath.diag([t.evaluate(precision) for t in self.t_diag])

        return self._numeric("T", precision, build)


def _s_unnorm_su2(k: int, order: int) -> tuple[tuple[Cyclotomic, ...], ...]:
    n = k + 1
    cache: dict[int, Cyclotomic] = {}
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m = (i + 1) * (j + 1)
            if m not in cache:
                cache[m] = q_integer(m, order)
            rows[i][j] = rows[j][i] = cache[m]
    return tuple(tuple(r) for r in rows)


@lru_cache(maxsize=64)
def mtc_su2(k: int) -> MtcData:
    """su(2) at level k with q = exp(i pi/(k+2)) and labels j = 0..k (spin j/2)."""
    if k < 1:
        raise ValueError("level must be a positive integer")
    K = k + 2
    N = 4 * K
    qdims = tuple(q_integer(j + 1, N) for j in range(k + 1))
    twists = tuple(Cyclotomic.root(N, j * (j + 2)) for j in range(k + 1))
    # T_jj = exp(2 pi i (j(j+2)/(4K) - 1/8)) = zeta_{8K}^(2j(j+2) - K)
    t_diag = tuple(Cyclotomic.root(8 * K, 2 * j * (j + 2) - K) for j in range(k + 1))
    s_unnorm = _s_unnorm_su2(k, N)
    d2 = sum((q * q for q in qdims), Cyclotomic.rational(0, N))
    kap = sum((q * q * t for q, t in zip(qdims, twists)), Cyclotomic.rational(0, N))
    return MtcData(family="su2", level=k, labels=tuple(range(k + 1)), root_order=N,
                   qdims=qdims, twists=twists, s_unnorm=s_unnorm, t_diag=t_diag,
                   total_dim_sq=d2, kappa_unnorm=kap, central_charge=Fraction(3 * k, K),
                   duals=tuple(range(k + 1)))


@lru_cache(maxsize=64)
def mtc_u1(k: int) -> MtcData:
    """U(1) at even level k: labels Z/k, theta_a = exp(pi i a^2/k), S~_ab = exp(2 pi i ab/k)."""
    if k < 2 or k % 2:
        raise ValueError(
            f"U(1)_k needs an even level k >= 2 (got {k}): for odd k the twist "
            "exp(pi i a^2/k) is not well defined on Z/k without a spin structure")
    N = 2 * k
    one = Cyclotomic.rational(1, N)
    qdims = tuple(one for _ in range(k))
    twists = tuple(Cyclotomic.root(N, a * a) for a in range(k))
    s_unnorm = tuple(tuple(Cyclotomic.root(N, 2 * a * b) for b in range(k)) for a in range(k))
    # S here is the conjugate of the convention that pairs with T = theta, so
    # the modular T is conj(theta) up to the global exp(2 pi i/8)
    tN = N * 8 // math.gcd(N, 8)
    t_diag = tuple(Cyclotomic.root(tN, -a * a * (tN // N) + tN // 8) for a in range(k))
    kap = sum(twists, Cyclotomic.rational(0, N))
    return MtcData(family="u1", level=k, labels=tuple(range(k)), root_order=N,
                   qdims=qdims, twists=twists, s_unnorm=s_unnorm, t_diag=t_diag,
                   total_dim_sq=Cyclotomic.rational(k, N), kappa_unnorm=kap,
                   central_charge=Fraction(1), duals=tuple((-a) % k for a in range(k)))


def make_mtc(family: str, k: int) -> MtcData:
    if family == "su2":
        return mtc_su2(k)
    if family == "u1":
        return mtc_u1(k)
    raise ValueError(f"unknown family {family!r}; expected su2 or u1")


# ---------------------------------------------------------------------------


def _to_int(x, what: str) -> int:
    x = complex(x)
    n = round(x.real)
    resid = abs(x - n)
    if resid >= INTEGER_TOL:
        raise NonIntegralError(f"{what}: value {x} is {resid:.3g} away from an integer")
    return int(n)


def fusion(mtc: MtcData, precision: int = DEFAULT_PRECISION) -> list[list[list[int]]]:
    """N[i][j][l] = sum_m S_im S_jm conj(S_lm) / S_0m, rounded."""
    key = ("fusion", precision)
    if key in mtc._cache:
        return mtc._cache[key]
    S = mtc.s_matrix(precision)
    n = mtc.rank
    with mpmath.workdps(precision + 5):
        if mpmath.det(S) == 0:
            raise NonIntegralError("S-matrix is singular")
        inv0 = [1 / S[0, m] for m in range(n)]
        conjS = [[mpmath.conj(S[l, m]) for m in range(n)] for l in range(n)]
        out = [[[0] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                w = [S[i, m] * S[j, m] * inv0[m] for m in range(n)]
                for l in range(n):
                    v = mpmath.fsum(w[m] * conjS[l][m] for m in range(n))
                    out[i][j][l] = out[j][i][l] = _to_int(v, f"N[{i}][{j}][{l}]")
    mtc._cache[key] = out
    return out


def verlinde_dim(mtc: MtcData, genus: int, precision: int = DEFAULT_PRECISION) -> int:
    """sum_i S_0i^(2-2g)."""
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    S = mtc.s_matrix(precision)
    with mpmath.workdps(precision + 5):
        v = mpmath.fsum(S[0, i] ** (2 - 2 * genus) for i in range(mtc.rank))
    return _to_int(v, f"Verlinde dimension at genus {genus}")


def pants_dimension(fus: Sequence, duals: Sequence[int], genus: int, labels: Sequence[int]) -> int:
    """Conformal-block dimension by contracting fusion tensors over a pants tree.

    Punctures are fused one after another onto the unit, then each handle
    fuses in sum_a a (x) a*; the answer is the multiplicity of the unit.
    """
    n = len(duals)
    v = [0] * n
    v[0] = 1
    for i in labels:
        v = [sum(v[m] * fus[m][i][l] for m in range(n)) for l in range(n)]
    for _ in range(genus):
        nv = [0] * n
        for m in range(n):
            if not v[m]:
                continue
            for a in range(n):
                for b in range(n):
                    c = fus[m][a][b]
                    if c:
                        row = fus[b][duals[a]]
                        for l in range(n):
                            nv[l] += v[m] * c * row[l]
        v = nv
    return v[0]


def conformal_block_dim(mtc: MtcData, genus: int, labels: Sequence[int],
                        precision: int = DEFAULT_PRECISION) -> int:
    """sum_m S_0m^(2-2g-n) prod_j S_{i_j m}, cross-checked against the pants tree."""
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    for i in labels:
        if not 0 <= i < mtc.rank:
            raise ValueError(f"label {i} out of range")
    S = mtc.s_matrix(precision)
    e = 2 - 2 * genus - len(labels)
    with mpmath.workdps(precision + 5):
        terms = []
        for m in range(mtc.rank):
            t = S[0, m] ** e
            for i in labels:
                t *= S[i, m]
            terms.append(t)
        v = mpmath.fsum(terms)
    dim = _to_int(v, "conformal block dimension")
    oracle = pants_dimension(fusion(mtc, precision), mtc.duals, genus, labels)
    if dim != oracle:
        raise NonIntegralError(f"Verlinde value {dim} disagrees with pants contraction {oracle}")
    return dim


# ---------------------------------------------------------------------------


@dataclass
class ModularityReport:
    family: str
    level: int
    unitarity_dev: float
    symmetry_dev: float
    s4_dev: float
    st3_lambda: complex
    st3_residual: float
    st3_lambda_unimodular_dev: float
    kappa_abs_dev: float
    kappa_arg_dev: float
    det_s_abs: float

    def ok(self, tol: float = 1e-9) -> bool:
        return max(self.unitarity_dev, self.symmetry_dev, self.s4_dev, self.st3_residual,
                   self.st3_lambda_unimodular_dev, self.kappa_abs_dev, self.kappa_arg_dev) < tol


def _maxabs(M) -> float:
    return float(max(abs(M[i, j]) for i in range(M.rows) for j in range(M.cols)))


def check_modular(mtc: MtcData, precision: int = DEFAULT_PRECISION) -> ModularityReport:
    S = mtc.s_matrix(precision)
    T = mtc.t_matrix(precision)
    n = mtc.rank
    with mpmath.workdps(precision + 5):
        I = mpmath.eye(n)
        unit = _maxabs(S * S.H - I)
        sym = _maxabs(S - S.T)
        S2 = S * S
        s4 = _maxabs(S2 * S2 - I)
        ST = S * T
        P = ST * ST * ST
        num = sum(mpmath.conj(S2[i, j]) * P[i, j] for i in range(n) for j in range(n))
        den = sum(abs(S2[i, j]) ** 2 for i in range(n) for j in range(n))
        lam = num / den
        resid = _maxabs(P - lam * S2)
        kap = mtc.kappa(precision)
        target = 2 * mpmath.pi * mpmath.mpf(mtc.central_charge.numerator) / mtc.central_charge.denominator / 8
        darg = mpmath.arg(kap) - target
        darg = abs(darg - 2 * mpmath.pi * mpmath.nint(darg / (2 * mpmath.pi)))
        return ModularityReport(
            family=mtc.family, level=mtc.level,
            unitarity_dev=unit, symmetry_dev=sym, s4_dev=s4,
            st3_lambda=complex(lam), st3_residual=resid,
            st3_lambda_unimodular_dev=float(abs(abs(lam) - 1)),
            kappa_abs_dev=float(abs(abs(kap) - 1)), kappa_arg_dev=float(darg),
            det_s_abs=float(abs(mpmath.det(S))))
