"""Borel transforms, Pade approximants and Borel-plane singularity checks."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath

EXACT_TYPES = (int, Fraction)


@dataclass(frozen=True)
class FormalSeries:
    """Truncated power series sum_n a_n x^n; ``variable`` is a tag only."""

    coeffs: tuple
    variable: str = "hbar"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, EXACT_TYPES) for c in self.coeffs)

    def __add__(self, other: "FormalSeries") -> "FormalSeries":
        n = max(len(self), len(other))
        a = list(self.coeffs) + [0] * (n - len(self))
        b = list(other.coeffs) + [0] * (n - len(other))
        return FormalSeries(tuple(x + y for x, y in zip(a, b)), self.variable)

    def scale(self, c) -> "FormalSeries":
        return FormalSeries(tuple(c * x for x in self.coeffs), self.variable)


def borel_transform(s: FormalSeries) -> FormalSeries:
    """a_n -> a_n / n! (exact for integer or rational input)."""
    out = []
    for n, a in enumerate(s.coeffs):
        f = math.factorial(n)
        out.append(Fraction(a, f) if isinstance(a, EXACT_TYPES) else a / f)
    return FormalSeries(tuple(out), "borel")


# ---------------------------------------------------------------------------
# Pade


@dataclass
class PadeResult:
    numerator: list  # p_0..p_L
    denominator: list  # q_0 = 1, q_1..q_M
    L: int
    M: int
    exact: bool
    condition: float | None = None
    reduced_from: tuple | None = None

    def __call__(self, x):
        p = sum(c * x ** i for i, c in enumerate(self.numerator))
        q = sum(c * x ** i for i, c in enumerate(self.denominator))
        return p / q


def _solve_fractions(A, b):
    """Gaussian elimination over Q; None when singular."""
    n = len(A)
    m = [list(row) + [rhs] for row, rhs in zip(A, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[r][n] for r in range(n)]


def _pade_system(c, L, M):
    # sum_{j=0}^{M} q_j c_{L+i-j} = 0 for i = 1..M, with q_0 = 1
    get = lambda i: c[i] if 0 <= i < len(c) else 0
    A = [[get(L + i - j) for j in range(1, M + 1)] for i in range(1, M + 1)]
    b = [-get(L + i) for i in range(1, M + 1)]
    return A, b


def _numerator(c, q, L):
    return [sum(q[j] * c[i - j] for j in range(len(q)) if 0 <= i - j < len(c)) for i in range(L + 1)]


def pade(s: FormalSeries, L: int, M: int, precision: int = 40) -> PadeResult:
    """[L/M] approximant with q_0 = 1.

    Exact (rational) input is solved over Q.  Otherwise the system is solved
    at ``precision`` digits; a singular or numerically rank-deficient system
    lowers M until it is solvable, recording the original degrees.
    """
    if L < 0 or M < 0:
        raise ValueError("degrees must be nonnegative")
    if L + M + 1 > len(s):
        raise ValueError(f"[{L}/{M}] needs {L + M + 1} coefficients, series has {len(s)}")
    c = list(s.coeffs)
    start = (L, M)
    if s.is_exact:
        c = [Fraction(x) for x in c]
        while True:
            A, b = _pade_system(c, L, M)
            sol = _solve_fractions(A, b) if M else []
            if sol is not None:
                q = [Fraction(1)] + sol
                return PadeResult(_numerator(c, q, L), q, L, M, True, None,
                                  start if (L, M) != start else None)
            M -= 1
    with mpmath.workdps(precision):
        c = [mpmath.mpc(x) for x in c]
        tol = mpmath.mpf(10) ** (-(precision * 2) // 3)
        while True:
            if M == 0:
                q, cond = [mpmath.mpc(1)], 1.0
                break
            A, b = _pade_system(c, L, M)
            A = mpmath.matrix(A)
            sv = mpmath.svd_c(A, compute_uv=False)
            smax, smin = max(abs(x) for x in sv), min(abs(x) for x in sv)
            if smax == 0 or smin / smax < tol:
                M -= 1
                continue
            cond = float(smax / smin)
            sol = mpmath.lu_solve(A, mpmath.matrix(b))
            q = [mpmath.mpc(1)] + [sol[i] for i in range(M)]
            break
        return PadeResult(_numerator(c, q, L), q, L, M, False, cond,
                          start if (L, M) != start else None)


def _poly_roots(coeffs, precision):
    """Roots of sum_i coeffs[i] x^i (trailing zeros trimmed)."""
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    if len(cs) <= 1:
        return []
    with mpmath.workdps(precision):
        cs = [mpmath.mpc(x) if not isinstance(x, Fraction) else mpmath.mpf(x.numerator) / x.denominator
              for x in cs]
        return list(mpmath.polyroots(cs[::-1], maxsteps=400, extraprec=4 * precision))


def pade_poles(r: PadeResult, precision: int = 40) -> list[tuple]:
    """(location, residue) for each root of the denominator."""
    out = []
    with mpmath.workdps(precision):
        to_mp = lambda x: mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpc(x)
        p = [to_mp(x) for x in r.numerator]
        q = [to_mp(x) for x in r.denominator]
        dq = [i * q[i] for i in range(1, len(q))]
        for z in _poly_roots(r.denominator, precision):
            num = sum(c * z ** i for i, c in enumerate(p))
            den = sum(c * z ** i for i, c in enumerate(dq))
            out.append((mpmath.mpc(z), num / den if den != 0 else mpmath.mpc(mpmath.inf)))
    return out


@dataclass
class BorelReport:
    poles: list  # (location, residue), sorted by modulus
    pade_degrees: tuple
    series_length: int
    candidates: dict = field(default_factory=dict)  # degree -> all poles

    def to_dict(self) -> dict:
        c = lambda z: [float(mpmath.re(z)), float(mpmath.im(z))]
        return {"poles": [{"loc": c(z), "residue": c(r)} for z, r in self.poles],
                "pade_degrees": list(self.pade_degrees), "series_length": self.series_length}


def borel_poles(s: FormalSeries, n_terms: int | None = None, precision: int = 40,
                drift: float = 0.01, levels: int = 3) -> BorelReport:
    """Stable poles of near-diagonal Pade approximants of the Borel transform.

    The largest diagonal [M/M] that fits is compared with [M-1/M-1] down to
    ``levels`` approximants; a pole is kept if every smaller approximant has a
    pole within relative distance ``drift``.
    """
    n = n_terms or len(s)
    if n < 8:
        raise ValueError("need at least 8 terms")
    b = borel_transform(FormalSeries(s.coeffs[:n], s.variable))
    M = (n - 1) // 2
    degs = [M - i for i in range(levels) if M - i >= 1]
    cands = {}
    for m in degs:
        cands[m] = pade_poles(pade(b, m, m, precision), precision)
    top = cands[degs[0]]
    stable = []
    for z, res in top:
        if abs(z) == 0:
            continue
        ok = all(any(abs(w - z) <= drift * abs(z) for w, _ in cands[m]) for m in degs[1:])
        if ok and mpmath.isfinite(abs(res)):
            stable.append((z, res))
    stable.sort(key=lambda t: abs(t[0]))
    return BorelReport(stable, (degs[0], degs[0]), n, cands)


# ---------------------------------------------------------------------------
# Stokes locations


@dataclass
class StokesMatch:
    pole: object
    omega: Fraction | None
    gap: float
    relative_gap: float
    matched: bool

    def to_dict(self) -> dict:
        return {"pole": [float(mpmath.re(self.pole)), float(mpmath.im(self.pole))],
                "omega": str(self.omega) if self.omega is not None else None,
                "gap": self.gap, "relative_gap": self.relative_gap, "matched": self.matched}


def _nearest_lift(d, target: float):
    """Representative d + n (n integer, nonzero result) closest to target."""
    base = d - math.floor(float(d))
    best = None
    for n in range(math.floor(target) - 2, math.floor(target) + 3):
        w = base + n
        if w == 0:
            continue
        if best is None or abs(float(w) - target) < abs(float(best) - target):
            best = w
    return best


def stokes_location_check(report: BorelReport, cs_values: Sequence, tol: float = 0.02) -> list[StokesMatch]:
    """Nearest Chern-Simons difference CS(B) - CS(A) (mod 1) for each pole.

    The difference is lifted to the integer translate closest to the pole;
    a match needs |pole - omega| <= tol |omega|.
    """
    cs = [Fraction(c) if not isinstance(c, float) else c for c in cs_values]
    diffs = {b - a for a in cs for b in cs if a != b}
    out = []
    for z, _ in report.poles:
        if not diffs:
            out.append(StokesMatch(z, None, math.inf, math.inf, False))
            continue
        best = None
        for d in diffs:
            w = _nearest_lift(d, float(mpmath.re(z)))
            gap = float(abs(z - float(w)))
            if best is None or gap < best[1]:
                best = (w, gap)
        w, gap = best
        rel = gap / abs(float(w))
        out.append(StokesMatch(z, w, gap, rel, rel <= tol))
    return out


def report_json(report: BorelReport, matches: Sequence[StokesMatch] = ()) -> str:
    d = report.to_dict()
    d["matches"] = [m.to_dict() for m in matches]
    return json.dumps(d, indent=1)


def to_instanton_variable(series_inv_k: Sequence) -> FormalSeries:
    """Rewrite sum a_n K^-n in x = i/(2 pi K): b_n = a_n (-2 pi i)^n.

    A sector exp(2 pi i K omega) then produces a Borel singularity at omega.
    """
    out = []
    for n, a in enumerate(series_inv_k):
        out.append(mpmath.mpc(a) * (-2j * mpmath.pi) ** n)
    return FormalSeries(tuple(out), "instanton")


def synthetic_series(kind: str, n: int = 20, omega=None) -> FormalSeries:
    """n! omega^-n style test series: ``factorial``, ``alternating`` or ``planted``."""
    if kind == "factorial":
        return FormalSeries(tuple(math.factorial(i) for i in range(n)))
    if kind == "alternating":
        return FormalSeries(tuple((-1) ** i * math.factorial(i) for i in range(n)))
    if kind == "planted":
        w = mpmath.mpc(omega if omega is not None else complex(0.3, 0.4))
        return FormalSeries(tuple(math.factorial(i) / w ** i for i in range(n)))
    raise ValueError(f"unknown synthetic series {kind!r}")
