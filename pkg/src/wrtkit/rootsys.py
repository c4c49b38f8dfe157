"""Type A_n root data, Weyl groups, alcove weights and the Kac-Peterson S-matrix.

Weights live in the ambient space R^(n+1) on the hyperplane sum(x) = 0, with
the standard dot product, so roots are e_i - e_j and the highest root has
squared length 2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .cyclo import DEFAULT_PRECISION

Vector = tuple[Fraction, ...]


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _scale(c, a):
    return tuple(c * x for x in a)


@dataclass(frozen=True)
class RootSystem:
    rank: int
    simple_roots: tuple[Vector, ...]
    positive_roots: tuple[Vector, ...]
    fundamental_weights: tuple[Vector, ...]
    rho: Vector
    dual_coxeter: int
    highest_root: Vector

    def inner_product(self, a: Sequence, b: Sequence) -> Fraction:
        return Fraction(_dot(a, b))

    def weight(self, dynkin_labels: Sequence[int]) -> Vector:
        """Weight with the given coordinates in the fundamental-weight basis."""
        out = tuple(Fraction(0) for _ in range(self.rank + 1))
        for a, w in zip(dynkin_labels, self.fundamental_weights):
            out = _add(out, _scale(a, w))
        return out

    def dynkin_labels(self, weight: Sequence) -> tuple[int, ...]:
        return tuple(int(self.inner_product(weight, a)) for a in self.simple_roots)


def root_system_a(n: int) -> RootSystem:
    """A_n data for 1 <= n <= 3."""
    if not 1 <= n <= 3:
        raise ValueError(f"type A_n supported for 1 <= n <= 3, got n={n}")
    dim = n + 1

    def e(i):
        return tuple(Fraction(int(t == i)) for t in range(dim))

    simple = tuple(_add(e(i), _scale(-1, e(i + 1))) for i in range(n))
    positive = tuple(_add(e(i), _scale(-1, e(j))) for i in range(dim) for j in range(i + 1, dim))
    fund = []
    for i in range(1, n + 1):
        w = tuple(Fraction(int(t < i)) - Fraction(i, dim) for t in range(dim))
        fund.append(w)
    rho = tuple(sum((r[t] for r in positive), Fraction(0)) / 2 for t in range(dim))
    theta = _add(e(0), _scale(-1, e(n)))
    return RootSystem(rank=n, simple_roots=simple, positive_roots=positive,
                      fundamental_weights=tuple(fund), rho=rho, dual_coxeter=n + 1,
                      highest_root=theta)


@dataclass(frozen=True)
class WeylGroup:
    """Elements as (integer matrix on the ambient space, length) pairs."""

    elements: tuple[tuple[tuple[tuple[int, ...], ...], int], ...]

    def __len__(self) -> int:
        return len(self.elements)


def _apply(mat, v):
    return tuple(sum(mat[i][j] * v[j] for j in range(len(v))) for i in range(len(mat)))


def weyl_group(rs: RootSystem) -> WeylGroup:
    """Breadth-first closure of the simple reflections.

    Lengths count the positive roots sent to negative roots.
    """
    dim = rs.rank + 1

    def reflection(alpha):
        # s(v) = v - <v, alpha> alpha with <alpha, alpha> = 2
        return tuple(tuple(int(i == j) - int(alpha[i] * alpha[j]) for j in range(dim))
                     for i in range(dim))

    gens = [reflection(a) for a in rs.simple_roots]
    ident = tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))
    seen = {ident}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                ws = tuple(tuple(sum(w[i][t] * s[t][j] for t in range(dim)) for j in range(dim))
                           for i in range(dim))
                if ws not in seen:
                    seen.add(ws)
                    order.append(ws)
                    nxt.append(ws)
        frontier = nxt
    pos = set(rs.positive_roots)

    def length(w):
        return sum(1 for a in rs.positive_roots if _apply(w, a) not in pos)

    return WeylGroup(tuple((w, length(w)) for w in order))


def alcove_weights(rs: RootSystem, k: int) -> list[Vector]:
    """Dominant integral weights with <lambda, theta> <= k.

    Ordered by level <lambda, theta>, then by Dynkin labels in descending
    lexicographic order; index 0 is the zero weight.
    """
    found = []
    for labels in itertools.product(range(k + 1), repeat=rs.rank):
        lam = rs.weight(labels)
        if rs.inner_product(lam, rs.highest_root) <= k:
            found.append(labels)
    found.sort(key=lambda a: (sum(a), tuple(-x for x in a)))
    return [rs.weight(a) for a in found]


def kac_peterson_s(rs: RootSystem, k: int, precision: int = DEFAULT_PRECISION,
                   sine_denominator: bool = False) -> mpmath.matrix:
    """Kac-Peterson S-matrix indexed by ``alcove_weights(rs, k)``.

    The prefactor is i^|Delta_+| / sqrt(|P/Q| (k+h)^rank), which makes the
    matrix unitary.  ``sine_denominator=True`` instead divides the Weyl sum
    by prod_alpha 2 sin(pi <alpha, rho>/(k+h)) without the |P/Q| factor; that
    variant differs by a real, level-dependent constant and is not unitary.
    """
    if k < 1:
        raise ValueError("level must be positive")
    weights = alcove_weights(rs, k)
    if len(weights) > 200:
        raise ValueError("alcove too large (more than 200 weights)")
    kh = k + rs.dual_coxeter
    W = weyl_group(rs)
    shifted = [_add(w, rs.rho) for w in weights]
    # <w(l+rho), m+rho> has denominator dividing rank+1
    den = rs.rank + 1
    order = den * kh
    with mpmath.workdps(precision + 5):
        roots = [mpmath.expjpi(mpmath.mpf(-2 * t) / order) for t in range(order)]
        images = [[(_apply(w, lr), (-1) ** ell) for w, ell in W.elements] for lr in shifted]
        if sine_denominator:
            denom = mpmath.mpf(1)
            for a in rs.positive_roots:
                denom *= 2 * mpmath.sin(mpmath.pi * _dot(a, rs.rho) / kh)
        else:
            # |P/Q| = rank + 1 for A_n
            denom = mpmath.sqrt(rs.rank + 1)
        pref = mpmath.mpc(0, 1) ** len(rs.positive_roots) / mpmath.mpf(kh) ** (mpmath.mpf(rs.rank) / 2)
        size = len(weights)
        S = mpmath.matrix(size, size)
        for i in range(size):
            for j in range(i, size):
                acc = mpmath.mpc(0)
                for img, sgn in images[i]:
                    x = _dot(img, shifted[j]) * den
                    assert x.denominator == 1
                    acc += sgn * roots[int(x) % order]
                S[i, j] = S[j, i] = pref * acc / denom
    return S
