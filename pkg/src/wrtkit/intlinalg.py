"""Exact linear algebra on small integer matrices (lists of lists of int)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(cols)]
            for i in range(len(a))]


def is_symmetric(m: Sequence[Sequence[int]]) -> bool:
    n = len(m)
    return all(len(row) == n for row in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i))


def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inertia(m: Sequence[Sequence[int]]) -> tuple[int, int, int]:
    """(n_plus, n_minus, n_zero) of a symmetric rational matrix.

    Symmetric congruence diagonalisation over Q; by Sylvester's law the signs
    of the resulting diagonal are the eigenvalue signs.
    """
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    plus = minus = zero = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j] != 0), None)
            if pair is None:
                zero += len(active)
                break
            i, j = pair
            # row/col i += row/col j gives a[i][i] = 2 a[i][j] != 0
            for t in range(n):
                a[i][t] += a[j][t]
            for t in range(n):
                a[t][i] += a[t][j]
            piv = i
        p = a[piv][piv]
        plus += p > 0
        minus += p < 0
        active.remove(piv)
        for i in active:
            f = a[i][piv] / p
            if f:
                for t in active:
                    a[i][t] -= f * a[piv][t]
        for i in active:
            a[i][piv] = a[piv][i] = Fraction(0)
    return plus, minus, zero


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, list[int], Matrix]:
    """Smith normal form of a square integer matrix.

    Returns ``(U, diag, V)`` with U, V unimodular and ``U @ m @ V`` diagonal
    with nonnegative entries ``diag`` satisfying d_i | d_{i+1} (zeros last).
    """
    n = len(m)
    a = [list(map(int, row)) for row in m]
    u = identity(n)
    v = identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row dst += f * row src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    for t in range(n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, n):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # enforce divisibility of the remaining block
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, n)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, [a[i][i] for i in range(n)], v


def rational_inverse(m: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def unimodular_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    inv = rational_inverse(m)
    out = [[int(x) for x in row] for row in inv]
    assert all(x.denominator == 1 for row in inv for x in row)
    return out
