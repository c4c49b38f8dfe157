"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the group ring Q[Z/N], i.e. as a length-N vector of
rational coefficients of 1, zeta, ..., zeta^(N-1) modulo zeta^N - 1.  This
presentation is not canonical (zeta_N satisfies Phi_N, not just x^N - 1), so
equality is decided by reducing the difference modulo the cyclotomic
polynomial.  Multiplication is a cyclic convolution of integer numerators,
done by Kronecker substitution into Python big integers.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

import mpmath

Rational = Union[int, Fraction]

DEFAULT_PRECISION = 30


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficient lists, lowest degree first)


def _poly_trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(num: Sequence, den: Sequence) -> tuple[list, list]:
    """Long division; exact over Z when ``den`` is monic, over Q otherwise."""
    num = list(num)
    den = _poly_trim(list(den))
    lead = den[-1]
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        if lead != 1:
            c = Fraction(c) / lead
        quot[i - dd] = c
        for j in range(dd + 1):
            num[i - dd + j] -= c * den[j]
    return _poly_trim(quot), _poly_trim(num[:dd] or [0])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Phi_n as an integer coefficient tuple, lowest degree first.

    Built by dividing x^n - 1 by Phi_d for every proper divisor d of n.
    """
    if n < 1:
        raise ValueError("cyclotomic polynomial needs n >= 1")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, cyclotomic_polynomial(d))
            assert rem == [0], (n, d)
    return tuple(int(c) for c in poly)


def euler_phi(n: int) -> int:
    return sum(1 for i in range(1, n + 1) if math.gcd(i, n) == 1)


def _reduce_mod_phi(nums: Sequence[int], n: int) -> list[int]:
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    r = list(nums)
    for i in range(len(r) - 1, deg - 1, -1):
        c = r[i]
        if c:
            base = i - deg
            for j in range(deg):
                if phi[j]:
                    r[base + j] -= c * phi[j]
            r[i] = 0
    return r[:deg]


# ---------------------------------------------------------------------------
# Kronecker-substitution cyclic convolution


def _pack(vals: Sequence[int], nbytes: int, half: int) -> int:
    raw = b"".join((v + half).to_bytes(nbytes, "little") for v in vals)
    bits = 8 * nbytes
    offset = half * (((1 << (bits * len(vals))) - 1) // ((1 << bits) - 1))
    return int.from_bytes(raw, "little") - offset


def _cyclic_convolve(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    na = [(i, v) for i, v in enumerate(a) if v]
    nb = [(i, v) for i, v in enumerate(b) if v]
    if not na or not nb:
        return [0] * n
    if len(na) * len(nb) <= 4 * n:
        out = [0] * n
        for i, x in na:
            for j, y in nb:
                out[(i + j) % n] += x * y
        return out
    bound = max(abs(v) for _, v in na) * max(abs(v) for _, v in nb) * min(len(na), len(nb))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    bits = 8 * nbytes
    half = 1 << (bits - 1)
    prod = _pack(a, nbytes, half) * _pack(b, nbytes, half)
    ndig = 2 * n - 1
    offset = half * (((1 << (bits * ndig)) - 1) // ((1 << bits) - 1))
    raw = (prod + offset).to_bytes(nbytes * ndig, "little")
    out = [0] * n
    for i in range(ndig):
        d = int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
        if d:
            out[i % n] += d
    return out


# ---------------------------------------------------------------------------


class Cyclotomic:
    """An element of Q(zeta_N) in group-ring form.

    ``Cyclotomic(N, coeffs)`` takes the N rational coefficients of
    zeta_N^0 .. zeta_N^(N-1).  Values are immutable.
    """

    __slots__ = ("order", "_nums", "_den", "_canon")

    def __init__(self, order: int, coeffs: Iterable[Rational]):
        coeffs = [Fraction(c) for c in coeffs]
        if order < 1:
            raise ValueError("order must be positive")
        if len(coeffs) != order:
            raise ValueError(f"expected {order} coefficients, got {len(coeffs)}")
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        nums = [c.numerator * (den // c.denominator) for c in coeffs]
        self._set(order, nums, den)

    def _set(self, order: int, nums: list[int], den: int) -> None:
        g = math.gcd(den, *nums) if any(nums) else den
        if g > 1:
            nums = [v // g for v in nums]
            den //= g
        if not any(nums):
            den = 1
        self.order = order
        self._nums = tuple(nums)
        self._den = den
        self._canon = None

    @classmethod
    def _raw(cls, order: int, nums: list[int], den: int = 1) -> "Cyclotomic":
        obj = cls.__new__(cls)
        obj._set(order, nums, den)
        return obj

    # -- constructors --------------------------------------------------------

    @classmethod
    def rational(cls, value: Rational, order: int = 1) -> "Cyclotomic":
        value = Fraction(value)
        nums = [0] * order
        nums[0] = value.numerator
        return cls._raw(order, nums, value.denominator)

    @classmethod
    def root(cls, order: int, power: int = 1) -> "Cyclotomic":
        nums = [0] * order
        nums[power % order] = 1
        return cls._raw(order, nums)

    @classmethod
    def from_powers(cls, order: int, terms: Iterable[tuple[int, Rational]]) -> "Cyclotomic":
        """Sum of ``c * zeta^e`` over ``(e, c)`` pairs."""
        acc = [Fraction(0)] * order
        for e, c in terms:
            acc[e % order] += c
        return cls(order, acc)

    # -- views ---------------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self._den) for v in self._nums)

    def __repr__(self) -> str:
        return f"Cyclotomic({self.order}, {self.to_str()!r})"

    def to_str(self) -> str:
        """Readable zeta-polynomial, e.g. ``'1 + 2*z^3 - 1/2*z^5'`` (z = zeta_N)."""
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mono and abs(c) == 1:
                term = mono
            elif mono:
                term = f"{abs(c)}*{mono}"
            else:
                term = str(abs(c))
            sign = "-" if c < 0 else "+"
            parts.append((sign, term))
        if not parts:
            return "0"
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, term in parts[1:]:
            s += f" {sign} {term}"
        return s

    @classmethod
    def from_str(cls, order: int, text: str) -> "Cyclotomic":
        """Inverse of :meth:`to_str`."""
        s = text.replace(" ", "")
        if s in ("", "0"):
            return cls.rational(0, order)
        if s[0] not in "+-":
            s = "+" + s
        coeffs = [Fraction(0)] * order
        for m in re.finditer(r"([+-])([^+-]+)", s):
            sign = -1 if m.group(1) == "-" else 1
            body = m.group(2)
            if "z" in body:
                c, _, mono = body.rpartition("*") if "*" in body else ("1", "", body)
                power = int(mono[2:]) if mono.startswith("z^") else 1
            else:
                c, power = body, 0
            coeffs[power % order] += sign * Fraction(c)
        return cls(order, coeffs)

    def is_zero(self) -> bool:
        return not any(self.canonical())

    # -- promotion -----------------------------------------------------------

    def promote(self, order: int) -> "Cyclotomic":
        """Same field element viewed in Q(zeta_order); ``order`` must be a multiple."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot promote order {self.order} to {order}")
        step = order // self.order
        nums = [0] * order
        for i, v in enumerate(self._nums):
            nums[i * step] = v
        return Cyclotomic._raw(order, nums, self._den)

    def _common(self, other) -> tuple["Cyclotomic", "Cyclotomic"]:
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other, self.order)
        n = self.order * other.order // math.gcd(self.order, other.order)
        return self.promote(n), other.promote(n)

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        a, b = self._common(other)
        d = a._den * b._den // math.gcd(a._den, b._den)
        fa, fb = d // a._den, d // b._den
        return Cyclotomic._raw(a.order, [x * fa + y * fb for x, y in zip(a._nums, b._nums)], d)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.order, [-v for v in self._nums], self._den)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclotomic) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Cyclotomic):
            other = Fraction(other)
            return Cyclotomic._raw(self.order, [v * other.numerator for v in self._nums],
                                   self._den * other.denominator)
        a, b = self._common(other)
        nums = _cyclic_convolve(a._nums, b._nums, a.order)
        return Cyclotomic._raw(a.order, nums, a._den * b._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Cyclotomic):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic.rational(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugate (zeta -> zeta^-1)."""
        n = self.order
        nums = [0] * n
        for i, v in enumerate(self._nums):
            nums[(-i) % n] = v
        return Cyclotomic._raw(n, nums, self._den)

    def galois(self, j: int) -> "Cyclotomic":
        """Image under zeta -> zeta^j, j coprime to the order."""
        n = self.order
        if math.gcd(j, n) != 1:
            raise ValueError("Galois exponent must be a unit mod N")
        nums = [0] * n
        for i, v in enumerate(self._nums):
            nums[(i * j) % n] += v
        return Cyclotomic._raw(n, nums, self._den)

    # -- canonical form, equality, inverse -----------------------------------

    def canonical(self) -> tuple[Fraction, ...]:
        """Coefficients in the power basis of Q[x]/Phi_N (length phi(N))."""
        if self._canon is None:
            red = _reduce_mod_phi(self._nums, self.order)
            self._canon = tuple(Fraction(v, self._den) for v in red)
        return self._canon

    def reduced(self) -> "Cyclotomic":
        """Same number, written with powers below phi(N) only."""
        c = self.canonical()
        return Cyclotomic(self.order, list(c) + [0] * (self.order - len(c)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Cyclotomic, int, Fraction)):
            return NotImplemented
        a, b = self._common(other)
        return not any(x for x in (a - b).canonical())

    def __hash__(self):
        # equal values may live at different orders; only rational values
        # have an order-independent key cheap enough to hash on
        if self.is_rational():
            return hash(self.canonical()[0])
        return hash("cyclotomic")

    def is_rational(self) -> bool:
        c = self.canonical()
        return not any(c[1:])

    def rational_value(self) -> Fraction:
        c = self.canonical()
        if any(c[1:]):
            raise ValueError("element is not rational")
        return c[0]

    def inverse(self) -> "Cyclotomic":
        """Exact inverse via the extended Euclidean algorithm against Phi_N."""
        n = self.order
        a = [Fraction(x) for x in self.canonical()]
        if not any(a):
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        phi = [Fraction(c) for c in cyclotomic_polynomial(n)]
        # invariant: s*a == r (mod phi)
        r0, r1 = phi, _poly_trim(a[:])
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1 or r1[0] != 0:
            q, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            qs = _poly_mul(q, s1)
            s0, s1 = s1, _poly_sub(s0, qs)
        # r0 is a nonzero constant
        c = r0[0]
        inv = [x / c for x in s0]
        _, inv = _poly_divmod(inv, phi)
        coeffs = [Fraction(0)] * n
        for i, v in enumerate(inv):
            coeffs[i] = Fraction(v)
        return Cyclotomic(n, coeffs)

    # -- embedding -----------------------------------------------------------

    def evaluate(self, precision: int = DEFAULT_PRECISION) -> mpmath.mpc:
        """Value at zeta_N = exp(2 pi i / N) computed with ``precision`` digits."""
        with mpmath.workdps(precision + 5):
            roots = _root_table(self.order, precision + 5)
            acc = mpmath.mpc(0)
            for v, z in zip(self._nums, roots):
                if v:
                    acc += v * z
            acc = acc / self._den
            return acc

    def __complex__(self) -> complex:
        return complex(self.evaluate(17))


@lru_cache(maxsize=256)
def _root_table(n: int, dps: int) -> tuple:
    with mpmath.workdps(dps):
        return tuple(mpmath.expjpi(mpmath.mpf(2 * i) / n) for i in range(n))


def _poly_mul(a: Sequence, b: Sequence) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _poly_trim(out)


def _poly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _poly_trim(out)


# ---------------------------------------------------------------------------
# functional surface


def cyclo_root(n: int, power: int) -> Cyclotomic:
    """zeta_n ** power."""
    if n < 1:
        raise ValueError("order must be positive")
    return Cyclotomic.root(n, power)


def cyclo_arith(a: Cyclotomic, b: Cyclotomic, op: str) -> Cyclotomic:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}; expected add, sub or mul")


def cyclo_eq(a: Cyclotomic, b: Cyclotomic) -> bool:
    return a == b


def cyclo_eval(a: Cyclotomic, precision: int = DEFAULT_PRECISION) -> mpmath.mpc:
    if precision < 15:
        raise ValueError("precision must be at least 15 digits")
    return a.evaluate(precision)


def q_integer(n: int, order: int, qpow: int = 2) -> Cyclotomic:
    """Quantum integer [n] for q = zeta_order^qpow: sum_l q^(n-1-2l).

    Negative n gives -[|n|]; [0] = 0.
    """
    if n == 0:
        return Cyclotomic.rational(0, order)
    sign = 1 if n > 0 else -1
    m = abs(n)
    nums = [0] * order
    for l in range(m):
        nums[(qpow * (m - 1 - 2 * l)) % order] += sign
    return Cyclotomic._raw(order, nums)
