"""Exact arithmetic in the cyclotomic field Q(zeta_N).

A scalar is a rational linear combination of powers of the primitive N-th
root of unity zeta_N = exp(2*pi*i/N).  Internally coefficients live on the
power basis 1, zeta, ..., zeta^(phi(N)-1) and are reduced modulo the N-th
cyclotomic polynomial Phi_N, so equality (in particular: equality to zero)
is decidable coefficient-wise.  All coefficients are `fractions.Fraction`;
nothing here ever touches floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Exact division of integer polynomials (coefficient lists, low degree first)."""
    num = list(num)
    quot = [0] * (len(num) - len(den) + 1)
    for shift in range(len(num) - len(den), -1, -1):
        coeff, rem = divmod(num[shift + len(den) - 1], den[-1])
        if rem:
            raise ArithmeticError("non-exact integer polynomial division")
        quot[shift] = coeff
        for i, d in enumerate(den):
            num[shift + i] -= coeff * d
    while num and num[-1] == 0:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, low degree first (integer, monic)."""
    if n < 1:
        raise ValueError("cyclotomic order must be >= 1")
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            quot, rem = _poly_divmod_int(num, list(cyclotomic_polynomial(d)))
            if rem:
                raise ArithmeticError("cyclotomic recursion left a remainder")
            num = quot
    return tuple(num)


@lru_cache(maxsize=None)
def _reduction_rows(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Row j expresses zeta_n^j (0 <= j < n) on the power basis of length phi(n)."""
    phi_poly = cyclotomic_polynomial(n)
    deg = len(phi_poly) - 1
    rows: list[tuple[Fraction, ...]] = []
    for j in range(n):
        if j < deg:
            row = [Fraction(0)] * deg
            row[j] = Fraction(1)
            rows.append(tuple(row))
        else:
            # zeta^j = -(sum_{i<deg} phi_i * zeta^{j-deg+i}) since Phi_n(zeta) = 0
            acc = [Fraction(0)] * deg
            for i in range(deg):
                c = phi_poly[i]
                if c:
                    src = rows[j - deg + i]
                    for k in range(deg):
                        acc[k] -= c * src[k]
            rows.append(tuple(acc))
    return tuple(rows)


def degree(n: int) -> int:
    """phi(n), the degree of the power basis."""
    return len(cyclotomic_polynomial(n)) - 1


class Cyc:
    """An element of Q(zeta_n), immutable."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs):
        deg = degree(n)
        c = list(coeffs)
        if len(c) != deg:
            raise ValueError(f"expected {deg} coefficients for order {n}, got {len(c)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "c", tuple(Fraction(x) for x in c))

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("Cyc is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(n: int) -> "Cyc":
        return Cyc(n, [0] * degree(n))

    @staticmethod
    def rational(n: int, q) -> "Cyc":
        c = [Fraction(0)] * degree(n)
        c[0] = Fraction(q)
        return Cyc(n, c)

    @staticmethod
    def one(n: int) -> "Cyc":
        return Cyc.rational(n, 1)

    @staticmethod
    def zeta(n: int, k: int = 1) -> "Cyc":
        row = _reduction_rows(n)[k % n]
        return Cyc(n, row)

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "Cyc"):
        if self.n != other.n:
            raise ValueError(f"mixed cyclotomic orders {self.n} and {other.n}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyc.rational(self.n, other)
        self._check(other)
        return Cyc(self.n, [a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.n, [-a for a in self.c])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyc.rational(self.n, other)
        self._check(other)
        return Cyc(self.n, [a - b for a, b in zip(self.c, other.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc(self.n, [a * other for a in self.c])
        self._check(other)
        deg = len(self.c)
        rows = _reduction_rows(self.n)
        acc = [Fraction(0)] * deg
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j, b in enumerate(other.c):
                if not b:
                    continue
                row = rows[(i + j) % self.n]
                ab = a * b
                for k in range(deg):
                    if row[k]:
                        acc[k] += ab * row[k]
        return Cyc(self.n, acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError("division of cyclotomic scalar by zero")
            return Cyc(self.n, [a / q for a in self.c])
        raise TypeError("only division by rationals is supported")

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.c)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyc.rational(self.n, other)
        if not isinstance(other, Cyc):
            return NotImplemented
        return self.n == other.n and self.c == other.c

    def __hash__(self):
        return hash((self.n, self.c))

    def rational_part(self) -> Fraction:
        """The coefficient of zeta^0 on the power basis."""
        return self.c[0]

    def as_rational(self) -> Fraction:
        """Value as a rational; raises if the element is not rational."""
        if any(self.c[1:]):
            raise ValueError(f"{self!r} is not rational")
        return self.c[0]

    # -- serialization -------------------------------------------------------

    def to_vector(self) -> tuple[list[int], int]:
        """Length-N integer coefficient vector on 1, zeta, ..., zeta^{N-1} plus denominator."""
        den = 1
        for a in self.c:
            den = den * a.denominator // math.gcd(den, a.denominator)
        vec = [int(a * den) for a in self.c] + [0] * (self.n - len(self.c))
        return vec, den

    @staticmethod
    def from_vector(n: int, vec, den: int = 1) -> "Cyc":
        if len(vec) > n:
            raise ValueError("coefficient vector longer than the cyclotomic order")
        rows = _reduction_rows(n)
        deg = degree(n)
        acc = [Fraction(0)] * deg
        for j, v in enumerate(vec):
            if v:
                q = Fraction(v, den)
                row = rows[j % n]
                for k in range(deg):
                    if row[k]:
                        acc[k] += q * row[k]
        return Cyc(n, acc)

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, a in enumerate(self.c):
            if a == 0:
                continue
            if k == 0:
                parts.append(str(a))
            elif k == 1:
                parts.append(f"{a}*z" if a != 1 else "z")
            else:
                parts.append(f"{a}*z^{k}" if a != 1 else f"z^{k}")
        return " + ".join(parts)
