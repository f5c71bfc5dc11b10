"""Independent slow-path cyclotomic arithmetic used only by the tests.

Reduction here is by fresh synthetic division against sympy's cyclotomic
polynomial on every multiply, sharing no code with the package.
"""

from fractions import Fraction

from sympy import Poly, Symbol, cyclotomic_poly

_x = Symbol("x")


def phi_coeffs(n: int) -> list:
    """Coefficients of the n-th cyclotomic polynomial, low degree first."""
    return [int(c) for c in reversed(Poly(cyclotomic_poly(n, _x), _x).all_coeffs())]


def reduce_poly(coeffs: list, n: int) -> list:
    """Remainder of a Fraction polynomial (low first) modulo Phi_n."""
    phi = phi_coeffs(n)
    deg = len(phi) - 1
    work = [Fraction(c) for c in coeffs]
    while len(work) > deg:
        lead = work[-1]
        if lead:
            shift = len(work) - 1 - deg
            for i, p in enumerate(phi):
                work[shift + i] -= lead * p
        work.pop()
    while len(work) < deg:
        work.append(Fraction(0))
    return work


def mul(a: list, b: list, n: int) -> list:
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if bj:
                prod[i + j] += ai * bj
    return reduce_poly(prod, n)


def add(a: list, b: list) -> list:
    return [x + y for x, y in zip(a, b)]
