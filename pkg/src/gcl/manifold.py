"""Model manifolds, trigonometric function elements, and unit monomials.

Functions on the m-torus are finite Fourier sums:  a frequency vector
k in Z^m stands for e_k(x) = exp(2*pi*i k.x), and coefficients live in
Q(zeta_N).  The point is the m = 0 case (the only frequency is ()).

A `Unit` is an invertible monomial zeta^j * e_k; these are the values the
gerbe multiplier takes, and they are the only elements whose logarithmic
derivative is needed.
"""

from __future__ import annotations

from .cyclotomic import Cyc


class ModelManifold:
    """A point or a flat torus T^m, together with the cyclotomic order N."""

    __slots__ = ("kind", "dim", "order")

    def __init__(self, kind: str, dim: int, order: int):
        if kind not in ("point", "torus"):
            raise ValueError(f"unknown manifold kind {kind!r}")
        if kind == "point" and dim != 0:
            raise ValueError("a point has dimension 0")
        if kind == "torus" and dim < 1:
            raise ValueError("torus dimension must be >= 1")
        if order < 1:
            raise ValueError("cyclotomic order must be >= 1")
        self.kind = kind
        self.dim = dim
        self.order = order

    @staticmethod
    def point(order: int = 1) -> "ModelManifold":
        return ModelManifold("point", 0, order)

    @staticmethod
    def torus(dim: int, order: int) -> "ModelManifold":
        return ModelManifold("torus", dim, order)

    def zero_freq(self) -> tuple[int, ...]:
        return (0,) * self.dim

    def __eq__(self, other):
        return (
            isinstance(other, ModelManifold)
            and (self.kind, self.dim, self.order) == (other.kind, other.dim, other.order)
        )

    def __hash__(self):
        return hash((self.kind, self.dim, self.order))

    def __repr__(self):
        if self.kind == "point":
            return f"point(N={self.order})"
        return f"T^{self.dim}(N={self.order})"


class Unit:
    """An invertible monomial zeta^j * e_freq."""

    __slots__ = ("zeta_exp", "freq", "order")

    def __init__(self, order: int, zeta_exp: int, freq: tuple[int, ...]):
        self.order = order
        self.zeta_exp = zeta_exp % order
        self.freq = tuple(int(f) for f in freq)

    @staticmethod
    def one(order: int, dim: int) -> "Unit":
        return Unit(order, 0, (0,) * dim)

    def is_one(self) -> bool:
        return self.zeta_exp == 0 and all(f == 0 for f in self.freq)

    def __mul__(self, other: "Unit") -> "Unit":
        if self.order != other.order:
            raise ValueError("mixed cyclotomic orders")
        return Unit(
            self.order,
            self.zeta_exp + other.zeta_exp,
            tuple(a + b for a, b in zip(self.freq, other.freq)),
        )

    def inv(self) -> "Unit":
        return Unit(self.order, -self.zeta_exp, tuple(-f for f in self.freq))

    def act(self, group, g: int) -> "Unit":
        """Pullback along x -> x.g (see GroupData.act_freq)."""
        shift, new_freq = group.act_freq(g, self.freq)
        return Unit(self.order, self.zeta_exp + shift, new_freq)

    def coeff(self) -> Cyc:
        return Cyc.zeta(self.order, self.zeta_exp)

    def __eq__(self, other):
        return (
            isinstance(other, Unit)
            and (self.order, self.zeta_exp, self.freq) == (other.order, other.zeta_exp, other.freq)
        )

    def __hash__(self):
        return hash((self.order, self.zeta_exp, self.freq))

    def __repr__(self):
        return f"zeta^{self.zeta_exp}*e{self.freq}"
