"""Twisted convolution sections and cyclic cochain calculus.

Two argument algebras feed the cochain machinery:

* endomorphism sections (EndMatrix with function entries) carrying the
  left group action, and
* the twisted convolution algebra of the translation groupoid, whose
  elements are finitely supported maps g -> function with product
  (a * b)_g = sum_{g1 g2 = g} lambda(g1, g2) . a_{g1} . (b_{g2})^{g1}.

Cochains are evaluators, not stored tensors: an object wraps a function
of (a0~, a1, .., an) -- the zeroth slot unitized -- returning a Laurent
polynomial in the periodicity variable u, and a single object carries
every arity at once (the argument count selects the component).  All
operators here -- the Hochschild and cyclic boundaries b and B, the
group coboundaries, the contracting homotopy h built on the chain map
gamma, and the comparison morphisms psi0 / psi_half / psi1 / psi2 --
wrap evaluators in new evaluators, so identities are checked pointwise
on seeded samples, with exact equality per sample.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .cyclotomic import Cyc
from .endo import EndMatrix
from .forms import Form


class ULaurent:
    """A Laurent polynomial in u with cyclotomic coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: dict | None = None):
        self.order = order
        self.coeffs = {}
        if coeffs:
            for power, c in coeffs.items():
                self._add(power, c)

    def _add(self, power: int, c):
        if not isinstance(c, Cyc):
            c = Cyc.rational(self.order, c)
        if power in self.coeffs:
            c = self.coeffs[power] + c
        if c.is_zero():
            self.coeffs.pop(power, None)
        else:
            self.coeffs[power] = c

    @staticmethod
    def zero(order: int) -> "ULaurent":
        return ULaurent(order)

    @staticmethod
    def of(order: int, value, power: int = 0) -> "ULaurent":
        return ULaurent(order, {power: value})

    def coeff(self, power: int) -> Cyc:
        return self.coeffs.get(power, Cyc.zero(self.order))

    def powers(self):
        return sorted(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other: "ULaurent") -> "ULaurent":
        out = ULaurent(self.order, self.coeffs)
        for power, c in other.coeffs.items():
            out._add(power, c)
        return out

    def __neg__(self) -> "ULaurent":
        out = ULaurent(self.order)
        out.coeffs = {p: -c for p, c in self.coeffs.items()}
        return out

    def __sub__(self, other: "ULaurent") -> "ULaurent":
        return self + (-other)

    def scale(self, c) -> "ULaurent":
        out = ULaurent(self.order)
        for power, coeff in self.coeffs.items():
            out._add(power, coeff * c)
        return out

    def u_shift(self, k: int) -> "ULaurent":
        out = ULaurent(self.order)
        out.coeffs = {p + k: c for p, c in self.coeffs.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, ULaurent):
            out = ULaurent(self.order)
            for p, c in self.coeffs.items():
                for q, d in other.coeffs.items():
                    out._add(p + q, c * d)
            return out
        return self.scale(other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ULaurent):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for p in self.powers():
            c = self.coeffs[p]
            if p == 0:
                bits.append(f"({c!r})")
            else:
                bits.append(f"({c!r})*u^{p}")
        return " + ".join(bits)


def _apply_unit(datum, unit, form: Form) -> Form:
    """Multiply a form by the invertible monomial zeta^j e_k."""
    out = form.scale(unit.coeff())
    if any(unit.freq):
        out = Form.e(datum.manifold, form.level, unit.freq) * out
    return out


class ConvSection:
    """A finitely supported section of the groupoid algebra: g -> function.

    Each part is a scalar function on the base; the product is the
    multiplier-twisted convolution

        (a * b)_g = sum_{g1 g2 = g} lambda(g1, g2) . a_{g1} . (b_{g2})^{g1}

    with the multiplier unit acting as a root of unity times a character.
    """

    __slots__ = ("datum", "parts")

    def __init__(self, datum, parts: dict | None = None):
        self.datum = datum
        self.parts = {}
        if parts:
            for g, fn in parts.items():
                self._add_part(g, fn)

    def _add_part(self, g: int, fn: Form):
        if fn.manifold != self.datum.manifold or fn.level != 0:
            raise ValueError("part lives on the wrong space")
        if fn.bidegrees() - {(0, 0)}:
            raise ValueError("convolution parts must be functions")
        if g in self.parts:
            fn = self.parts[g] + fn
        if fn.is_zero():
            self.parts.pop(g, None)
        else:
            self.parts[g] = fn

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(datum) -> "ConvSection":
        return ConvSection(datum)

    @staticmethod
    def delta(datum, g: int, fn: Form | None = None) -> "ConvSection":
        if fn is None:
            fn = Form.one(datum.manifold, 0)
        return ConvSection(datum, {g: fn})

    @staticmethod
    def unit(datum) -> "ConvSection":
        return ConvSection.delta(datum, datum.group.identity)

    # -- linear structure ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.parts

    def __bool__(self):
        return bool(self.parts)

    def __eq__(self, other):
        if not isinstance(other, ConvSection):
            return NotImplemented
        return self.datum is other.datum and self.parts == other.parts

    def __add__(self, other: "ConvSection") -> "ConvSection":
        out = ConvSection(self.datum, self.parts)
        for g, fn in other.parts.items():
            out._add_part(g, fn)
        return out

    def __neg__(self) -> "ConvSection":
        out = ConvSection(self.datum)
        out.parts = {g: -fn for g, fn in self.parts.items()}
        return out

    def __sub__(self, other: "ConvSection") -> "ConvSection":
        return self + (-other)

    def scale(self, c) -> "ConvSection":
        out = ConvSection(self.datum)
        for g, fn in self.parts.items():
            scaled = fn.scale(c)
            if not scaled.is_zero():
                out.parts[g] = scaled
        return out

    # -- twisted convolution ---------------------------------------------------

    def __mul__(self, other):
        if not isinstance(other, ConvSection):
            return NotImplemented
        grp = self.datum.group
        out = ConvSection(self.datum)
        for g1, f1 in self.parts.items():
            for g2, f2 in other.parts.items():
                twisted = f1 * f2.act_group(grp, g1)
                out._add_part(
                    grp.mul(g1, g2),
                    _apply_unit(self.datum, self.datum.lam[(g1, g2)], twisted),
                )
        return out

    def __repr__(self):
        if not self.parts:
            return "ConvSection(0)"
        labels = self.datum.group.labels
        bits = [f"{labels[g]}: {fn!r}" for g, fn in sorted(self.parts.items())]
        return "ConvSection{" + "; ".join(bits) + "}"


class Unitized:
    """An element (a, s) of the unitized algebra: a plus s times the formal unit."""

    __slots__ = ("elem", "scalar")

    def __init__(self, elem, scalar=0):
        self.elem = elem
        if not isinstance(scalar, Cyc):
            scalar = Cyc.rational(elem.datum.manifold.order, scalar)
        self.scalar = scalar

    def internal(self, unit):
        """Trade the formal unit for the algebra's own: a + s . 1."""
        if self.scalar.is_zero():
            return self.elem
        return self.elem + unit.scale(self.scalar)

    def __mul__(self, other):
        if isinstance(other, Unitized):
            prod = (
                self.elem * other.elem
                + other.elem.scale(self.scalar)
                + self.elem.scale(other.scalar)
            )
            return Unitized(prod, self.scalar * other.scalar)
        return Unitized(self.elem * other + other.scale(self.scalar), 0)

    def __rmul__(self, other):
        return Unitized(other * self.elem + other.scale(self.scalar), 0)

    def __repr__(self):
        return f"Unitized({self.elem!r}, {self.scalar!r})"


# -- argument algebras -------------------------------------------------------------


class EndAlgebra:
    """Endomorphism sections as a cochain argument domain."""

    __slots__ = ("datum",)

    def __init__(self, datum):
        self.datum = datum

    @property
    def order(self) -> int:
        return self.datum.manifold.order

    @property
    def group(self):
        return self.datum.group

    def unit(self) -> EndMatrix:
        return EndMatrix.identity(self.datum, 0)

    def zero(self) -> EndMatrix:
        return EndMatrix.zero(self.datum, 0)

    def act(self, g: int, a: EndMatrix) -> EndMatrix:
        return a.act(g)


class ConvAlgebra:
    """Twisted convolution sections as a cochain argument domain.

    The group does not act here; cochain operators needing an action
    (group coboundaries, psi0/psi1) live on the endomorphism side.
    """

    __slots__ = ("datum",)

    def __init__(self, datum):
        self.datum = datum

    @property
    def order(self) -> int:
        return self.datum.manifold.order

    @property
    def group(self):
        return self.datum.group

    def unit(self) -> ConvSection:
        return ConvSection.unit(self.datum)

    def zero(self) -> ConvSection:
        return ConvSection.zero(self.datum)


def mean_coefficient(form: Form) -> Cyc:
    """The constant Fourier coefficient of a function."""
    zero_freq = form.manifold.zero_freq()
    out = Cyc.zero(form.manifold.order)
    for (freq, texp, dxs, dts), coeff in form.terms.items():
        if freq == zero_freq and not dxs and not dts and not any(texp):
            out = out + coeff
    return out


def normalize_section(a: EndMatrix) -> EndMatrix:
    """Remove the constant part of each diagonal entry.

    A local projection q with q(1) = 0 that keeps every matrix position
    where it is: words built from q-slots vanish whenever an interior
    slot is the unit (the normalized subcomplex, where the cyclic
    boundary identities close) while staying supported on matched entry
    chains (what the contracting homotopy decomposes against).
    """
    out = EndMatrix.zero(a.datum, a.level)
    for (g, h), f in a.entries.items():
        if g == h:
            m = mean_coefficient(f)
            if not m.is_zero():
                f = f - Form.one(a.datum.manifold, a.level).scale(m)
        if not f.is_zero():
            out.entries[(g, h)] = f
    return out


# -- cochain evaluators -------------------------------------------------------------


class Cochain:
    """A cyclic cochain evaluator over an argument algebra.

    Wraps fn(args) -> ULaurent where args = (a0~, a1, .., an) with the
    zeroth slot unitized (plain elements are wrapped on call).  One
    object carries all arities at once -- evaluation dispatches on the
    argument count -- so operators moving between arities stay closures.
    """

    __slots__ = ("algebra", "fn")

    def __init__(self, algebra, fn):
        self.algebra = algebra
        self.fn = fn

    def __call__(self, *args) -> ULaurent:
        if not args:
            raise ValueError("a cochain needs at least the unitized slot")
        first = args[0]
        if not isinstance(first, Unitized):
            first = Unitized(first, 0)
        return self.fn((first,) + tuple(args[1:]))

    @staticmethod
    def zero(algebra) -> "Cochain":
        return Cochain(algebra, lambda args: ULaurent.zero(algebra.order))

    def _check(self, other: "Cochain"):
        if self.algebra.datum is not other.algebra.datum:
            raise ValueError("cochains evaluate over different scenarios")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        return Cochain(self.algebra, lambda args: self.fn(args) + other.fn(args))

    def __neg__(self) -> "Cochain":
        return Cochain(self.algebra, lambda args: -self.fn(args))

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        return Cochain(self.algebra, lambda args: self.fn(args) - other.fn(args))

    def scale(self, c) -> "Cochain":
        return Cochain(self.algebra, lambda args: self.fn(args).scale(c))

    def u_shift(self, k: int) -> "Cochain":
        return Cochain(self.algebra, lambda args: self.fn(args).u_shift(k))

    def act(self, g: int) -> "Cochain":
        """The group action (g.c)(args) = c(g^{-1}.args) slotwise."""
        alg = self.algebra
        if not hasattr(alg, "act"):
            raise ValueError("this argument algebra carries no group action")
        ginv = alg.group.inv(g)

        def fn(args):
            moved = (Unitized(alg.act(ginv, args[0].elem), args[0].scalar),)
            moved += tuple(alg.act(ginv, a) for a in args[1:])
            return self.fn(moved)

        return Cochain(alg, fn)


def group_average(c: Cochain) -> Cochain:
    """Average the group action over Gamma; the result is invariant."""
    grp = c.algebra.group
    out = None
    for g in grp.elements():
        acted = c.act(g)
        out = acted if out is None else out + acted
    return out.scale(Fraction(1, grp.size))


class GroupCochain:
    """A group cochain valued in cyclic cochain evaluators.

    garity counts group arguments: an inhomogeneous cochain takes
    tuples of that length, a homogeneous one takes one more (g0..gk).
    Values are built lazily and cached per tuple.
    """

    __slots__ = ("algebra", "garity", "fn", "homogeneous", "_cache")

    def __init__(self, algebra, garity: int, fn, homogeneous: bool = False):
        if garity < 0:
            raise ValueError("group arity must be >= 0")
        self.algebra = algebra
        self.garity = garity
        self.fn = fn
        self.homogeneous = homogeneous
        self._cache = {}

    @property
    def tuple_length(self) -> int:
        return self.garity + (1 if self.homogeneous else 0)

    def value(self, gtuple) -> Cochain:
        gtuple = tuple(gtuple)
        if len(gtuple) != self.tuple_length:
            raise ValueError(
                f"expected {self.tuple_length} group arguments, got {len(gtuple)}"
            )
        if gtuple not in self._cache:
            self._cache[gtuple] = self.fn(gtuple)
        return self._cache[gtuple]

    def map_values(self, op) -> "GroupCochain":
        return GroupCochain(
            self.algebra, self.garity, lambda t: op(self.value(t)), self.homogeneous
        )

    @staticmethod
    def constant(value: Cochain, homogeneous: bool = False) -> "GroupCochain":
        """The degree-0 cochain with the given value (at () or at every g0)."""
        return GroupCochain(value.algebra, 0, lambda t: value, homogeneous)

    def _check(self, other: "GroupCochain"):
        if (
            self.algebra.datum is not other.algebra.datum
            or self.garity != other.garity
            or self.homogeneous != other.homogeneous
        ):
            raise ValueError("group cochains live in different spaces")

    def __add__(self, other: "GroupCochain") -> "GroupCochain":
        self._check(other)
        return GroupCochain(
            self.algebra,
            self.garity,
            lambda t: self.value(t) + other.value(t),
            self.homogeneous,
        )

    def __neg__(self) -> "GroupCochain":
        return self.map_values(lambda v: -v)

    def __sub__(self, other: "GroupCochain") -> "GroupCochain":
        self._check(other)
        return self + (-other)

    def scale(self, c) -> "GroupCochain":
        return self.map_values(lambda v: v.scale(c))

    def u_shift(self, k: int) -> "GroupCochain":
        return self.map_values(lambda v: v.u_shift(k))


# -- cyclic boundaries -------------------------------------------------------------


def b_apply(c: Cochain) -> Cochain:
    """Hochschild boundary: alternating slot merges plus the wrap-around."""

    def fn(args):
        n = len(args) - 1
        out = ULaurent.zero(c.algebra.order)
        if n == 0:
            return out
        for i in range(n):
            if i == 0:
                merged = (args[0] * args[1],) + args[2:]
            else:
                merged = args[:i] + (args[i] * args[i + 1],) + args[i + 2 :]
            term = c.fn(merged)
            out = out + (term if i % 2 == 0 else -term)
        wrapped = (args[-1] * args[0],) + args[1:-1]
        term = c.fn(wrapped)
        return out + (term if n % 2 == 0 else -term)

    return Cochain(c.algebra, fn)


def B_apply(c: Cochain) -> Cochain:
    """Cyclic boundary: insert the unit in front of every rotation.

    The unitization scalar of the zeroth slot is internalized before
    rotating, and the inserted unit is the algebra's own; on cochains
    vanishing when an interior slot is the unit this satisfies B^2 = 0
    and bB + Bb = 0.
    """

    def fn(args):
        n = len(args) - 1
        unit = c.algebra.unit()
        ring = [args[0].internal(unit)] + list(args[1:])
        one = Unitized(unit, 0)
        out = ULaurent.zero(c.algebra.order)
        for i in range(n + 1):
            rotated = tuple(ring[i:] + ring[:i])
            term = c.fn((one,) + rotated)
            out = out + (term if (n * i) % 2 == 0 else -term)
        return out

    return Cochain(c.algebra, fn)


def boundary_bB(c: Cochain) -> Cochain:
    """The total boundary b + uB."""
    return b_apply(c) + B_apply(c).u_shift(1)


def vertical_boundary(c: GroupCochain, sign: int = 1) -> GroupCochain:
    """The column boundary sign.(-1)^k (b + uB) on a group cochain of arity k.

    The alternating factor is what makes the column boundary anticommute
    with the coboundary in group degree; ``sign`` selects the base
    orientation (both are consistent, and psi1 accepts either).
    """
    s = sign * (-1 if c.garity % 2 else 1)
    out = c.map_values(boundary_bB)
    return out if s == 1 else out.scale(s)


def cyclic_arity_sign(c: Cochain) -> Cochain:
    """Multiply the arity-n component by (-1)^n."""

    def fn(args):
        term = c.fn(args)
        return term if (len(args) - 1) % 2 == 0 else -term

    return Cochain(c.algebra, fn)


# -- group coboundaries -------------------------------------------------------------


def delta_group(c: GroupCochain) -> GroupCochain:
    """Inhomogeneous group coboundary, acting on the value in the first term."""
    if c.homogeneous:
        raise ValueError("delta_group needs an inhomogeneous cochain")
    grp = c.algebra.group
    k = c.garity

    def fn(gtuple):
        out = c.value(gtuple[1:]).act(gtuple[0])
        for i in range(1, k + 1):
            merged = (
                gtuple[: i - 1]
                + (grp.mul(gtuple[i - 1], gtuple[i]),)
                + gtuple[i + 1 :]
            )
            term = c.value(merged)
            out = out + (term if i % 2 == 0 else -term)
        last = c.value(gtuple[:-1])
        return out + (last if (k + 1) % 2 == 0 else -last)

    return GroupCochain(c.algebra, k + 1, fn, homogeneous=False)


def delta_homog(c: GroupCochain) -> GroupCochain:
    """Homogeneous coboundary: alternating sum over dropped tuple entries."""
    if not c.homogeneous:
        raise ValueError("delta_homog needs a homogeneous cochain")

    def fn(gtuple):
        out = None
        for i in range(len(gtuple)):
            term = c.value(gtuple[:i] + gtuple[i + 1 :])
            if i % 2:
                term = -term
            out = term if out is None else out + term
        return out

    return GroupCochain(c.algebra, c.garity + 1, fn, homogeneous=True)


def delta_group_primed(c: GroupCochain) -> GroupCochain:
    """The coboundary twisted by (-1)^n on cyclic-arity-n values."""
    return delta_group(c).map_values(cyclic_arity_sign)


def delta_homog_primed(c: GroupCochain) -> GroupCochain:
    """The homogeneous coboundary twisted by (-1)^n on cyclic-arity-n values."""
    return delta_homog(c).map_values(cyclic_arity_sign)


# -- the contracting homotopy -------------------------------------------------------


def gamma_map(algebra: EndAlgebra, args) -> list:
    """Elementary matched-chain components of matrix arguments.

    One entry is chosen from each slot (the zeroth internalized first)
    so that the indices compose cyclically, (r0,r1)(r1,r2)..(rn,r0);
    gamma of such a chain is its starting row r0.  Components that fail
    to close contribute nothing.  Returns (r0, chain) pairs with the
    chain's zeroth slot unitized again, sorted for reproducible sums.
    """
    if not isinstance(algebra, EndAlgebra):
        raise ValueError("matched chains need matrix arguments")
    first = args[0]
    if isinstance(first, Unitized):
        first = first.internal(algebra.unit())
    mats = [first] + list(args[1:])
    datum = algebra.datum
    level = mats[0].level
    by_row = []
    for m in mats:
        rows = {}
        for (g, h), form in m.entries.items():
            rows.setdefault(g, []).append((h, form))
        for cols in rows.values():
            cols.sort(key=lambda item: item[0])
        by_row.append(rows)

    out = []

    def extend(slot, col, picked):
        if slot == len(mats):
            if col == picked[0][0]:
                out.append(picked)
            return
        for h, form in by_row[slot].get(col, ()):
            extend(slot + 1, h, picked + [(col, h, form)])

    for (r0, c0), form in sorted(mats[0].entries.items()):
        extend(1, c0, [(r0, c0, form)])

    chains = []
    for picked in out:
        singles = [
            EndMatrix.single(datum, level, g, h, form) for (g, h, form) in picked
        ]
        chain = (Unitized(singles[0], 0),) + tuple(singles[1:])
        chains.append((picked[0][0], chain))
    return chains


def homotopy_h(c: GroupCochain) -> GroupCochain:
    """Contracting homotopy for the homogeneous coboundary.

    (h f)(g0..g_{k-1})(s) = (-1)^k f(g0..g_{k-1}, gamma(s))(s), summed
    over the elementary matched chains of the arguments; the sign is
    minus one to the source group arity, which is what makes
    delta~ h + h delta~ = 1 exact on chain-supported cochains.
    """
    if not c.homogeneous:
        raise ValueError("the homotopy needs a homogeneous cochain")
    if c.garity == 0:
        raise ValueError("the homotopy is undefined in homogeneous degree 0")
    sign = -1 if c.garity % 2 else 1

    def fn(gtuple):
        def ev(args):
            total = ULaurent.zero(c.algebra.order)
            for g0, chain in gamma_map(c.algebra, args):
                total = total + c.value(gtuple + (g0,)).fn(chain)
            return total if sign == 1 else -total

        return Cochain(c.algebra, ev)

    return GroupCochain(c.algebra, c.garity - 1, fn, homogeneous=True)


# -- comparison morphisms -----------------------------------------------------------


def psi0(c: GroupCochain) -> GroupCochain:
    """Homogenize an inhomogeneous group cochain.

    (psi0 c)(g0..gk) = g0 . c(g0^{-1}g1, g1^{-1}g2, .., g_{k-1}^{-1}gk):
    consecutive quotients with the leading action on the value.  This is
    the unique equivariant cochain restricting to c along tuples based at
    the identity, and it intertwines the primed coboundaries.
    """
    if c.homogeneous:
        raise ValueError("psi0 consumes inhomogeneous cochains")
    grp = c.algebra.group

    def fn(gtuple):
        quots = tuple(
            grp.mul(grp.inv(gtuple[i]), gtuple[i + 1]) for i in range(len(gtuple) - 1)
        )
        return c.value(quots).act(gtuple[0])

    return GroupCochain(c.algebra, c.garity, fn, homogeneous=True)


def psi0_inverse(c: GroupCochain) -> GroupCochain:
    """Restrict a homogeneous cochain to tuples based at the identity."""
    if not c.homogeneous:
        raise ValueError("psi0_inverse consumes homogeneous cochains")
    grp = c.algebra.group

    def fn(gtuple):
        based = [grp.identity]
        for g in gtuple:
            based.append(grp.mul(based[-1], g))
        return c.value(tuple(based))

    return GroupCochain(c.algebra, c.garity, fn, homogeneous=False)


def psi_half(c: GroupCochain, shift: int = 1) -> GroupCochain:
    """Reweight the (group k, cyclic n) component by (-1)^((k+shift) n).

    The diagonal sign exchange that places a total-complex cochain into
    the double complex whose columns carry the alternating boundary;
    ``shift`` selects which of the two consistent placements is used
    (it decides the sign the collapsed boundary ends up with).
    """
    k = c.garity

    def reweight(val: Cochain) -> Cochain:
        def ev(args):
            n = len(args) - 1
            term = val.fn(args)
            return term if ((k + shift) * n) % 2 == 0 else -term

        return Cochain(val.algebra, ev)

    return c.map_values(reweight)


def psi1(c: GroupCochain, vertical_sign: int = 1) -> GroupCochain:
    """Collapse a homogeneous cochain onto the invariant column.

    psi1(c) = (-Dh)^k c - h (-Dh)^{k-1} (Dc) - h (-Dh)^k (delta~ c)

    with D the column boundary of ``vertical_boundary`` and h the
    contracting homotopy.  For k = 0 the middle term is vacuous and the
    formula degenerates to c - h(delta~ c), which keeps both the
    invariance delta~ psi1 = 0 and the chain identity exact.
    """
    if not c.homogeneous:
        raise ValueError("psi1 consumes homogeneous cochains")
    k = c.garity

    def mDh(x: GroupCochain) -> GroupCochain:
        return vertical_boundary(homotopy_h(x), vertical_sign).scale(-1)

    def power(x: GroupCochain, times: int) -> GroupCochain:
        for _ in range(times):
            x = mDh(x)
        return x

    if k == 0:
        return c - homotopy_h(delta_homog(c))
    t1 = power(c, k)
    t2 = homotopy_h(power(vertical_boundary(c, vertical_sign), k - 1))
    t3 = homotopy_h(power(delta_homog(c), k))
    return t1 - t2 - t3


def _invariance_samples(datum):
    from . import sampling

    rng = random.Random(1093)
    return [
        sampling.random_end_args(rng, datum, 0),
        sampling.random_end_args(rng, datum, 1),
        sampling.random_end_args(rng, datum, 1),
        sampling.random_end_args(rng, datum, 2),
        sampling.random_matched_args(rng, datum, 1),
        sampling.random_matched_args(rng, datum, 2),
    ]


def check_invariant(c: Cochain, samples=None) -> None:
    """Spot-check Gamma-invariance of a cochain; raise with a witness if not."""
    datum = c.algebra.datum
    if samples is None:
        samples = _invariance_samples(datum)
    for g in datum.group.elements():
        moved = c.act(g)
        for args in samples:
            if not (c(*args) - moved(*args)).is_zero():
                raise ValueError(
                    "cochain is not invariant under the group action "
                    f"(witness g={datum.group.labels[g]})"
                )


def psi2(c: Cochain, check_invariance: bool = True) -> Cochain:
    """Pull an invariant cyclic cochain back to the convolution algebra.

    Arguments are expanded into their groupoid summands; the summand at
    (g0, .., gn) is fed to c as the chain of matrix blocks

        E_{p_j, p_{j+1}} ( lambda(p_j, g_j) . (a_{g_j})^{p_j} ),

    p_j the length-j prefix product, with the unitization scalar of the
    zeroth slot passed through to the formal unit.  The multiplier factor
    on each block makes slot merges match the twisted convolution through
    the cocycle rule, and invariance of c closes the wrap-around term.
    """
    if not isinstance(c.algebra, EndAlgebra):
        raise ValueError("psi2 consumes cochains over endomorphism sections")
    if check_invariance:
        check_invariant(c)
    datum = c.algebra.datum
    grp = datum.group
    e = grp.identity
    target = ConvAlgebra(datum)

    def fn(args):
        n = len(args) - 1
        out = ULaurent.zero(datum.manifold.order)
        lead = [(g, f, None) for g, f in sorted(args[0].elem.parts.items())]
        if not args[0].scalar.is_zero():
            lead.append((e, None, args[0].scalar))
        choices = [lead] + [sorted(a.parts.items()) for a in args[1:]]
        for picks in itertools.product(*choices):
            g0, f0, s0 = picks[0]
            gs = (g0,) + tuple(g for g, _ in picks[1:])
            prefix = [e]
            for g in gs:
                prefix.append(grp.mul(prefix[-1], g))
            if f0 is None:
                slot0 = Unitized(EndMatrix.zero(datum, 0), s0)
            else:
                slot0 = Unitized(EndMatrix.single(datum, 0, e, g0, f0), 0)
            blocks = []
            for j in range(1, n + 1):
                gj, fj = picks[j]
                moved = _apply_unit(
                    datum, datum.lam[(prefix[j], gj)], fj.act_group(grp, prefix[j])
                )
                blocks.append(
                    EndMatrix.single(datum, 0, prefix[j], prefix[j + 1], moved)
                )
            out = out + c.fn((slot0,) + tuple(blocks))
        return out

    return Cochain(target, fn)
