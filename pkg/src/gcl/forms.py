"""Exact differential forms on M x Delta^k with Q(zeta_N) coefficients.

A form is a finite sum of monomial terms

    c * e_freq * t^a * dx_I ^ dt_J

with c in Q(zeta_N), e_freq a torus character, t^a a monomial in the
barycentric coordinates t_1..t_k of the k-simplex, and I, J strictly
increasing index tuples.  Terms are stored in a normal form that puts
every manifold differential in front of every simplex differential, so
signs for products come from a single merge-inversion count.

Differential convention
-----------------------
`Form.d_manifold` applies the *normalized* exterior derivative in the
manifold directions,

    D = (2*pi*i)^(-1) d,

so that D(e_k) = sum_j k_j e_k dx_j with integer (not 2*pi*i) weights
and every operator in the package stays inside Q(zeta_N).  All curvature
and transgression forms are normalized the same way; no factor of
2*pi*i ever appears in a coefficient.

For the simplex directions there are two derivatives:

* ``d_simplex(primed=False)`` differentiates the t-variables without the
  parity sign of the manifold degree.  It commutes with D and satisfies
  the fibrewise Stokes identity with no auxiliary sign.
* ``d_simplex(primed=True)`` inserts the sign (-1)^(manifold degree) and
  is the honest antiderivation on the product: it anticommutes with D
  and satisfies the graded Leibniz rule.

Both square to zero; they differ only by the parity factor.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .cyclotomic import Cyc
from .manifold import ModelManifold, Unit

# A term key is (freq, texp, dxs, dts):
#   freq: tuple[int]          torus frequency (length = manifold dim)
#   texp: tuple[int]          exponents of t_1..t_k (length = level)
#   dxs:  tuple[int]          strictly increasing manifold indices
#   dts:  tuple[int]          strictly increasing simplex indices (0-based)


def _merge_signed(a: tuple, b: tuple):
    """Merge two strictly increasing tuples; return (merged, sign) or None.

    The sign is the parity of the permutation sorting the concatenation
    a + b; None signals a repeated index (the product vanishes).
    """
    merged = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            # b[j] jumps over the len(a) - i remaining entries of a
            if (len(a) - i) % 2:
                sign = -sign
            merged.append(b[j])
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return tuple(merged), sign


def _insert_signed(idx: int, into: tuple):
    """Insert one index into a strictly increasing tuple, with sign."""
    return _merge_signed((idx,), into)


class Form:
    """A differential form on M x Delta^level (see module docstring)."""

    __slots__ = ("manifold", "level", "terms")

    def __init__(self, manifold: ModelManifold, level: int, terms: dict | None = None):
        self.manifold = manifold
        self.level = level
        self.terms = {}
        if terms:
            for key, coeff in terms.items():
                self._add_term(key, coeff)

    # -- construction -------------------------------------------------

    def _add_term(self, key, coeff):
        if isinstance(coeff, (int, Fraction)):
            coeff = Cyc.rational(self.manifold.order, coeff)
        if key in self.terms:
            coeff = self.terms[key] + coeff
        if coeff.is_zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = coeff

    @staticmethod
    def zero(manifold: ModelManifold, level: int) -> "Form":
        return Form(manifold, level)

    @staticmethod
    def scalar(manifold: ModelManifold, level: int, coeff) -> "Form":
        key = (manifold.zero_freq(), (0,) * level, (), ())
        return Form(manifold, level, {key: coeff})

    @staticmethod
    def one(manifold: ModelManifold, level: int) -> "Form":
        return Form.scalar(manifold, level, 1)

    @staticmethod
    def e(manifold: ModelManifold, level: int, freq, coeff=1) -> "Form":
        freq = tuple(int(f) for f in freq)
        if len(freq) != manifold.dim:
            raise ValueError("frequency length does not match manifold dimension")
        return Form(manifold, level, {(freq, (0,) * level, (), ()): coeff})

    @staticmethod
    def t(manifold: ModelManifold, level: int, i: int) -> "Form":
        """The barycentric coordinate t_i (1-based, 1 <= i <= level)."""
        if not 1 <= i <= level:
            raise ValueError(f"t_{i} does not exist at level {level}")
        texp = tuple(1 if j == i - 1 else 0 for j in range(level))
        return Form(manifold, level, {(manifold.zero_freq(), texp, (), ()): 1})

    @staticmethod
    def dt(manifold: ModelManifold, level: int, i: int) -> "Form":
        """The differential dt_i (1-based)."""
        if not 1 <= i <= level:
            raise ValueError(f"dt_{i} does not exist at level {level}")
        return Form(manifold, level, {(manifold.zero_freq(), (0,) * level, (), (i - 1,)): 1})

    @staticmethod
    def dx(manifold: ModelManifold, level: int, j: int) -> "Form":
        """The differential dx_j (1-based, 1 <= j <= dim)."""
        if not 1 <= j <= manifold.dim:
            raise ValueError(f"dx_{j} does not exist on {manifold!r}")
        return Form(manifold, level, {(manifold.zero_freq(), (0,) * level, (j - 1,), ()): 1})

    @staticmethod
    def from_unit(manifold: ModelManifold, level: int, unit: Unit) -> "Form":
        return Form.e(manifold, level, unit.freq, unit.coeff())

    def copy(self) -> "Form":
        out = Form(self.manifold, self.level)
        out.terms = dict(self.terms)
        return out

    def lift(self, level: int) -> "Form":
        """Reinterpret at a higher simplex level (adds no t-dependence)."""
        if level < self.level:
            raise ValueError("cannot lift to a lower level")
        if level == self.level:
            return self.copy()
        pad = (0,) * (level - self.level)
        out = Form(self.manifold, level)
        for (freq, texp, dxs, dts), coeff in self.terms.items():
            out.terms[(freq, texp + pad, dxs, dts)] = coeff
        return out

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return (
            self.manifold == other.manifold
            and self.level == other.level
            and self.terms == other.terms
        )

    def __hash__(self):
        raise TypeError("Form is mutable; not hashable")

    def bidegrees(self) -> set:
        """Set of (manifold degree, simplex degree) pairs present."""
        return {(len(k[2]), len(k[3])) for k in self.terms}

    def component(self, r: int, s: int) -> "Form":
        """The (r, s)-bidegree part: r dx's and s dt's."""
        out = Form(self.manifold, self.level)
        for key, coeff in self.terms.items():
            if len(key[2]) == r and len(key[3]) == s:
                out.terms[key] = coeff
        return out

    def is_function(self) -> bool:
        return all(not k[2] and not k[3] and not any(k[1]) for k in self.terms)

    def scalar_value(self) -> Cyc:
        """The coefficient of the constant term (useful on the point)."""
        key = (self.manifold.zero_freq(), (0,) * self.level, (), ())
        return self.terms.get(key, Cyc.zero(self.manifold.order))

    # -- linear structure ----------------------------------------------

    def _check(self, other: "Form"):
        if self.manifold != other.manifold or self.level != other.level:
            raise ValueError("forms live on different spaces")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Cyc)):
            other = Form.scalar(self.manifold, self.level, other)
        if not isinstance(other, Form):
            return NotImplemented
        self._check(other)
        out = self.copy()
        for key, coeff in other.terms.items():
            out._add_term(key, coeff)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Form(self.manifold, self.level)
        out.terms = {k: -c for k, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Form":
        if isinstance(c, (int, Fraction)):
            c = Cyc.rational(self.manifold.order, c)
        if c.is_zero():
            return Form(self.manifold, self.level)
        out = Form(self.manifold, self.level)
        out.terms = {k: v * c for k, v in self.terms.items()}
        return out

    # -- wedge product ---------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyc)):
            return self.scale(other)
        if not isinstance(other, Form):
            return NotImplemented
        self._check(other)
        out = Form(self.manifold, self.level)
        for (f1, t1, i1, j1), c1 in self.terms.items():
            for (f2, t2, i2, j2), c2 in other.terms.items():
                mi = _merge_signed(i1, i2)
                if mi is None:
                    continue
                mj = _merge_signed(j1, j2)
                if mj is None:
                    continue
                sign = mi[1] * mj[1]
                # moving the dx block of the second factor past the dt
                # block of the first costs (-1)^(|i2|*|j1|)
                if (len(i2) * len(j1)) % 2:
                    sign = -sign
                freq = tuple(a + b for a, b in zip(f1, f2))
                texp = tuple(a + b for a, b in zip(t1, t2))
                coeff = c1 * c2
                if sign < 0:
                    coeff = -coeff
                out._add_term((freq, texp, mi[0], mj[0]), coeff)
        return out

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Cyc)):
            return self.scale(other)
        return NotImplemented

    # -- differentials ---------------------------------------------------

    def d_manifold(self) -> "Form":
        """Normalized manifold derivative D = (2*pi*i)^(-1) d.

        D(e_k t^a dx_I dt_J) = sum_j k_j e_k t^a dx_j ^ dx_I ^ dt_J.
        """
        out = Form(self.manifold, self.level)
        for (freq, texp, dxs, dts), coeff in self.terms.items():
            for j, kj in enumerate(freq):
                if kj == 0 or j in dxs:
                    continue
                ins = _insert_signed(j, dxs)
                new_coeff = coeff * kj
                if ins[1] < 0:
                    new_coeff = -new_coeff
                out._add_term((freq, texp, ins[0], dts), new_coeff)
        return out

    def d_simplex(self, primed: bool = False) -> "Form":
        """Simplex derivative in the t-variables.

        With ``primed=True`` each term picks up the extra sign
        (-1)^(manifold degree), making the operator the genuine graded
        derivation on the product (it then anticommutes with
        ``d_manifold``); with ``primed=False`` it commutes with
        ``d_manifold`` instead.  Both versions square to zero.
        """
        out = Form(self.manifold, self.level)
        for (freq, texp, dxs, dts), coeff in self.terms.items():
            parity = len(dxs) % 2 if primed else 0
            for i, ai in enumerate(texp):
                if ai == 0 or i in dts:
                    continue
                ins = _insert_signed(i, dts)
                new_texp = tuple(a - 1 if p == i else a for p, a in enumerate(texp))
                new_coeff = coeff * ai
                if (ins[1] < 0) ^ (parity == 1):
                    new_coeff = -new_coeff
                out._add_term((freq, new_texp, dxs, ins[0]), new_coeff)
        return out

    def d_total(self) -> "Form":
        """D + d_t with the honest simplex sign (a square-zero derivation)."""
        return self.d_manifold() + self.d_simplex(primed=True)

    # -- group action ------------------------------------------------------

    def act_group(self, group, g: int) -> "Form":
        """Pullback along x -> x.g applied to the manifold variables.

        Characters transform by e_k -> zeta^shift e_(A^T k) and dx_i by the
        row i of the matrix of g; simplex variables are untouched.
        """
        out = Form(self.manifold, self.level)
        zero_t = None
        for (freq, texp, dxs, dts), coeff in self.terms.items():
            shift, new_freq = group.act_freq(g, freq)
            piece = Form(
                self.manifold,
                self.level,
                {(new_freq, texp, (), ()): coeff * Cyc.zeta(self.manifold.order, shift)},
            )
            for i in dxs:
                row = group.dx_pullback_row(g, i)
                df = Form(self.manifold, self.level)
                for j, a in enumerate(row):
                    if a:
                        df._add_term((self.manifold.zero_freq(), (0,) * self.level, (j,), ()), a)
                piece = piece * df
            if dts:
                if zero_t is None:
                    zero_t = (self.manifold.zero_freq(), (0,) * self.level)
                piece = piece * Form(self.manifold, self.level, {zero_t + ((), dts): 1})
            for key, c in piece.terms.items():
                out._add_term(key, c)
        return out

    # -- simplicial structure ---------------------------------------------

    def _substitute(self, new_level: int, sub_t: list, sub_dt: list) -> "Form":
        """Rebuild the form after t_i -> sub_t[i], dt_i -> sub_dt[i] (0-based).

        The substitutes are forms at ``new_level``; manifold variables are
        carried over verbatim.
        """
        out = Form(self.manifold, new_level)
        # cache powers of the t-substitutes as they are polynomials
        pow_cache: dict = {}

        def t_power(i: int, a: int) -> Form:
            if a == 0:
                return Form.one(self.manifold, new_level)
            key = (i, a)
            if key not in pow_cache:
                pow_cache[key] = t_power(i, a - 1) * sub_t[i]
            return pow_cache[key]

        for (freq, texp, dxs, dts), coeff in self.terms.items():
            piece = Form(self.manifold, new_level, {(freq, (0,) * new_level, dxs, ()): coeff})
            for i, ai in enumerate(texp):
                if ai:
                    piece = piece * t_power(i, ai)
            for i in dts:
                piece = piece * sub_dt[i]
                if piece.is_zero():
                    break
            for key, c in piece.terms.items():
                out._add_term(key, c)
        return out

    def pullback_face(self, i: int) -> "Form":
        """Pullback along the i-th face inclusion Delta^(k-1) -> Delta^k.

        Face 0 is the locus t_1 = 1 - (t_2 + ... + t_k) reparametrized by
        the remaining coordinates; face i >= 1 sets t_i = 0.
        """
        k = self.level
        if k == 0:
            raise ValueError("no faces at level 0")
        if not 0 <= i <= k:
            raise ValueError(f"face index {i} out of range 0..{k}")
        new_level = k - 1
        sub_t: list[Form] = [None] * k
        sub_dt: list[Form] = [None] * k
        if i == 0:
            rest = Form.one(self.manifold, new_level)
            drest = Form.zero(self.manifold, new_level)
            for p in range(1, k):
                rest = rest - Form.t(self.manifold, new_level, p)
                drest = drest - Form.dt(self.manifold, new_level, p)
            sub_t[0], sub_dt[0] = rest, drest
            for j in range(1, k):
                sub_t[j] = Form.t(self.manifold, new_level, j)
                sub_dt[j] = Form.dt(self.manifold, new_level, j)
        else:
            for j in range(k):
                if j == i - 1:
                    sub_t[j] = Form.zero(self.manifold, new_level)
                    sub_dt[j] = Form.zero(self.manifold, new_level)
                else:
                    new_j = j if j < i - 1 else j - 1
                    sub_t[j] = Form.t(self.manifold, new_level, new_j + 1)
                    sub_dt[j] = Form.dt(self.manifold, new_level, new_j + 1)
        return self._substitute(new_level, sub_t, sub_dt)

    def pullback_degeneracy(self, j: int) -> "Form":
        """Pullback along the j-th degeneracy Delta^(k+1) -> Delta^k."""
        k = self.level
        if not 0 <= j <= k:
            raise ValueError(f"degeneracy index {j} out of range 0..{k}")
        new_level = k + 1
        sub_t: list[Form] = [None] * k
        sub_dt: list[Form] = [None] * k
        for p in range(k):
            if j >= 1 and p == j - 1:
                sub_t[p] = Form.t(self.manifold, new_level, j) + Form.t(
                    self.manifold, new_level, j + 1
                )
                sub_dt[p] = Form.dt(self.manifold, new_level, j) + Form.dt(
                    self.manifold, new_level, j + 1
                )
            else:
                new_p = p + 1 if (j == 0 or p >= j) else p
                sub_t[p] = Form.t(self.manifold, new_level, new_p + 1)
                sub_dt[p] = Form.dt(self.manifold, new_level, new_p + 1)
        return self._substitute(new_level, sub_t, sub_dt)

    # -- integration --------------------------------------------------------

    def integrate_simplex(self) -> "Form":
        """Fibre integral over Delta^level; the result lives at level 0.

        Only terms carrying the full dt_1 ^ ... ^ dt_k survive, with
        int_Delta t^a dt = prod(a_i!) / (k + sum a_i)!.
        """
        k = self.level
        full = tuple(range(k))
        out = Form(self.manifold, 0)
        for (freq, texp, dxs, dts), coeff in self.terms.items():
            if dts != full:
                continue
            num = 1
            for a in texp:
                num *= factorial(a)
            weight = Fraction(num, factorial(k + sum(texp)))
            out._add_term((freq, (), dxs, ()), coeff * weight)
        return out

    def integrate_manifold(self) -> "Form":
        """Integral over M; the result is a form on the simplex alone.

        On the torus only frequency-zero terms carrying the full volume
        form dx_1 ^ ... ^ dx_m survive (with unit weight); on the point
        every term survives.  The result is reported on a point manifold
        with the same cyclotomic order.
        """
        m = self.manifold.dim
        full = tuple(range(m))
        target = ModelManifold.point(self.manifold.order)
        out = Form(target, self.level)
        for (freq, texp, dxs, dts), coeff in self.terms.items():
            if dxs != full or any(freq):
                continue
            out._add_term(((), texp, (), dts), coeff)
        return out

    def integrate_total(self) -> Cyc:
        """Integral over M x Delta^level (top bidegree terms only)."""
        m, k = self.manifold.dim, self.level
        full_x, full_t = tuple(range(m)), tuple(range(k))
        total = Cyc.zero(self.manifold.order)
        for (freq, texp, dxs, dts), coeff in self.terms.items():
            if dxs != full_x or dts != full_t or any(freq):
                continue
            num = 1
            for a in texp:
                num *= factorial(a)
            total = total + coeff * Fraction(num, factorial(k + sum(texp)))
        return total

    def boundary_integral(self) -> "Form":
        """Sum of signed face restrictions integrated over Delta^(k-1).

        Returns sum_i (-1)^i int_(Delta^(k-1)) (face_i pullback); this is
        what the fibrewise Stokes identity equates with the unsigned
        simplex derivative's fibre integral.
        """
        out = Form(self.manifold, 0)
        for i in range(self.level + 1):
            face = self.pullback_face(i).integrate_simplex()
            out = out + (face if i % 2 == 0 else -face)
        return out

    # -- serialization --------------------------------------------------------

    def to_terms(self) -> list:
        items = []
        for (freq, texp, dxs, dts) in sorted(self.terms):
            coeff = self.terms[(freq, texp, dxs, dts)]
            vec, den = coeff.to_vector()
            items.append(
                {
                    "freq": list(freq),
                    "t_exps": list(texp),
                    "dx_set": [i + 1 for i in dxs],
                    "dt_set": [i + 1 for i in dts],
                    "coeff": {"num": list(vec), "den": den},
                }
            )
        return items

    @staticmethod
    def from_terms(manifold: ModelManifold, level: int, items: list) -> "Form":
        out = Form(manifold, level)
        for item in items:
            coeff = Cyc.from_vector(
                manifold.order, item["coeff"]["num"], item["coeff"].get("den", 1)
            )
            key = (
                tuple(item["freq"]),
                tuple(item.get("t_exps", (0,) * level)),
                tuple(i - 1 for i in item["dx_set"]),
                tuple(i - 1 for i in item["dt_set"]),
            )
            out._add_term(key, coeff)
        return out

    # -- display ----------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (freq, texp, dxs, dts) in sorted(self.terms):
            coeff = self.terms[(freq, texp, dxs, dts)]
            factors = [f"({coeff!r})"]
            if any(freq):
                factors.append(f"e{freq}")
            for i, a in enumerate(texp):
                if a:
                    factors.append(f"t{i + 1}" + (f"^{a}" if a > 1 else ""))
            for j in dxs:
                factors.append(f"dx{j + 1}")
            for i in dts:
                factors.append(f"dt{i + 1}")
            bits.append("*".join(factors))
        return " + ".join(bits)
