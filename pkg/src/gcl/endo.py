"""Matrix calculus on the direct sum bundle and its simplicial curvature.

Sections of End(E) for E = (+)_g L_g are finite matrices indexed by
pairs of group elements, with Form-valued entries; E_{g,h} denotes the
component mapping the summand L_h into L_g... indices follow the rule
E_{g1,g2} E_{g2,g3} = E_{g1,g3}, i.e. entry (g, h) composes with entry
(h, k) to land in (g, k).

On the k-th nerve level the bundle carries the connection

    nabla^k = nabla^E + t_1 A(g_1) + t_2 A(g_1 g_2) + ... + t_k A(g_1..g_k)

whose potential w is a diagonal matrix of (1,0)-forms.  Its square is
central up to the scalar correction terms, giving the simplicial 2-form
vartheta and, after one more derivative, the scalar simplicial curvature
3-form Theta = -nabla(vartheta).  Both are produced here in closed form
and cross-checked against the derivation route in the tests.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclotomic import Cyc
from .forms import Form
from .gerbe import GerbeDatum


class EndMatrix:
    """Sparse Form-valued matrix over the group index set at a fixed level."""

    __slots__ = ("datum", "level", "entries")

    def __init__(self, datum: GerbeDatum, level: int, entries: dict | None = None):
        self.datum = datum
        self.level = level
        self.entries = {}
        if entries:
            for key, form in entries.items():
                self._add_entry(key, form)

    def _add_entry(self, key, form: Form):
        if form.level != self.level or form.manifold != self.datum.manifold:
            raise ValueError("entry lives on the wrong space")
        if key in self.entries:
            form = self.entries[key] + form
        if form.is_zero():
            self.entries.pop(key, None)
        else:
            self.entries[key] = form

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(datum: GerbeDatum, level: int) -> "EndMatrix":
        return EndMatrix(datum, level)

    @staticmethod
    def identity(datum: GerbeDatum, level: int) -> "EndMatrix":
        one = Form.one(datum.manifold, level)
        return EndMatrix(
            datum, level, {(g, g): one for g in datum.group.elements()}
        )

    @staticmethod
    def single(datum: GerbeDatum, level: int, g: int, h: int, form: Form) -> "EndMatrix":
        return EndMatrix(datum, level, {(g, h): form})

    @staticmethod
    def diagonal(datum: GerbeDatum, level: int, forms) -> "EndMatrix":
        return EndMatrix(
            datum, level, {(g, g): form for g, form in enumerate(forms)}
        )

    @staticmethod
    def scalar_matrix(datum: GerbeDatum, level: int, form: Form) -> "EndMatrix":
        return EndMatrix(
            datum, level, {(g, g): form for g in datum.group.elements()}
        )

    def copy(self) -> "EndMatrix":
        out = EndMatrix(self.datum, self.level)
        out.entries = dict(self.entries)
        return out

    # -- linear structure ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self):
        return bool(self.entries)

    def __eq__(self, other):
        if not isinstance(other, EndMatrix):
            return NotImplemented
        return self.level == other.level and self.entries == other.entries

    def __add__(self, other: "EndMatrix") -> "EndMatrix":
        out = self.copy()
        for key, form in other.entries.items():
            out._add_entry(key, form)
        return out

    def __neg__(self) -> "EndMatrix":
        out = EndMatrix(self.datum, self.level)
        out.entries = {k: -f for k, f in self.entries.items()}
        return out

    def __sub__(self, other: "EndMatrix") -> "EndMatrix":
        return self + (-other)

    def scale(self, c) -> "EndMatrix":
        out = EndMatrix(self.datum, self.level)
        for key, form in self.entries.items():
            scaled = form.scale(c)
            if not scaled.is_zero():
                out.entries[key] = scaled
        return out

    def scale_form(self, form: Form) -> "EndMatrix":
        """Left multiplication by a central scalar form."""
        out = EndMatrix(self.datum, self.level)
        for key, entry in self.entries.items():
            out._add_entry(key, form * entry)
        return out

    # -- matrix product -------------------------------------------------------

    def __mul__(self, other):
        if not isinstance(other, EndMatrix):
            return NotImplemented
        if self.level != other.level:
            raise ValueError("levels differ")
        by_row: dict = {}
        for (g, h), form in other.entries.items():
            by_row.setdefault(g, []).append((h, form))
        out = EndMatrix(self.datum, self.level)
        for (g, h), left in self.entries.items():
            for k, right in by_row.get(h, ()):
                out._add_entry((g, k), left * right)
        return out

    def trace(self) -> Form:
        total = Form.zero(self.datum.manifold, self.level)
        for (g, h), form in self.entries.items():
            if g == h:
                total = total + form
        return total

    # -- entrywise operators ----------------------------------------------------

    def map_entries(self, fn) -> "EndMatrix":
        out = EndMatrix(self.datum, self.level)
        for key, form in self.entries.items():
            image = fn(form)
            if not image.is_zero():
                out._add_entry(key, image)
        return out

    def d_manifold(self) -> "EndMatrix":
        return self.map_entries(lambda f: f.d_manifold())

    def d_simplex(self, primed: bool = True) -> "EndMatrix":
        return self.map_entries(lambda f: f.d_simplex(primed))

    def pullback_face(self, i: int) -> "EndMatrix":
        out = EndMatrix(self.datum, self.level - 1)
        for key, form in self.entries.items():
            image = form.pullback_face(i)
            if not image.is_zero():
                out._add_entry(key, image)
        return out

    def parity_split(self) -> tuple:
        """(even, odd) by total form degree of each term."""
        even = EndMatrix(self.datum, self.level)
        odd = EndMatrix(self.datum, self.level)
        for key, form in self.entries.items():
            ev = Form(form.manifold, form.level)
            od = Form(form.manifold, form.level)
            for tkey, coeff in form.terms.items():
                target = ev if (len(tkey[2]) + len(tkey[3])) % 2 == 0 else od
                target.terms[tkey] = coeff
            if not ev.is_zero():
                even.entries[key] = ev
            if not od.is_zero():
                odd.entries[key] = od
        return even, odd

    def act(self, g: int) -> "EndMatrix":
        """The left action of g: entry (g1, g2) moves to (g g1, g g2).

        The value picks up the multiplier ratio lambda(g, g2)/lambda(g, g1)
        and the manifold pullback along g, implementing conjugation by the
        bundle identification over the face-0 nerve map.
        """
        datum, grp = self.datum, self.datum.group
        out = EndMatrix(datum, self.level)
        for (g1, g2), form in self.entries.items():
            ratio = datum.lam[(g, g2)] * datum.lam[(g, g1)].inv()
            moved = form.act_group(grp, g).scale(ratio.coeff())
            if any(ratio.freq):
                moved = Form.e(datum.manifold, self.level, ratio.freq) * moved
            out._add_entry((grp.mul(g, g1), grp.mul(g, g2)), moved)
        return out

    def __repr__(self):
        if not self.entries:
            return "EndMatrix(0)"
        labels = self.datum.group.labels
        bits = [
            f"({labels[g]},{labels[h]}): {form!r}"
            for (g, h), form in sorted(self.entries.items())
        ]
        return "EndMatrix{" + "; ".join(bits) + "}"


def graded_commutator(a: EndMatrix, b: EndMatrix, parity_a: int) -> EndMatrix:
    """[a, b] with a of pure parity; b may be mixed (split internally)."""
    even, odd = b.parity_split()
    if parity_a % 2 == 0:
        return a * b - (even + odd) * a
    return a * b - even * a + odd * a


# -- connection data -------------------------------------------------------------


def discrepancy_matrix(datum: GerbeDatum, g: int, level: int = 0) -> EndMatrix:
    """The diagonal discrepancy 1-form A(g): entry (g', g') is -alpha(g, g^{-1}g').

    The sign makes the composition rule A(g) + g.A(h) - A(gh) = -alpha(g, h) Id
    and the face-0 compatibility of the simplicial 2-form come out exactly.
    """
    grp = datum.group
    entries = {}
    for gp in grp.elements():
        val = -datum.alpha(g, grp.mul(grp.inv(g), gp))
        if not val.is_zero():
            entries[(gp, gp)] = _lift(val, level)
    return EndMatrix(datum, level, entries)


def _lift(form: Form, level: int) -> Form:
    """Reinterpret a level-0 form at the given simplex level."""
    return form if level == 0 else form.lift(level)


def connection_potential(datum: GerbeDatum, gtuple: tuple) -> EndMatrix:
    """The diagonal potential w of nabla^k: diag(a_{g'}) + sum_i t_i A(g_1..g_i)."""
    k = len(gtuple)
    grp = datum.group
    w = EndMatrix(
        datum,
        k,
        {(g, g): _lift(datum.a[g], k) for g in grp.elements() if not datum.a[g].is_zero()},
    )
    for i in range(1, k + 1):
        prefix = grp.prod(gtuple[:i])
        ti = Form.t(datum.manifold, k, i)
        w = w + discrepancy_matrix(datum, prefix, k).scale_form(ti)
    return w


def nabla_apply(datum: GerbeDatum, gtuple: tuple, x: EndMatrix) -> EndMatrix:
    """nabla^k applied to an End-valued form: D x + d_t x + [w, x]."""
    w = connection_potential(datum, gtuple)
    return x.d_manifold() + x.d_simplex(True) + graded_commutator(w, x, 1)


def nabla_u_apply(datum: GerbeDatum, gtuple: tuple, x: EndMatrix) -> dict:
    """The rescaled connection, returned as u-weight -> EndMatrix.

    Weight 0 carries the manifold part D + [w, .]; weight -1 carries the
    simplex derivative.
    """
    w = connection_potential(datum, gtuple)
    out = {}
    manifold_part = x.d_manifold() + graded_commutator(w, x, 1)
    if not manifold_part.is_zero():
        out[0] = manifold_part
    simplex_part = x.d_simplex(True)
    if not simplex_part.is_zero():
        out[-1] = simplex_part
    return out


# -- simplicial curvature forms ------------------------------------------------------


def _beta(manifold, k: int, i: int, j: int) -> Form:
    """t_i dt_j - t_j dt_i at level k (1-based i < j)."""
    return Form.t(manifold, k, i) * Form.dt(manifold, k, j) - Form.t(
        manifold, k, j
    ) * Form.dt(manifold, k, i)


def vartheta(datum: GerbeDatum, gtuple: tuple) -> EndMatrix:
    """The simplicial 2-form at the tuple's level, in closed form.

    vartheta = theta^E + sum_i [dt_i A_i + t_i (D A_i - theta_{p_i})]
             + sum_{i<j} alpha(p_i, p_i^{-1} p_j) (t_i dt_j - t_j dt_i),

    with p_i the length-i prefix product.  The (0,2) part vanishes.

    The plus sign on the alpha sum is forced by face compatibility: the
    ds_1 component of the front-face identity reduces, through the
    discrepancy composition rule, to the two-variable cocycle rule for
    alpha, and only this sign satisfies it.
    """
    k = len(gtuple)
    grp = datum.group
    man = datum.manifold
    out = EndMatrix(
        datum,
        k,
        {
            (g, g): _lift(datum.theta(g), k)
            for g in grp.elements()
            if not datum.theta(g).is_zero()
        },
    )
    prefixes = [grp.prod(gtuple[:i]) for i in range(k + 1)]
    for i in range(1, k + 1):
        a_i = discrepancy_matrix(datum, prefixes[i], k)
        dt_i = Form.dt(man, k, i)
        t_i = Form.t(man, k, i)
        out = out + a_i.scale_form(dt_i)
        correction = a_i.d_manifold() - EndMatrix.scalar_matrix(
            datum, k, _lift(datum.theta(prefixes[i]), k)
        )
        out = out + correction.scale_form(t_i)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            seg = grp.prod(gtuple[i:j])
            a_form = _lift(datum.alpha(prefixes[i], seg), k)
            out = out + EndMatrix.scalar_matrix(datum, k, a_form * _beta(man, k, i, j))
    return out


def vartheta_u(datum: GerbeDatum, gtuple: tuple) -> dict:
    """u-weight -> EndMatrix split of the rescaled 2-form u*v^{2,0} + v^{1,1}."""
    full = vartheta(datum, gtuple)
    out = {}
    w20 = full.map_entries(lambda f: f.component(2, 0))
    w11 = full.map_entries(lambda f: f.component(1, 1))
    if not w20.is_zero():
        out[1] = w20
    if not w11.is_zero():
        out[0] = w11
    leftover = full - w20 - w11
    if not leftover.is_zero():
        raise ValueError("simplicial 2-form has unexpected (0,2) part")
    return out


def curvature3(datum: GerbeDatum, gtuple: tuple) -> Form:
    """The scalar simplicial curvature 3-form in closed form:

    Theta = sum_i dt_i theta_{p_i}
          - sum_{i<j} D alpha_{ij} (t_i dt_j - t_j dt_i)
          + 2 sum_{i<j} alpha_{ij} dt_i dt_j.

    This is -nabla(vartheta) computed with the signed simplex derivative,
    so it is killed by D + d' (the combination under which the twisted
    differential squares to zero); its windows are face compatible, and
    its fibre integrals over the simplex return the cocycle pair
    (alpha, theta).
    """
    k = len(gtuple)
    grp = datum.group
    man = datum.manifold
    out = Form.zero(man, k)
    prefixes = [grp.prod(gtuple[:i]) for i in range(k + 1)]
    for i in range(1, k + 1):
        out = out + Form.dt(man, k, i) * _lift(datum.theta(prefixes[i]), k)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            seg = grp.prod(gtuple[i:j])
            alpha = _lift(datum.alpha(prefixes[i], seg), k)
            out = out - alpha.d_manifold() * _beta(man, k, i, j)
            out = out + (alpha * Form.dt(man, k, i) * Form.dt(man, k, j)).scale(2)
    return out


def curvature3_via_nabla(datum: GerbeDatum, gtuple: tuple) -> Form:
    """Independent route Theta = -nabla(vartheta); asserts centrality."""
    image = -nabla_apply(datum, gtuple, vartheta(datum, gtuple))
    grp = datum.group
    common = None
    for g in grp.elements():
        entry = image.entries.get((g, g), Form.zero(datum.manifold, len(gtuple)))
        if common is None:
            common = entry
        elif entry != common:
            raise ValueError("curvature 3-form is not central (diagonal mismatch)")
    for (g, h) in image.entries:
        if g != h:
            raise ValueError("curvature 3-form is not central (off-diagonal entry)")
    return common if common is not None else Form.zero(datum.manifold, len(gtuple))


def curvature3_u(datum: GerbeDatum, gtuple: tuple) -> dict:
    """u-weight split u^2 T^{3,0} + u T^{2,1} + T^{1,2} of the curvature."""
    full = curvature3(datum, gtuple)
    out = {}
    for weight, (r, s) in ((2, (3, 0)), (1, (2, 1)), (0, (1, 2))):
        part = full.component(r, s)
        if not part.is_zero():
            out[weight] = part
    leftover = full - sum(
        (p for p in out.values()), Form.zero(datum.manifold, full.level)
    )
    if not leftover.is_zero():
        raise ValueError("curvature 3-form has an unexpected (0,3) part")
    return out
