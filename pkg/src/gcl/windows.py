"""Compatible form windows over the nerve of a translation groupoid.

A *window* assigns to every k-tuple of group elements (for k up to a level
cap) a form on M x Delta^k.  The windows of interest satisfy the face
compatibility condition

    (restrict to i-th simplex face of the value at (g_1, ..., g_k))
        =  value at the i-th nerve face of the tuple,

where the nerve faces drop g_k (i = k), merge g_i g_{i+1} (0 < i < k), or
drop g_1 (i = 0); the 0-th face additionally transports the lower value by
the pullback action of g_1.

Stacks of windows in a formal degree-2 variable u carry the twisted
differential

    d(xi) = u * D(xi) + d'(xi) + T_u ^ xi,

where D is the normalised manifold derivative, d' the signed simplex
derivative, and T_u = u^2 T^(3,0) + u T^(2,1) + T^(1,2) the rescaling of a
closed compatible 3-form T with no (0,3) part.  Applying d twice gives zero
precisely because (u D + d') T_u = 0, which is enforced when the twist data
is constructed.  The gauge transform by a compatible 2-form eta (with no
(0,2) part) is the wedge with the finite exponential e^{-eta_u}; it
intertwines the differentials of T and T - (u D + d') eta_u.
"""

from fractions import Fraction
from math import factorial

from .forms import Form
from .gerbe import GerbeDatum
from .endo import curvature3


class WindowError(ValueError):
    """A window constraint failed; carries a witness when available."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def nerve_face(group, gtuple: tuple, i: int) -> tuple:
    """The i-th nerve face of a k-tuple of group elements."""
    k = len(gtuple)
    if not 0 <= i <= k:
        raise IndexError(f"face index {i} out of range for a {k}-tuple")
    if i == 0:
        return tuple(gtuple[1:])
    if i == k:
        return tuple(gtuple[:-1])
    merged = group.mul(gtuple[i - 1], gtuple[i])
    return tuple(gtuple[: i - 1]) + (merged,) + tuple(gtuple[i + 1 :])


class CompatibleWindow:
    """Lazily evaluated window of forms over group tuples up to a level cap.

    Values may be Form or EndMatrix instances; they are produced by the
    stored rule on first access and cached.  The linear and wedge operations
    compose rules, so derived windows stay lazy.
    """

    def __init__(self, manifold, group, max_level: int, fn):
        self.manifold = manifold
        self.group = group
        self.max_level = max_level
        self._fn = fn
        self._cache = {}

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(manifold, group, max_level: int) -> "CompatibleWindow":
        return CompatibleWindow(
            manifold, group, max_level, lambda gt: Form.zero(manifold, len(gt))
        )

    @staticmethod
    def from_tables(manifold, group, max_level: int, tables: dict) -> "CompatibleWindow":
        """Window from an explicit {tuple: Form} map; missing tuples are zero.

        No compatibility is assumed; run check_compatible to find out.
        """
        fixed = {tuple(key): val for key, val in tables.items()}

        def fn(gtuple):
            got = fixed.get(gtuple)
            return got.copy() if got is not None else Form.zero(manifold, len(gtuple))

        return CompatibleWindow(manifold, group, max_level, fn)

    # -- evaluation --------------------------------------------------------

    def value(self, gtuple):
        gtuple = tuple(gtuple)
        if len(gtuple) > self.max_level:
            raise WindowError("tuple beyond the window level cap", witness=gtuple)
        if gtuple not in self._cache:
            val = self._fn(gtuple)
            if val.level != len(gtuple):
                raise WindowError("window value at the wrong level", witness=gtuple)
            self._cache[gtuple] = val
        return self._cache[gtuple]

    def tuples(self, k: int):
        return self.group.tuples(k)

    # -- algebra (pointwise over tuples) -----------------------------------

    def map_values(self, fn) -> "CompatibleWindow":
        return CompatibleWindow(
            self.manifold, self.group, self.max_level, lambda gt: fn(self.value(gt))
        )

    def _merge(self, other: "CompatibleWindow", op) -> "CompatibleWindow":
        if self.manifold != other.manifold or self.group is not other.group:
            raise WindowError("windows live over different data")
        cap = min(self.max_level, other.max_level)
        return CompatibleWindow(
            self.manifold,
            self.group,
            cap,
            lambda gt: op(self.value(gt), other.value(gt)),
        )

    def __add__(self, other):
        return self._merge(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._merge(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._merge(other, lambda a, b: a * b)

    def scale(self, c) -> "CompatibleWindow":
        return self.map_values(lambda v: v.scale(c))

    def d_manifold(self) -> "CompatibleWindow":
        return self.map_values(lambda v: v.d_manifold())

    def d_simplex(self, primed: bool = True) -> "CompatibleWindow":
        return self.map_values(lambda v: v.d_simplex(primed))

    def component(self, r: int, s: int) -> "CompatibleWindow":
        return self.map_values(lambda v: v.component(r, s))

    def is_zero(self) -> bool:
        """True when every value up to the level cap vanishes (exhaustive)."""
        for k in range(self.max_level + 1):
            for gtuple in self.group.tuples(k):
                if not self.value(gtuple).is_zero():
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, CompatibleWindow):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("CompatibleWindow is lazy; not hashable")

    def __repr__(self):
        return (
            f"CompatibleWindow(levels<= {self.max_level}, "
            f"{self.group.size} group elements)"
        )


def _default_transport(window: CompatibleWindow):
    group = window.group

    def act(g, value):
        if hasattr(value, "act_group"):
            return value.act_group(group, g)
        return value.act(g)

    return act


def check_compatible(window: CompatibleWindow, max_level: int | None = None, act=None) -> dict:
    """Face-compatibility report for a window.

    One check per (level, face index); failures carry the offending tuple
    and the difference that should have been zero.  For matrix-valued
    windows pass the appropriate transport callback as act(g, value); the
    default is the scalar pullback action.
    """
    cap = window.max_level if max_level is None else min(max_level, window.max_level)
    if act is None:
        act = _default_transport(window)
    checks = []
    for k in range(1, cap + 1):
        for i in range(k + 1):
            failures = []
            for gtuple in window.tuples(k):
                got = window.value(gtuple).pullback_face(i)
                lower = window.value(nerve_face(window.group, gtuple, i))
                expected = act(gtuple[0], lower) if i == 0 else lower
                diff = got - expected
                if not diff.is_zero():
                    failures.append({"tuple": list(gtuple), "difference": repr(diff)})
            entry = {
                "id": f"face_compatibility[k={k},i={i}]",
                "status": "pass" if not failures else "fail",
            }
            if failures:
                entry["witness"] = failures
            checks.append(entry)
    status = "pass" if all(c["status"] == "pass" for c in checks) else "fail"
    return {"suite": "window_compatibility", "status": status, "checks": checks}


def invariant_extend(manifold, group, beta: Form, max_level: int = 4) -> CompatibleWindow:
    """Extend an invariant form on M constantly over the nerve.

    The form must be a level-0 form fixed by every group pullback;
    otherwise the offending element is reported as the witness.
    """
    if beta.level != 0:
        raise WindowError("only level-0 forms extend constantly")
    for g in group.elements():
        if beta.act_group(group, g) != beta:
            raise WindowError("form is not invariant under the group", witness=g)
    return CompatibleWindow(
        manifold, group, max_level, lambda gt: beta.lift(len(gt))
    )


# -- u-stacks ----------------------------------------------------------------


class UForm:
    """Laurent stack in the formal variable u with window coefficients.

    The grade of a term with u-power w and bidegree (r, s) is
    2 w + (dim M - r) + s; the twisted differential raises it by one.
    """

    def __init__(self, manifold, group, max_level: int, stacks: dict | None = None):
        self.manifold = manifold
        self.group = group
        self.max_level = max_level
        self.stacks = dict(stacks) if stacks else {}

    @staticmethod
    def from_window(window: CompatibleWindow, u_power: int = 0) -> "UForm":
        return UForm(
            window.manifold, window.group, window.max_level, {u_power: window}
        )

    def weights(self):
        return sorted(self.stacks)

    def window(self, u_power: int) -> CompatibleWindow:
        got = self.stacks.get(u_power)
        if got is None:
            return CompatibleWindow.zero(self.manifold, self.group, self.max_level)
        return got

    def u_shift(self, n: int) -> "UForm":
        return UForm(
            self.manifold,
            self.group,
            self.max_level,
            {w + n: win for w, win in self.stacks.items()},
        )

    def __add__(self, other: "UForm") -> "UForm":
        cap = min(self.max_level, other.max_level)
        out = {}
        for w in set(self.stacks) | set(other.stacks):
            a, b = self.stacks.get(w), other.stacks.get(w)
            if a is None:
                win = b
            elif b is None:
                win = a
            else:
                win = a + b
            out[w] = CompatibleWindow(self.manifold, self.group, cap, win.value)
        return UForm(self.manifold, self.group, cap, out)

    def __sub__(self, other: "UForm") -> "UForm":
        return self + other.scale(-1)

    def scale(self, c) -> "UForm":
        return UForm(
            self.manifold,
            self.group,
            self.max_level,
            {w: win.scale(c) for w, win in self.stacks.items()},
        )

    def is_zero(self) -> bool:
        return all(win.is_zero() for win in self.stacks.values())

    def __eq__(self, other):
        if not isinstance(other, UForm):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("UForm is lazy; not hashable")

    def grades(self, max_level: int | None = None) -> set:
        """All grades 2w + (dim M - r) + s present up to the level cap."""
        cap = self.max_level if max_level is None else min(max_level, self.max_level)
        dim = self.manifold.dim
        out = set()
        for w, win in self.stacks.items():
            for k in range(cap + 1):
                for gtuple in self.group.tuples(k):
                    for key in win.value(gtuple).terms:
                        out.add(2 * w + (dim - len(key[2])) + len(key[3]))
        return out

    def __repr__(self):
        return f"UForm(u-weights {self.weights()}, levels<= {self.max_level})"


class TwistTriple:
    """A closed compatible 3-form split into its u-weighted components.

    Values are checked lazily per tuple: the (0,3) part must vanish and the
    value must be killed by D + d'.  The component windows carry u-weights
    2, 1, 0 for the bidegrees (3,0), (2,1), (1,2).
    """

    def __init__(self, manifold, group, max_level: int, fn):
        self.manifold = manifold
        self.group = group
        self.max_level = max_level
        self._fn = fn
        self._full = CompatibleWindow(manifold, group, max_level, self._checked)

    def _checked(self, gtuple):
        val = self._fn(gtuple)
        if not val.component(0, 3).is_zero():
            raise WindowError("twist has a pure-simplex (0,3) part", witness=gtuple)
        if not (val.d_manifold() + val.d_simplex(True)).is_zero():
            raise WindowError("twist value is not closed", witness=gtuple)
        return val

    @staticmethod
    def from_gerbe(datum: GerbeDatum, max_level: int = 4) -> "TwistTriple":
        return TwistTriple(
            datum.manifold,
            datum.group,
            max_level,
            lambda gt: curvature3(datum, gt),
        )

    @staticmethod
    def zero(manifold, group, max_level: int = 4) -> "TwistTriple":
        return TwistTriple(
            manifold, group, max_level, lambda gt: Form.zero(manifold, len(gt))
        )

    def full(self) -> CompatibleWindow:
        return self._full

    def value(self, gtuple) -> Form:
        return self._full.value(gtuple)

    def stacks(self) -> dict:
        """{u-weight: component window} with weights 2, 1, 0."""
        return {
            2: self._full.component(3, 0),
            1: self._full.component(2, 1),
            0: self._full.component(1, 2),
        }

    def shift_by_gauge(self, eta: CompatibleWindow) -> "TwistTriple":
        """The twist T - (u D + d') eta_u seen by gauged stacks.

        In plain components this is T - (D + d') eta, since the u-weight of
        each piece is a function of its bidegree alone.
        """
        cap = min(self.max_level, eta.max_level)

        def fn(gtuple):
            a, b = _gauge_split(eta, gtuple)
            deta = (a + b).d_manifold() + (a + b).d_simplex(True)
            return self._fn(gtuple) - deta

        return TwistTriple(self.manifold, self.group, cap, fn)

    def verify(self, max_level: int | None = None) -> dict:
        """Closedness/shape report over all tuples up to the level cap."""
        cap = self.max_level if max_level is None else min(max_level, self.max_level)
        checks = []
        for k in range(cap + 1):
            failures = []
            for gtuple in self.group.tuples(k):
                try:
                    self.value(gtuple)
                except WindowError as err:
                    failures.append({"tuple": list(gtuple), "reason": str(err)})
            entry = {
                "id": f"twist_closed_no_pure_simplex[k={k}]",
                "status": "pass" if not failures else "fail",
            }
            if failures:
                entry["witness"] = failures
            checks.append(entry)
        status = "pass" if all(c["status"] == "pass" for c in checks) else "fail"
        return {"suite": "twist", "status": status, "checks": checks}


def d_twisted(xi: UForm, twist: TwistTriple) -> UForm:
    """The twisted differential u D + d' + T_u on a u-stack of windows."""
    out = {}

    def acc(w, window):
        got = out.get(w)
        out[w] = window if got is None else got + window

    components = twist.stacks()
    for w, win in xi.stacks.items():
        acc(w + 1, win.d_manifold())
        acc(w, win.d_simplex(True))
        for tw, comp in components.items():
            acc(w + tw, comp * win)
    cap = min(xi.max_level, twist.max_level)
    return UForm(xi.manifold, xi.group, cap, out)


# -- gauge transform ---------------------------------------------------------


def _gauge_split(eta: CompatibleWindow, gtuple) -> tuple:
    val = eta.value(gtuple)
    allowed = {(2, 0), (1, 1)}
    stray = [bd for bd in val.bidegrees() if bd not in allowed]
    if stray:
        raise WindowError(
            "gauge form must have only (2,0) and (1,1) parts",
            witness=(tuple(gtuple), stray),
        )
    return val.component(2, 0), val.component(1, 1)


def gauge_transform(xi: UForm, eta: CompatibleWindow) -> UForm:
    """Wedge with the finite exponential e^{-eta_u}, eta_u = u eta20 + eta11.

    Since every factor carries positive manifold degree, the exponential
    truncates at dim M factors; the result is exact.
    """
    dim = xi.manifold.dim
    powers = {}  # u-power p -> window sum_q (-1)^{p+q}/(p! q!) eta20^p eta11^q

    def power_window(p):
        if p not in powers:
            def fn(gtuple, p=p):
                a, b = _gauge_split(eta, gtuple)
                level = len(gtuple)
                acc = Form.zero(xi.manifold, level)
                for q in range(dim + 1):
                    coeff = Fraction((-1) ** (p + q), factorial(p) * factorial(q))
                    term = Form.scalar(xi.manifold, level, coeff)
                    for _ in range(p):
                        term = term * a
                    for _ in range(q):
                        term = term * b
                    acc = acc + term
                return acc

            powers[p] = CompatibleWindow(xi.manifold, xi.group, eta.max_level, fn)
        return powers[p]

    out = {}
    for w, win in xi.stacks.items():
        for p in range(dim // 2 + 1):
            shifted = power_window(p) * win
            got = out.get(w + p)
            out[w + p] = shifted if got is None else got + shifted
    cap = min(xi.max_level, eta.max_level)
    return UForm(xi.manifold, xi.group, cap, out)
