"""Finite groups acting affinely on the model manifold.

Elements are indices 0..n-1 with string labels.  The action of g sends
x to A_g x + b_g with A_g an integer matrix and b_g a rational translation
whose denominators divide the cyclotomic order, so that pullbacks of unit
trigonometric monomials stay inside Q(zeta_N)-combinations of monomials.

The convention throughout is the *right* translation action: functions pull
back as f^g(x) = f(x . g), hence (f^g)^h = f^{hg}.
"""

from __future__ import annotations

from fractions import Fraction


class GroupValidationError(ValueError):
    """Raised when group tables or action data are inconsistent; carries a witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class GroupData:
    """Multiplication table group with an affine action on the torus/point."""

    def __init__(self, labels, mult, actions=None, dim: int = 0, order: int = 1):
        self.labels = list(labels)
        self.size = len(self.labels)
        self.mult = tuple(tuple(row) for row in mult)
        self.dim = dim
        self.order = order  # cyclotomic order N governing allowed denominators
        if actions is None:
            ident = tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim))
            actions = [(ident, tuple(Fraction(0) for _ in range(dim)))] * self.size
        # translations live on the torus R^m / Z^m, so reduce them mod 1
        self.actions = [
            (tuple(tuple(int(x) for x in row) for row in mat), tuple(Fraction(t) % 1 for t in tr))
            for mat, tr in actions
        ]
        self._validate()
        self.identity = self._find_identity()
        self.inverse = self._find_inverses()

    # -- validation ---------------------------------------------------------

    def _validate(self):
        n = self.size
        if len(self.mult) != n or any(len(row) != n for row in self.mult):
            raise GroupValidationError("multiplication table is not square")
        for i in range(n):
            for j in range(n):
                if not (0 <= self.mult[i][j] < n):
                    raise GroupValidationError(
                        "multiplication table entry out of range", witness=(i, j)
                    )
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.mult[self.mult[i][j]][k] != self.mult[i][self.mult[j][k]]:
                        raise GroupValidationError(
                            "multiplication table is not associative",
                            witness=(self.labels[i], self.labels[j], self.labels[k]),
                        )
        if len(self.actions) != n:
            raise GroupValidationError("need one affine action per element")
        for g, (mat, tr) in enumerate(self.actions):
            if len(mat) != self.dim or any(len(row) != self.dim for row in mat):
                raise GroupValidationError("action matrix has wrong shape", witness=self.labels[g])
            if len(tr) != self.dim:
                raise GroupValidationError("translation has wrong length", witness=self.labels[g])
            for t in tr:
                if (t * self.order).denominator != 1:
                    raise GroupValidationError(
                        f"translation denominator of {t} does not divide the cyclotomic order",
                        witness=self.labels[g],
                    )
        # x.(gh) = (x.g).h  <=>  A_{gh} = A_h A_g and b_{gh} = A_h b_g + b_h
        for g in range(n):
            for h in range(n):
                gh = self.mult[g][h]
                mg, bg = self.actions[g]
                mh, bh = self.actions[h]
                mgh, bgh = self.actions[gh]
                comp = _mat_mul(mh, mg)
                trans = tuple(
                    (sum(Fraction(mh[i][j]) * bg[j] for j in range(self.dim)) + bh[i]) % 1
                    for i in range(self.dim)
                )
                if comp != mgh or trans != bgh:
                    raise GroupValidationError(
                        "affine action is not a right action",
                        witness=(self.labels[g], self.labels[h]),
                    )

    def _find_identity(self) -> int:
        for e in range(self.size):
            if all(self.mult[e][g] == g and self.mult[g][e] == g for g in range(self.size)):
                return e
        raise GroupValidationError("no identity element")

    def _find_inverses(self):
        inv = [None] * self.size
        e = self.identity
        for g in range(self.size):
            for h in range(self.size):
                if self.mult[g][h] == e and self.mult[h][g] == e:
                    inv[g] = h
                    break
            if inv[g] is None:
                raise GroupValidationError("element has no inverse", witness=self.labels[g])
        return tuple(inv)

    # -- basic API -----------------------------------------------------------

    def mul(self, g: int, h: int) -> int:
        return self.mult[g][h]

    def prod(self, gs) -> int:
        acc = self.identity
        for g in gs:
            acc = self.mult[acc][g]
        return acc

    def inv(self, g: int) -> int:
        return self.inverse[g]

    def elements(self):
        return range(self.size)

    def tuples(self, k: int):
        """All k-tuples of elements, lexicographic in indices."""
        if k == 0:
            yield ()
            return
        for rest in self.tuples(k - 1):
            for g in range(self.size):
                yield rest + (g,)

    # -- action on frequencies / coordinates ---------------------------------

    def act_freq(self, g: int, freq: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
        """Pull back the monomial e_freq along x -> x.g.

        Returns (zeta_shift, new_freq) with e_freq^g = zeta^shift * e_new_freq;
        the shift is N * freq . b_g, an integer by the denominator constraint.
        """
        mat, tr = self.actions[g]
        new = tuple(
            sum(mat[i][j] * freq[i] for i in range(self.dim)) for j in range(self.dim)
        )
        shift = self.order * sum(Fraction(freq[i]) * tr[i] for i in range(self.dim))
        if shift.denominator != 1:
            raise ArithmeticError("frequency/translation pairing left the integers")
        return int(shift), new

    def dx_pullback_row(self, g: int, i: int) -> tuple[int, ...]:
        """Coefficients of the pullback of dx_i along x -> x.g: row i of A_g."""
        mat, _ = self.actions[g]
        return mat[i]

    def __repr__(self):
        return f"GroupData({self.size} elements, dim {self.dim}, order {self.order})"


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


# -- convenient constructors ---------------------------------------------------


def cyclic_group(n: int, dim: int = 0, order: int = 1, translations=None, matrices=None):
    """Z/n with optional per-generator-power affine action."""
    labels = [str(k) for k in range(n)]
    mult = [[(i + j) % n for j in range(n)] for i in range(n)]
    if translations is None and matrices is None:
        return GroupData(labels, mult, None, dim=dim, order=order)
    actions = []
    for k in range(n):
        if matrices is not None:
            mat = matrices[k]
        else:
            mat = tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim))
        tr = translations[k] if translations is not None else tuple(Fraction(0) for _ in range(dim))
        actions.append((mat, tr))
    return GroupData(labels, mult, actions, dim=dim, order=order)


def product_of_cyclics(ns, dim: int = 0, order: int = 1):
    """Direct product Z/n1 x ... x Z/nk with the trivial action."""
    tuples = [()]
    for n in ns:
        tuples = [t + (i,) for t in tuples for i in range(n)]
    index = {t: i for i, t in enumerate(tuples)}
    labels = [repr(t) for t in tuples]
    mult = [
        [index[tuple((a + b) % n for a, b, n in zip(t1, t2, ns))] for t2 in tuples]
        for t1 in tuples
    ]
    g = GroupData(labels, mult, None, dim=dim, order=order)
    g.tuple_labels = tuples
    return g
