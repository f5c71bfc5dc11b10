"""Gerbe data on a translation groupoid and derived curvature cocycles.

A datum consists of connection potentials a_g (scalar 1-forms on M, one
per group element, in the trivialization of the line bundle over the
arrow space) and multiplier units lambda(g, h) = zeta^m e_k implementing
the associative multiplication over composable pairs.  From these the
package derives

* the discrepancy 1-forms  alpha(g, h) = a_{gh} + Dlog lambda(g, h)
  - a_g - (a_h)^g,
* the curvature 2-forms    theta_g = D a_g,

which together represent the Dixmier-Douady class of the datum.  All
forms use the normalized derivative D (see forms module), so Dlog of a
unit zeta^m e_k is the integer-coefficient 1-form sum_j k_j dx_j.
"""

from __future__ import annotations

from .forms import Form
from .groups import GroupData
from .manifold import ModelManifold, Unit


class GerbeError(ValueError):
    """Malformed gerbe data; carries a witness tuple."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class GerbeDatum:
    """Potentials a_g and multiplier units lambda(g, h) over a finite group."""

    def __init__(self, manifold: ModelManifold, group: GroupData, a, lam):
        self.manifold = manifold
        self.group = group
        self.a = list(a)
        self.lam = dict(lam)
        e = group.identity
        if len(self.a) != group.size:
            raise GerbeError("need one potential per group element")
        for g, form in enumerate(self.a):
            if form.manifold != manifold or form.level != 0:
                raise GerbeError("potential on the wrong space", witness=group.labels[g])
            if form.bidegrees() - {(1, 0)}:
                raise GerbeError("potential is not a 1-form", witness=group.labels[g])
        if not self.a[e].is_zero():
            raise GerbeError("potential of the identity arrow must vanish")
        for g in group.elements():
            for h in group.elements():
                u = self.lam.get((g, h))
                if not isinstance(u, Unit) or u.order != manifold.order:
                    raise GerbeError("multiplier table incomplete", witness=(g, h))
        for g in group.elements():
            if not self.lam[(e, g)].is_one() or not self.lam[(g, e)].is_one():
                raise GerbeError(
                    "multiplier not normalized at the identity", witness=group.labels[g]
                )

    # -- derived forms ------------------------------------------------------

    def dlog(self, unit: Unit) -> Form:
        """Normalized logarithmic derivative of a unit: sum_j k_j dx_j."""
        out = Form(self.manifold, 0)
        for j, kj in enumerate(unit.freq):
            if kj:
                out = out + Form.dx(self.manifold, 0, j + 1).scale(kj)
        return out

    def alpha(self, g: int, h: int) -> Form:
        """Discrepancy 1-form of the pair (g, h)."""
        return (
            self.a[self.group.mul(g, h)]
            + self.dlog(self.lam[(g, h)])
            - self.a[g]
            - self.a[h].act_group(self.group, g)
        )

    def theta(self, g: int) -> Form:
        """Curvature 2-form of the arrow g."""
        return self.a[g].d_manifold()

    # -- verification -------------------------------------------------------

    def verify(self) -> dict:
        """Run every defining identity; failures carry explicit witnesses."""
        checks = []
        grp = self.group

        def record(check_id, ok, witness=None):
            entry = {"id": check_id, "status": "pass" if ok else "fail"}
            if not ok and witness is not None:
                entry["witness"] = witness
            checks.append(entry)

        ok, witness = True, None
        for g in grp.elements():
            for h in grp.elements():
                for x in grp.elements():
                    lhs = self.lam[(g, h)] * self.lam[(grp.mul(g, h), x)]
                    rhs = self.lam[(g, grp.mul(h, x))] * self.lam[(h, x)].act(grp, g)
                    if lhs != rhs:
                        ok, witness = False, [grp.labels[g], grp.labels[h], grp.labels[x]]
                        break
                if not ok:
                    break
            if not ok:
                break
        record("multiplier_associativity", ok, witness)

        ok, witness = True, None
        for g in grp.elements():
            for h in grp.elements():
                lhs = (
                    self.theta(g)
                    + self.theta(h).act_group(grp, g)
                    - self.theta(grp.mul(g, h))
                )
                if lhs != -self.alpha(g, h).d_manifold():
                    ok, witness = False, [grp.labels[g], grp.labels[h]]
                    break
            if not ok:
                break
        record("curvature_discrepancy_relation", ok, witness)

        ok, witness = True, None
        for g in grp.elements():
            if not self.theta(g).d_manifold().is_zero():
                ok, witness = False, grp.labels[g]
                break
        record("curvature_closed", ok, witness)

        ok, witness = self._alpha_cocycle_identity()
        record("alpha_cocycle_identity", ok, witness)

        return {
            "suite": "gerbe",
            "status": "pass" if all(c["status"] == "pass" for c in checks) else "fail",
            "checks": checks,
        }

    def _alpha_cocycle_identity(self):
        """Segment identity for alpha over all triples and cut positions.

        For a tuple (g_1, .., g_j) and 1 <= i < j, with partial products
        p = g_2..g_i, q = g_{i+1}..g_j, s = g_1 p:
            alpha(g_1, p) - alpha(g_1, p q) + alpha(s, q) = alpha(p, q)^{g_1}.
        The (i, j) = (2, 3) case is the plain degree-2 cocycle identity.
        """
        grp = self.group
        for j in (2, 3):
            for tup in grp.tuples(j):
                for i in range(1, j):
                    g1 = tup[0]
                    p = grp.prod(tup[1:i])
                    q = grp.prod(tup[i:])
                    lhs = (
                        self.alpha(g1, p)
                        - self.alpha(g1, grp.mul(p, q))
                        + self.alpha(grp.mul(g1, p), q)
                    )
                    rhs = self.alpha(p, q).act_group(grp, g1)
                    if lhs != rhs:
                        return False, {
                            "tuple": [grp.labels[g] for g in tup],
                            "cut": i,
                        }
        return True, None


class DDCocycle:
    """The derived pair (alpha, theta) as explicit tables."""

    def __init__(self, datum: GerbeDatum):
        grp = datum.group
        self.alpha = {
            (g, h): datum.alpha(g, h) for g in grp.elements() for h in grp.elements()
        }
        self.theta = {g: datum.theta(g) for g in grp.elements()}


def dd_from_curvature(datum: GerbeDatum, curvature_fn) -> tuple:
    """Cross-check the simplex integrals of the curvature 3-form window.

    ``curvature_fn`` maps a group tuple to the 3-form at that level.  The
    level-1 fibre integrals must reproduce theta, the level-2 ones alpha,
    and every level-3 integral must vanish; the return value is the
    (DDCocycle, report) pair.
    """
    grp = datum.group
    checks = []

    def record(check_id, ok, witness=None):
        entry = {"id": check_id, "status": "pass" if ok else "fail"}
        if not ok and witness is not None:
            entry["witness"] = witness
        checks.append(entry)

    ok, witness = True, None
    for (g,) in grp.tuples(1):
        got = curvature_fn((g,)).integrate_simplex()
        if got != datum.theta(g):
            ok, witness = False, grp.labels[g]
            break
    record("level1_integral_is_theta", ok, witness)

    ok, witness = True, None
    for pair in grp.tuples(2):
        got = curvature_fn(pair).integrate_simplex()
        if got != datum.alpha(*pair):
            ok, witness = False, [grp.labels[g] for g in pair]
            break
    record("level2_integral_is_alpha", ok, witness)

    ok, witness = True, None
    for triple in grp.tuples(3):
        if not curvature_fn(triple).integrate_simplex().is_zero():
            ok, witness = False, [grp.labels[g] for g in triple]
            break
    record("level3_integral_vanishes", ok, witness)

    report = {
        "suite": "dixmier_douady",
        "status": "pass" if all(c["status"] == "pass" for c in checks) else "fail",
        "checks": checks,
    }
    return DDCocycle(datum), report
