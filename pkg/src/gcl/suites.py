"""Named verification suites over a scenario, each producing a report dict.

Every suite returns {"suite": name, "status": "pass"|"fail", "checks":
[{"id", "status", optional "witness"}, ..]} with exact (zero-tolerance)
equality behind every check.  Randomized laws draw from a seeded
generator, so reports are deterministic given (scenario, seed); sample
counts are free parameters with acceptance-grade defaults.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import sampling
from .endo import (
    EndMatrix,
    curvature3,
    curvature3_via_nabla,
    graded_commutator,
    nabla_apply,
    vartheta,
)
from .forms import Form
from .gerbe import DDCocycle, dd_from_curvature
from .homology import (
    B_apply,
    b_apply,
    boundary_bB,
    check_invariant,
    delta_group,
    delta_group_primed,
    delta_homog,
    delta_homog_primed,
    group_average,
    homotopy_h,
    psi0,
    psi0_inverse,
    psi1,
    psi2,
    vertical_boundary,
)
from .jlo import composite_pair, tau_chain_check
from .windows import (
    CompatibleWindow,
    TwistTriple,
    UForm,
    check_compatible,
    d_twisted,
    invariant_extend,
)

DEFAULT_SAMPLES = {"cdga": 100, "vartheta": 20, "homological": 20}


def _finish(name: str, checks: list) -> dict:
    status = "pass" if all(c["status"] == "pass" for c in checks) else "fail"
    return {"suite": name, "status": status, "checks": checks}


def _law(checks: list, law_id: str, witness) -> None:
    entry = {"id": law_id, "status": "pass" if witness is None else "fail"}
    if witness is not None:
        entry["witness"] = witness
    checks.append(entry)


def _adopt(checks: list, report: dict, prefix: str) -> None:
    for entry in report["checks"]:
        checks.append({**entry, "id": f"{prefix}:{entry['id']}"})


def _uform_one(manifold, group, max_level: int) -> UForm:
    window = CompatibleWindow(
        manifold, group, max_level, lambda gt: Form.one(manifold, len(gt))
    )
    return UForm.from_window(window, 0)


# -- graded algebra laws --------------------------------------------------------------


def cdga_suite(manifold, seed: int = 0, samples: int | None = None) -> dict:
    """Derivative and integration laws on randomized sparse forms.

    Squares of both derivatives vanish, the normalized manifold
    derivative anticommutes with the signed simplex derivative, both
    satisfy the graded Leibniz rule, and the unsigned simplex derivative
    obeys Stokes against the boundary integral.  One check per law,
    ``samples`` random forms each.
    """
    if samples is None:
        samples = DEFAULT_SAMPLES["cdga"]
    rng = random.Random(seed)
    checks = []

    def sweep(law_id, trial):
        witness = None
        for i in range(samples):
            bad = trial()
            if bad is not None:
                witness = {"sample": i, **bad}
                break
        _law(checks, f"{law_id}[samples={samples}]", witness)

    def form(level=None, **kw):
        if level is None:
            level = rng.randint(1, 2)
        return sampling.random_form(rng, manifold, level, nterms=3, **kw), level

    def d_squared():
        w, _ = form()
        if not w.d_manifold().d_manifold().is_zero():
            return {"form": w.to_terms()}
        return None

    sweep("d_manifold_squared", d_squared)

    def dt_squared():
        w, _ = form()
        if not w.d_simplex(True).d_simplex(True).is_zero():
            return {"form": w.to_terms()}
        return None

    sweep("d_simplex_squared", dt_squared)

    def anticommute():
        w, _ = form()
        mixed = w.d_manifold().d_simplex(True) + w.d_simplex(True).d_manifold()
        if not mixed.is_zero():
            return {"form": w.to_terms()}
        return None

    sweep("derivative_anticommutation", anticommute)

    def leibniz():
        level = rng.randint(1, 2)
        r = rng.randint(0, min(1, manifold.dim))
        s = rng.randint(0, 1)
        a = sampling.random_form(rng, manifold, level, r=r, s=s, nterms=2)
        b = sampling.random_form(rng, manifold, level, nterms=2)
        sign = -1 if (r + s) % 2 else 1
        if (a * b).d_manifold() != a.d_manifold() * b + (a * b.d_manifold()).scale(sign):
            return {"rule": "d_manifold", "a": a.to_terms(), "b": b.to_terms()}
        if (a * b).d_simplex(True) != a.d_simplex(True) * b + (
            a * b.d_simplex(True)
        ).scale(sign):
            return {"rule": "d_simplex", "a": a.to_terms(), "b": b.to_terms()}
        return None

    sweep("graded_leibniz", leibniz)

    def stokes():
        level = rng.randint(1, 3)
        w = sampling.random_form(rng, manifold, level, s=level - 1, nterms=2)
        if w.d_simplex(False).integrate_simplex() != w.boundary_integral():
            return {"form": w.to_terms(), "level": level}
        return None

    sweep("stokes_on_simplex", stokes)

    return _finish("cdga", checks)


# -- gerbe-level suites ---------------------------------------------------------------


def gerbe_suite(scenario) -> dict:
    """The defining gerbe identities, exhaustively over the group."""
    return scenario.datum.verify()


def dd_tables(scenario) -> tuple:
    """(tables, report): the (alpha, theta) cocycle and its integral checks.

    The curvature window's level-1 fibre integrals must reproduce theta,
    the level-2 ones alpha, and the level-3 ones vanish; the tables are
    serialized term lists keyed by group labels.
    """
    datum = scenario.datum
    grp = scenario.group
    cocycle, report = dd_from_curvature(datum, lambda gt: curvature3(datum, gt))
    tables = {
        "alpha": [
            {
                "pair": [grp.labels[g], grp.labels[h]],
                "terms": cocycle.alpha[(g, h)].to_terms(),
            }
            for g in grp.elements()
            for h in grp.elements()
        ],
        "theta": [
            {"element": grp.labels[g], "terms": cocycle.theta[g].to_terms()}
            for g in grp.elements()
        ],
    }
    return tables, report


def vartheta_suite(scenario, seed: int | None = None, samples: int | None = None,
                   max_level: int | None = None) -> dict:
    """The simplicial 2-form and curvature 3-form window theorems.

    Face compatibility of both windows, closedness of the twist,
    (nabla)^2 = [vartheta, .] on sampled sections per tuple, agreement of
    the closed curvature formula with the nabla route, and the simplex
    integrals recovering (alpha, theta).
    """
    datum = scenario.datum
    man, grp = scenario.manifold, scenario.group
    if seed is None:
        seed = scenario.seed
    if samples is None:
        samples = DEFAULT_SAMPLES["vartheta"]
    if max_level is None:
        max_level = scenario.truncation["max_level"]
    rng = random.Random(seed)
    checks = []

    two_form = CompatibleWindow(man, grp, max_level, lambda gt: vartheta(datum, gt))
    _adopt(checks, check_compatible(two_form), "two_form")
    three_form = CompatibleWindow(man, grp, max_level, lambda gt: curvature3(datum, gt))
    _adopt(checks, check_compatible(three_form), "three_form")
    _adopt(checks, TwistTriple.from_gerbe(datum, max_level=max_level).verify(), "twist")

    for k in (1, 2):
        if k > max_level:
            break
        witness = None
        for gtuple in grp.tuples(k):
            theta = vartheta(datum, gtuple)
            for i in range(samples):
                a = sampling.random_end_section(rng, datum, level=k, entries=2)
                twice = nabla_apply(datum, gtuple, nabla_apply(datum, gtuple, a))
                if twice != graded_commutator(theta, a, 0):
                    witness = {"tuple": list(gtuple), "sample": i}
                    break
            if witness:
                break
        _law(checks, f"nabla_squared_is_vartheta_bracket[k={k},samples={samples}]",
             witness)

    for k in range(1, max_level + 1):
        witness = None
        for gtuple in grp.tuples(k):
            if curvature3(datum, gtuple) != curvature3_via_nabla(datum, gtuple):
                witness = {"tuple": list(gtuple)}
                break
        _law(checks, f"curvature_matches_nabla_route[k={k}]", witness)

    _, integrals = dd_from_curvature(datum, lambda gt: curvature3(datum, gt))
    _adopt(checks, integrals, "integrals")

    return _finish("vartheta", checks)


# -- homological identities -----------------------------------------------------------


def _hom_args(rng, datum, n):
    if rng.getrandbits(1):
        return sampling.random_matched_args(rng, datum, n, scalar=True)
    return sampling.random_end_args(rng, datum, n)


def homological_suite(scenario, seed: int | None = None,
                      samples: int | None = None) -> dict:
    """Cyclic and group coboundary laws and the comparison morphisms.

    b and B square to zero and anticommute (B on normalized cochains),
    both group coboundaries and their primed variants square to zero, the
    contracting homotopy satisfies delta~ h + h delta~ = 1, psi0 round
    trips and intertwines the coboundaries, psi1 is an invariant chain
    map, and psi2 commutes with b and B on invariant diagonal cochains.
    One check per law, ``samples`` seeded draws each.
    """
    datum = scenario.datum
    grp = scenario.group
    if seed is None:
        seed = scenario.seed
    if samples is None:
        samples = DEFAULT_SAMPLES["homological"]
    rng = random.Random(seed)
    checks = []

    def tup(n):
        return tuple(rng.randrange(grp.size) for _ in range(n))

    def sweep(law_id, trial):
        witness = None
        for i in range(samples):
            if not trial():
                witness = {"sample": i}
                break
        _law(checks, f"{law_id}[samples={samples}]", witness)

    def b_squared():
        c = sampling.random_trace_cochain(rng, datum, normalized=False, diagonal=False)
        args = sampling.random_end_args(rng, datum, rng.randint(1, 3))
        return b_apply(b_apply(c))(*args).is_zero()

    sweep("b_squared", b_squared)

    def cyclic_normalized():
        c = sampling.random_trace_cochain(
            rng, datum, normalized=True, diagonal=bool(rng.getrandbits(1))
        )
        args = sampling.random_end_args(rng, datum, rng.randint(0, 2))
        return (
            B_apply(B_apply(c))(*args).is_zero()
            and (b_apply(B_apply(c)) + B_apply(b_apply(c)))(*args).is_zero()
            and boundary_bB(boundary_bB(c))(*args).is_zero()
        )

    sweep("B_squared_and_anticommutation", cyclic_normalized)

    def group_squares():
        ci = sampling.random_group_cochain(rng, datum, 1, homogeneous=False)
        ch = sampling.random_group_cochain(rng, datum, 1, homogeneous=True)
        args = _hom_args(rng, datum, rng.randint(0, 2))
        return (
            delta_group(delta_group(ci)).value(tup(3))(*args).is_zero()
            and delta_homog(delta_homog(ch)).value(tup(4))(*args).is_zero()
            and delta_group_primed(delta_group_primed(ci)).value(tup(3))(*args).is_zero()
            and delta_homog_primed(delta_homog_primed(ch)).value(tup(4))(*args).is_zero()
        )

    sweep("group_coboundaries_square_to_zero", group_squares)

    def homotopy():
        garity = rng.randint(1, 2)
        f = sampling.random_group_cochain(rng, datum, garity, homogeneous=True)
        lhs = delta_homog(homotopy_h(f)) + homotopy_h(delta_homog(f))
        gt = tup(garity + 1)
        args = _hom_args(rng, datum, rng.randint(0, 2))
        return (lhs.value(gt)(*args) - f.value(gt)(*args)).is_zero()

    sweep("contracting_homotopy_identity", homotopy)

    def psi0_round_trip():
        c = sampling.random_group_cochain(rng, datum, 1, homogeneous=False)
        args = _hom_args(rng, datum, 1)
        back = psi0_inverse(psi0(c))
        gt = tup(1)
        if not (back.value(gt)(*args) - c.value(gt)(*args)).is_zero():
            return False
        F = psi0(c)
        FF = psi0(psi0_inverse(F))
        gt2 = tup(2)
        return (FF.value(gt2)(*args) - F.value(gt2)(*args)).is_zero()

    sweep("psi0_round_trip", psi0_round_trip)

    def psi0_intertwines():
        k = rng.randint(0, 1)
        c = sampling.random_group_cochain(rng, datum, k, homogeneous=False)
        gt = tup(k + 2)
        args = _hom_args(rng, datum, rng.randint(0, 1))
        plain = psi0(delta_group(c)).value(gt)(*args) - delta_homog(psi0(c)).value(gt)(
            *args
        )
        primed = psi0(delta_group_primed(c)).value(gt)(*args) - delta_homog_primed(
            psi0(c)
        ).value(gt)(*args)
        return plain.is_zero() and primed.is_zero()

    sweep("psi0_intertwines_coboundaries", psi0_intertwines)

    def psi1_chain_map():
        k = rng.randint(0, 1)
        sign = rng.choice((1, -1))
        c = sampling.random_group_cochain(rng, datum, k, homogeneous=True)
        lhs = vertical_boundary(psi1(c, sign), sign)
        rhs = psi1(delta_homog(c), sign) + psi1(vertical_boundary(c, sign), sign)
        gt = tup(1)
        args = _hom_args(rng, datum, rng.randint(0, 2))
        return (lhs.value(gt)(*args) - rhs.value(gt)(*args)).is_zero()

    sweep("psi1_chain_map", psi1_chain_map)

    def psi1_invariant():
        k = rng.randint(0, 2)
        c = sampling.random_group_cochain(rng, datum, k, homogeneous=True)
        out = psi1(c)
        args = _hom_args(rng, datum, rng.randint(0, 1))
        base = out.value((grp.identity,))(*args)
        other = out.value((rng.randrange(grp.size),))(*args)
        return (base - other).is_zero()

    sweep("psi1_lands_in_invariants", psi1_invariant)

    def psi2_commutes():
        c = group_average(sampling.random_trace_cochain(rng, datum))
        image = psi2(c)
        n = rng.randint(1, 2)
        args = sampling.random_conv_args(rng, datum, n)
        hoch = b_apply(image)(*args) - psi2(b_apply(c), check_invariance=False)(*args)
        if not hoch.is_zero():
            return False
        args0 = sampling.random_conv_args(rng, datum, n - 1)
        connes = B_apply(image)(*args0) - psi2(
            B_apply(c), check_invariance=False
        )(*args0)
        return connes.is_zero()

    sweep("psi2_commutes_with_cyclic_boundaries", psi2_commutes)

    witness = None
    for trial in range(8):
        raw = sampling.random_trace_cochain(random.Random(seed + 7 + trial), datum)
        try:
            check_invariant(raw)
            continue  # accidentally invariant; cannot witness a refusal
        except ValueError:
            pass
        try:
            psi2(raw)
            witness = {"reason": "noninvariant cochain accepted", "trial": trial}
        except ValueError:
            try:
                psi2(group_average(raw))
            except ValueError:
                witness = {"reason": "averaged cochain rejected", "trial": trial}
        break
    _law(checks, "psi2_requires_invariance", witness)

    return _finish("homological", checks)


# -- the JLO grid and the composite ---------------------------------------------------


def chain_suite(scenario, seed: int | None = None, max_arity: int | None = None,
                max_level: int | None = None) -> dict:
    """The JLO chain identity over a grid of inputs and group arities.

    Inputs are the constant window 1, the invariant volume character dx
    (when the base has positive dimension), and the twisted differential
    of 1 (whose image must be annihilated by the right-hand side); each
    is checked at group arities k <= 2 by default on seeded argument
    tuples of cyclic arity <= 1.
    """
    datum = scenario.datum
    man, grp = scenario.manifold, scenario.group
    if seed is None:
        seed = scenario.seed
    if max_arity is None:
        max_arity = min(2, scenario.truncation["max_level"])
    cap = scenario.truncation.get("exp_order_cap")
    window_cap = max_arity + 2
    twist = TwistTriple.from_gerbe(datum, max_level=window_cap)
    omegas = [("one", _uform_one(man, grp, window_cap))]
    if man.dim >= 1:
        omegas.append(
            (
                "invariant_dx",
                UForm.from_window(
                    invariant_extend(man, grp, Form.dx(man, 0, 1), window_cap), 0
                ),
            )
        )
    omegas.append(("d_one", d_twisted(omegas[0][1], twist)))
    checks = []
    for name, omega in omegas:
        for k in range(max_arity + 1):
            report = tau_chain_check(
                datum, omega, k, seed=seed + k, cap=cap, twist=twist
            )
            for entry in report["checks"]:
                checks.append(
                    {
                        **entry,
                        "id": entry["id"].replace(
                            "jlo_chain[", f"jlo_chain[omega={name},"
                        ),
                    }
                )
    return _finish("jlo_chain", checks)


def pair_suite(scenario, args_list=None, seed: int | None = None,
               max_arity: int | None = None) -> tuple:
    """(values, report) for the composite cocycle on convolution tuples.

    Defaults evaluate on seeded tuples of cyclic arity up to 2 and check
    the composite chain identity on the same tuples.
    """
    datum = scenario.datum
    if seed is None:
        seed = scenario.seed
    if max_arity is None:
        max_arity = min(2, scenario.truncation["max_arity"])
    if args_list is None:
        rng = random.Random(seed + 977)
        args_list = [
            sampling.random_conv_args(rng, datum, n) for n in range(max_arity + 1)
        ]
    max_garity = datum.manifold.dim + 2
    omega = _uform_one(scenario.manifold, scenario.group, max_garity + 2)
    cap = scenario.truncation.get("exp_order_cap")
    return composite_pair(
        datum, omega, args_list=args_list, seed=seed, max_garity=max_garity, cap=cap
    )


# -- orchestration --------------------------------------------------------------------


def run_command(command: str, scenario, seed: int | None = None,
                max_level: int | None = None, max_arity: int | None = None,
                args_list=None) -> tuple:
    """(suite reports, extras) for one CLI command.

    ``verify`` runs the gerbe, window, and homological suites; ``dd``
    the curvature integrals (with tables in the extras); ``chain-check``
    the JLO grid; ``pair`` the composite (with values in the extras);
    ``all`` every suite including the cdga laws.
    """
    suites = []
    extras = {}
    if command in ("verify", "all"):
        if command == "all":
            suites.append(
                cdga_suite(scenario.manifold,
                           seed=scenario.seed if seed is None else seed)
            )
        suites.append(gerbe_suite(scenario))
        suites.append(vartheta_suite(scenario, seed=seed, max_level=max_level))
        suites.append(homological_suite(scenario, seed=seed))
    if command in ("dd", "all"):
        tables, report = dd_tables(scenario)
        suites.append(report)
        extras["dd"] = tables
    if command in ("chain-check", "all"):
        suites.append(
            chain_suite(scenario, seed=seed, max_arity=max_arity,
                        max_level=max_level)
        )
    if command in ("pair", "all"):
        values, report = pair_suite(
            scenario, args_list=args_list, seed=seed, max_arity=max_arity
        )
        suites.append(report)
        extras["values"] = values
    if not suites:
        raise ValueError(f"unknown command {command!r}")
    return suites, extras
