"""Window compatibility, the twisted differential, and gauge transforms."""

import random

import pytest

from gcl.endo import curvature3, vartheta
from gcl.forms import Form
from gcl.sampling import random_form
from gcl.scenarios import build
from gcl.windows import (
    CompatibleWindow,
    TwistTriple,
    UForm,
    WindowError,
    check_compatible,
    d_twisted,
    gauge_transform,
    invariant_extend,
    nerve_face,
)


# -- nerve faces ---------------------------------------------------------


def test_nerve_faces_drop_and_merge():
    sc = build("nct3")
    grp = sc.group
    a, b, c = grp.elements()[1], grp.elements()[2], grp.elements()[3]
    assert nerve_face(grp, (a, b, c), 0) == (b, c)
    assert nerve_face(grp, (a, b, c), 1) == (grp.mul(a, b), c)
    assert nerve_face(grp, (a, b, c), 2) == (a, grp.mul(b, c))
    assert nerve_face(grp, (a, b, c), 3) == (a, b)
    with pytest.raises(IndexError):
        nerve_face(grp, (a, b), 3)


def test_face_identities_match_simplex_relations():
    # d_i d_j = d_{j-1} d_i for i < j, spot-checked exhaustively at k = 3.
    sc = build("nct3")
    grp = sc.group
    for gtuple in grp.tuples(3):
        for j in range(1, 4):
            for i in range(j):
                one = nerve_face(grp, nerve_face(grp, gtuple, j), i)
                two = nerve_face(grp, nerve_face(grp, gtuple, i), j - 1)
                assert one == two


# -- constant windows ----------------------------------------------------


def test_invariant_extension_is_compatible():
    sc = build("t1z2")
    beta = Form.e(sc.manifold, 0, (0,)) * Form.dx(sc.manifold, 0, 1)
    window = invariant_extend(sc.manifold, sc.group, beta, max_level=3)
    report = check_compatible(window)
    assert report["status"] == "pass"
    assert all(c["status"] == "pass" for c in report["checks"])


def test_non_invariant_form_rejected_with_witness():
    sc = build("t1z2")
    beta = Form.e(sc.manifold, 0, (1,))  # picks up a sign under x -> x + 1/2
    with pytest.raises(WindowError) as err:
        invariant_extend(sc.manifold, sc.group, beta)
    assert err.value.witness == 1


def test_only_level_zero_forms_extend():
    sc = build("t1z2")
    with pytest.raises(WindowError):
        invariant_extend(sc.manifold, sc.group, Form.one(sc.manifold, 1))


def test_level_cap_enforced():
    sc = build("pointz2")
    window = CompatibleWindow.zero(sc.manifold, sc.group, 2)
    with pytest.raises(WindowError):
        window.value((0, 1, 0))


def test_incompatible_window_fails_exactly_at_front_face():
    sc = build("t1z2")
    man, grp = sc.manifold, sc.group
    beta = Form.e(man, 1, (1,))
    tables = {
        (g,): Form.t(man, 1, 1) * (beta - beta.act_group(grp, g))
        for g in grp.elements()
    }
    window = CompatibleWindow.from_tables(man, grp, 1, tables)
    report = check_compatible(window)
    assert report["status"] == "fail"
    by_id = {c["id"]: c for c in report["checks"]}
    assert by_id["face_compatibility[k=1,i=1]"]["status"] == "pass"
    bad = by_id["face_compatibility[k=1,i=0]"]
    assert bad["status"] == "fail"
    assert bad["witness"][0]["tuple"] == [1]


# -- the connection and curvature windows --------------------------------


@pytest.mark.parametrize("name", ["pointz2", "t1z2", "nct3", "t2z2"])
def test_simplicial_two_form_window_is_compatible(name):
    sc = build(name)
    window = CompatibleWindow(
        sc.manifold, sc.group, 3, lambda gt: vartheta(sc.datum, gt)
    )
    report = check_compatible(window)
    assert report["status"] == "pass"


@pytest.mark.parametrize("name", ["pointz2", "t1z2", "nct3", "t2z2"])
def test_curvature_window_is_compatible(name):
    sc = build(name)
    window = CompatibleWindow(
        sc.manifold, sc.group, 3, lambda gt: curvature3(sc.datum, gt)
    )
    report = check_compatible(window)
    assert report["status"] == "pass"


def _alpha_beta_sum(datum, gtuple):
    man, grp = datum.manifold, datum.group
    k = len(gtuple)
    prefixes = [grp.prod(gtuple[:i]) for i in range(k + 1)]
    out = Form.zero(man, k)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            seg = grp.prod(gtuple[i:j])
            beta = Form.t(man, k, i) * Form.dt(man, k, j) - Form.t(
                man, k, j
            ) * Form.dt(man, k, i)
            out = out + datum.alpha(prefixes[i], seg).lift(k) * beta
    return out


def test_flipped_alpha_beta_sign_breaks_two_form_compatibility():
    # Sign-pinning regression: subtracting the alpha-beta sum twice (i.e.
    # flipping its sign in the two-form) breaks the front-face identity at
    # level two by exactly -2 alpha ds1.
    sc = build("t1z2")
    datum = sc.datum

    def wrong(gtuple):
        value = vartheta(datum, gtuple)
        correction = _alpha_beta_sum(datum, gtuple).scale(2)
        from gcl.endo import EndMatrix

        return value - EndMatrix.scalar_matrix(datum, len(gtuple), correction)

    report = check_compatible(CompatibleWindow(sc.manifold, sc.group, 2, wrong))
    by_id = {c["id"]: c for c in report["checks"]}
    assert by_id["face_compatibility[k=2,i=0]"]["status"] == "fail"
    assert by_id["face_compatibility[k=2,i=1]"]["status"] == "pass"
    assert by_id["face_compatibility[k=2,i=2]"]["status"] == "pass"


def test_flipped_curvature_signs_break_compatibility():
    # Same pin for the 3-form: flipping the D(alpha)-beta term breaks the
    # front face at level two by 2 D(alpha) ds1 wherever D(alpha) != 0.
    sc = build("t2z2")
    datum = sc.datum

    def wrong(gtuple):
        return curvature3(datum, gtuple) + _alpha_beta_sum(
            datum, gtuple
        ).d_manifold().scale(2)

    report = check_compatible(CompatibleWindow(sc.manifold, sc.group, 2, wrong))
    by_id = {c["id"]: c for c in report["checks"]}
    assert by_id["face_compatibility[k=2,i=0]"]["status"] == "fail"


# -- twist triples -------------------------------------------------------


@pytest.mark.parametrize("name", ["pointz2", "t1z2", "nct3", "t2z2"])
def test_gerbe_twist_verifies(name):
    sc = build(name)
    twist = TwistTriple.from_gerbe(sc.datum, max_level=3)
    report = twist.verify()
    assert report["status"] == "pass"
    stacks = twist.stacks()
    assert set(stacks) == {2, 1, 0}


def test_twist_rejects_pure_simplex_part():
    sc = build("t1z2")
    man = sc.manifold
    bad = Form.dt(man, 3, 1) * Form.dt(man, 3, 2) * Form.dt(man, 3, 3)

    def fn(gtuple):
        return bad.copy() if len(gtuple) == 3 else Form.zero(man, len(gtuple))

    twist = TwistTriple(man, sc.group, 3, fn)
    with pytest.raises(WindowError):
        twist.value((1, 1, 1))
    report = twist.verify()
    assert report["status"] == "fail"


def test_twist_rejects_non_closed_values():
    sc = build("t1z2")
    man = sc.manifold
    bad = Form.t(man, 3, 1) * Form.dx(man, 3, 1) * Form.dt(man, 3, 2) * Form.dt(
        man, 3, 3
    )

    def fn(gtuple):
        return bad.copy() if len(gtuple) == 3 else Form.zero(man, len(gtuple))

    twist = TwistTriple(man, sc.group, 3, fn)
    with pytest.raises(WindowError) as err:
        twist.value((1, 1, 1))
    assert "closed" in str(err.value)


# -- the twisted differential --------------------------------------------


def test_zero_twist_differential_manifold_part():
    sc = build("t1z2")
    man, grp = sc.manifold, sc.group
    twist = TwistTriple.zero(man, grp, 2)
    window = CompatibleWindow.from_tables(
        man, grp, 2, {(1,): Form.e(man, 1, (1,))}
    )
    image = d_twisted(UForm.from_window(window), twist)
    # D e_1 = e_1 dx, carried to u-weight one; no simplex part.
    assert image.window(1).value((1,)) == Form.e(man, 1, (1,)) * Form.dx(man, 1, 1)
    assert image.window(0).is_zero()


def test_zero_twist_differential_simplex_part_sign():
    sc = build("t1z2")
    man, grp = sc.manifold, sc.group
    twist = TwistTriple.zero(man, grp, 2)
    window = CompatibleWindow.from_tables(
        man, grp, 2, {(1,): Form.t(man, 1, 1) * Form.dx(man, 1, 1)}
    )
    image = d_twisted(UForm.from_window(window), twist)
    # d'(t1 dx1) = -dx1 dt1 = +dt1 dx1: the signed derivative inserts dt
    # past the manifold block.
    expected = (Form.dx(man, 1, 1) * Form.dt(man, 1, 1)).scale(-1)
    assert image.window(0).value((1,)) == expected
    assert image.window(1).is_zero()


@pytest.mark.parametrize("name", ["t1z2", "t2z2", "nct3"])
def test_twisted_differential_squares_to_zero(name):
    rng = random.Random(20240817)
    sc = build(name)
    man, grp = sc.manifold, sc.group
    twist = TwistTriple.from_gerbe(sc.datum, max_level=2)
    for _ in range(4):
        tables = {}
        for k in (0, 1, 2):
            for gtuple in grp.tuples(k):
                if rng.random() < 0.5:
                    tables[gtuple] = random_form(rng, man, k, nterms=2, span=1)
        window = CompatibleWindow.from_tables(man, grp, 2, tables)
        once = d_twisted(UForm.from_window(window), twist)
        twice = d_twisted(once, twist)
        assert twice.is_zero()


def test_twisted_differential_raises_grade_by_one():
    sc = build("t2z2")
    man, grp = sc.manifold, sc.group
    twist = TwistTriple.from_gerbe(sc.datum, max_level=2)
    tables = {
        gtuple: Form.e(man, 2, (0, 1)) * Form.t(man, 2, 1)
        for gtuple in grp.tuples(2)
    }
    xi = UForm.from_window(CompatibleWindow.from_tables(man, grp, 2, tables))
    assert xi.grades() == {2}
    image = d_twisted(xi, twist)
    assert image.grades() == {3}


# -- gauge transforms ----------------------------------------------------


def _random_gauge(rng, sc, max_level=2):
    tables = {}
    for k in (0, 1, 2):
        for gtuple in sc.group.tuples(k):
            val = Form.zero(sc.manifold, k)
            if k >= 1:
                val = val + random_form(rng, sc.manifold, k, r=1, s=1, nterms=1, span=1)
            if sc.manifold.dim >= 2:
                val = val + random_form(rng, sc.manifold, k, r=2, s=0, nterms=1, span=1)
            tables[gtuple] = val
    return CompatibleWindow.from_tables(sc.manifold, sc.group, max_level, tables)


def _random_stack(rng, sc, max_level=2):
    tables = {}
    for k in (0, 1, 2):
        for gtuple in sc.group.tuples(k):
            if rng.random() < 0.6:
                tables[gtuple] = random_form(rng, sc.manifold, k, nterms=2, span=1)
    return UForm.from_window(
        CompatibleWindow.from_tables(sc.manifold, sc.group, max_level, tables)
    )


def test_gauge_by_zero_is_identity():
    rng = random.Random(7)
    sc = build("t1z2")
    xi = _random_stack(rng, sc)
    eta = CompatibleWindow.zero(sc.manifold, sc.group, 2)
    assert gauge_transform(xi, eta) == xi


def test_gauge_transforms_invert():
    rng = random.Random(11)
    sc = build("t2z2")
    xi = _random_stack(rng, sc)
    eta = _random_gauge(rng, sc)
    back = gauge_transform(gauge_transform(xi, eta), eta.scale(-1))
    assert back == xi


def test_gauge_rejects_wrong_bidegrees():
    sc = build("t1z2")
    man, grp = sc.manifold, sc.group
    eta = CompatibleWindow.from_tables(man, grp, 1, {(1,): Form.e(man, 1, (1,))})
    xi = UForm.from_window(
        CompatibleWindow.from_tables(man, grp, 1, {(1,): Form.one(man, 1)})
    )
    with pytest.raises(WindowError):
        gauge_transform(xi, eta).is_zero()


@pytest.mark.parametrize("name", ["t1z2", "t2z2"])
def test_gauge_intertwines_twisted_differentials(name):
    # d_T(e^{-eta_u} xi) = e^{-eta_u} d_{T'}(xi) with T' = T - (uD + d') eta_u.
    rng = random.Random(23)
    sc = build(name)
    twist = TwistTriple.from_gerbe(sc.datum, max_level=2)
    eta = _random_gauge(rng, sc)
    shifted = twist.shift_by_gauge(eta)
    assert shifted.verify()["status"] == "pass"
    for _ in range(3):
        xi = _random_stack(rng, sc)
        lhs = d_twisted(gauge_transform(xi, eta), twist)
        rhs = gauge_transform(d_twisted(xi, shifted), eta)
        assert lhs == rhs


def test_trace_of_connection_form_gauges_the_gerbe_twist():
    # A concrete gauge with group meaning: the normalised trace of the
    # simplicial 2-form.  The shifted twist stays closed and compatible.
    sc = build("t1z2")
    man, grp, datum = sc.manifold, sc.group, sc.datum
    from fractions import Fraction

    eta = CompatibleWindow(
        man, grp, 2, lambda gt: vartheta(datum, gt).trace().scale(Fraction(1, grp.size))
    )
    twist = TwistTriple.from_gerbe(datum, max_level=2)
    shifted = twist.shift_by_gauge(eta)
    assert shifted.verify()["status"] == "pass"
    report = check_compatible(shifted.full())
    assert report["status"] == "pass"
    # The shift is visible: the (1,2) components differ at level two.
    assert not (shifted.full() - twist.full()).is_zero()


# -- u-stacks ------------------------------------------------------------


def test_ustack_shift_and_weights():
    sc = build("pointz2")
    window = invariant_extend(sc.manifold, sc.group, Form.one(sc.manifold, 0), 2)
    xi = UForm.from_window(window, u_power=-1)
    assert xi.weights() == [-1]
    assert xi.u_shift(3).weights() == [2]
    total = xi + xi.u_shift(1)
    assert total.weights() == [-1, 0]
    assert (total - total).is_zero()
