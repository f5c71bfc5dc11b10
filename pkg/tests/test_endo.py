"""Endomorphism matrices, the connection, and the simplicial curvature forms."""

import random

import pytest
from hypothesis import given, strategies as st

import oracle_dense as od
from gcl.endo import (
    EndMatrix,
    connection_potential,
    curvature3,
    curvature3_u,
    curvature3_via_nabla,
    discrepancy_matrix,
    graded_commutator,
    nabla_apply,
    nabla_u_apply,
    vartheta,
    vartheta_u,
)
from gcl.forms import Form
from gcl.sampling import random_end, random_end_section, random_form
from gcl.scenarios import build

NCT3 = build("nct3")
T1Z2 = build("t1z2")
T2Z2 = build("t2z2")
POINT = build("pointz2")


# -- matrix algebra ---------------------------------------------------------------


def test_single_path_composition():
    man = T1Z2.manifold
    a = random_form(random.Random(1), man, 0)
    b = random_form(random.Random(2), man, 0)
    left = EndMatrix.single(T1Z2.datum, 0, 0, 1, a)
    right = EndMatrix.single(T1Z2.datum, 0, 1, 0, b)
    assert (left * right).entries == {(0, 0): a * b}
    # disjoint supports compose to zero
    blocked = EndMatrix.single(T1Z2.datum, 0, 0, 0, b)
    assert (left * blocked).is_zero()


@given(seed=st.integers(min_value=0, max_value=10**6))
def test_matrix_product_matches_dense_oracle(seed):
    rng = random.Random(seed)
    a = random_end(rng, NCT3.datum, 0, entries=3)
    b = random_end(rng, NCT3.datum, 0, entries=3)
    expected = od.dense_mul(NCT3.group.size, a.entries, b.entries)
    assert (a * b).entries == expected


@given(seed=st.integers(min_value=0, max_value=10**6))
def test_matrix_product_associative(seed):
    rng = random.Random(seed)
    mats = [random_end(rng, T1Z2.datum, 1, entries=2) for _ in range(3)]
    assert (mats[0] * mats[1]) * mats[2] == mats[0] * (mats[1] * mats[2])


def test_trace_basics():
    man = NCT3.manifold
    f = Form.one(man, 0)
    assert EndMatrix.single(NCT3.datum, 0, 0, 1, f).trace().is_zero()
    assert EndMatrix.single(NCT3.datum, 0, 2, 2, f).trace() == f
    assert EndMatrix.identity(NCT3.datum, 0).trace() == Form.scalar(man, 0, NCT3.group.size)


@given(seed=st.integers(min_value=0, max_value=10**6))
def test_graded_trace_property(seed):
    rng = random.Random(seed)
    pa = rng.randint(0, 1)
    pb = rng.randint(0, 1)
    a = random_end(rng, T2Z2.datum, 1, entries=2, r=pa, s=0)
    b = random_end(rng, T2Z2.datum, 1, entries=2, r=pb, s=0)
    sign = -1 if pa * pb else 1
    lhs = (a * b).trace()
    rhs = (b * a).trace().scale(sign)
    assert lhs == rhs
    assert graded_commutator(a, b, pa).trace().is_zero()


# -- group action on matrices ---------------------------------------------------------


def test_identity_acts_trivially():
    rng = random.Random(7)
    x = random_end(rng, NCT3.datum, 0, entries=3)
    assert x.act(NCT3.group.identity) == x


@given(seed=st.integers(min_value=0, max_value=10**6))
def test_action_composition(seed):
    rng = random.Random(seed)
    grp = NCT3.group
    x = random_end(rng, NCT3.datum, 0, entries=2)
    g, h = rng.randrange(grp.size), rng.randrange(grp.size)
    assert x.act(g).act(h) == x.act(grp.mul(h, g))


@given(seed=st.integers(min_value=0, max_value=10**6))
def test_action_is_algebra_homomorphism(seed):
    rng = random.Random(seed)
    grp = T1Z2.group
    x = random_end(rng, T1Z2.datum, 0, entries=2)
    y = random_end(rng, T1Z2.datum, 0, entries=2)
    g = rng.randrange(grp.size)
    assert (x * y).act(g) == x.act(g) * y.act(g)


@given(seed=st.integers(min_value=0, max_value=10**6))
def test_action_trace_equivariance(seed):
    rng = random.Random(seed)
    grp = T1Z2.group
    x = random_end(rng, T1Z2.datum, 0, entries=3)
    g = rng.randrange(grp.size)
    assert x.act(g).trace() == x.trace().act_group(grp, g)


# -- discrepancy matrices ----------------------------------------------------------------


def test_discrepancy_trivial_cases():
    for g in POINT.group.elements():
        assert discrepancy_matrix(POINT.datum, g).is_zero()
    for g in NCT3.group.elements():
        assert discrepancy_matrix(NCT3.datum, g).is_zero()


@pytest.mark.parametrize("scenario", [T1Z2, T2Z2])
def test_discrepancy_composition_rule(scenario):
    datum, grp = scenario.datum, scenario.group
    for g in grp.elements():
        for h in grp.elements():
            lhs = (
                discrepancy_matrix(datum, g)
                + discrepancy_matrix(datum, h).act(g)
                - discrepancy_matrix(datum, grp.mul(g, h))
            )
            rhs = EndMatrix.scalar_matrix(datum, 0, -datum.alpha(g, h))
            assert lhs == rhs


# -- the connection ------------------------------------------------------------------------


@given(seed=st.integers(min_value=0, max_value=10**6))
def test_nabla_on_central_scalars_is_plain_derivative(seed):
    rng = random.Random(seed)
    w = random_form(rng, T1Z2.manifold, 1)
    x = EndMatrix.scalar_matrix(T1Z2.datum, 1, w)
    expected = EndMatrix.scalar_matrix(
        T1Z2.datum, 1, w.d_manifold() + w.d_simplex(True)
    )
    assert nabla_apply(T1Z2.datum, (1,), x) == expected


@given(seed=st.integers(min_value=0, max_value=10**6))
def test_nabla_trace_lemma(seed):
    # the trace intertwines nabla with the plain total derivative
    rng = random.Random(seed)
    gtuple = tuple(rng.randrange(2) for _ in range(rng.randint(0, 2)))
    x = random_end(rng, T2Z2.datum, len(gtuple), entries=2)
    parts = nabla_u_apply(T2Z2.datum, gtuple, x)
    k = len(gtuple)
    assert parts.get(0, EndMatrix.zero(T2Z2.datum, k)).trace() == x.trace().d_manifold()
    assert parts.get(-1, EndMatrix.zero(T2Z2.datum, k)).trace() == x.trace().d_simplex(True)
    total = nabla_apply(T2Z2.datum, gtuple, x)
    assert total.trace() == x.trace().d_manifold() + x.trace().d_simplex(True)


@given(seed=st.integers(min_value=0, max_value=10**6))
def test_nabla_graded_leibniz(seed):
    rng = random.Random(seed)
    parity = rng.randint(0, 1)
    x = random_end(rng, T1Z2.datum, 1, entries=2, r=parity, s=0)
    y = random_end(rng, T1Z2.datum, 1, entries=2)
    sign = -1 if parity else 1
    lhs = nabla_apply(T1Z2.datum, (1,), x * y)
    rhs = nabla_apply(T1Z2.datum, (1,), x) * y + (
        x * nabla_apply(T1Z2.datum, (1,), y)
    ).scale(sign)
    assert lhs == rhs


# -- simplicial 2-form ------------------------------------------------------------------------


def test_vartheta_level_zero_is_bundle_curvature():
    datum = T2Z2.datum
    got = vartheta(datum, ())
    expected = EndMatrix(
        datum, 0, {(g, g): datum.theta(g) for g in datum.group.elements()}
    )
    assert got == expected


def test_vartheta_trivial_point():
    assert vartheta(POINT.datum, (1,)).is_zero()
    assert vartheta(NCT3.datum, (1, 1)).is_zero()


@pytest.mark.parametrize("scenario", [T1Z2, T2Z2])
@pytest.mark.parametrize("k", [1, 2])
def test_nabla_squared_is_vartheta_commutator(scenario, k):
    datum = scenario.datum
    rng = random.Random(100 + k)
    for gtuple in datum.group.tuples(k):
        theta = vartheta(datum, gtuple)
        for _ in range(3):
            a = random_end_section(rng, datum, level=k, entries=2)
            twice = nabla_apply(datum, gtuple, nabla_apply(datum, gtuple, a))
            assert twice == graded_commutator(theta, a, 0)


@given(seed=st.integers(min_value=0, max_value=10**6))
def test_rescaled_nabla_squared_matches_rescaled_vartheta(seed):
    rng = random.Random(seed)
    datum = T2Z2.datum
    k = rng.randint(1, 2)
    gtuple = tuple(rng.randrange(2) for _ in range(k))
    a = random_end_section(rng, datum, level=k, entries=2)
    once = nabla_u_apply(datum, gtuple, a)
    twice: dict = {}
    for w1, part in once.items():
        for w2, image in nabla_u_apply(datum, gtuple, part).items():
            key = w1 + w2 + 1  # the extra u in u * (nabla_u)^2
            twice[key] = twice.get(key, EndMatrix.zero(datum, k)) + image
    twice = {w: m for w, m in twice.items() if not m.is_zero()}
    expected = {
        w: graded_commutator(comp, a, 0) for w, comp in vartheta_u(datum, gtuple).items()
    }
    expected = {w: m for w, m in expected.items() if not m.is_zero()}
    assert twice == expected


def test_vartheta_has_no_pure_simplex_part():
    for gtuple in T2Z2.group.tuples(2):
        vartheta_u(T2Z2.datum, gtuple)  # raises if a (0,2) part appears


# -- simplicial curvature 3-form ------------------------------------------------------------


def _lift_reference(form, level):
    out = Form(form.manifold, level)
    for (freq, _t, dxs, dts), coeff in form.terms.items():
        out.terms[(freq, (0,) * level, dxs, dts)] = coeff
    return out


def test_curvature_level_one_reference():
    datum = T2Z2.datum
    man = datum.manifold
    got = curvature3(datum, (1,))
    expected = Form.dt(man, 1, 1) * _lift_reference(datum.theta(1), 1)
    assert got == expected


def test_curvature_vanishes_on_point():
    assert curvature3(NCT3.datum, (3, 5)).is_zero()
    assert curvature3(POINT.datum, (1,)).is_zero()


@pytest.mark.parametrize("scenario", [T1Z2, T2Z2])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_curvature_closed_formula_matches_nabla_route(scenario, k):
    datum = scenario.datum
    for gtuple in datum.group.tuples(k):
        assert curvature3(datum, gtuple) == curvature3_via_nabla(datum, gtuple)


@pytest.mark.parametrize("scenario", [T1Z2, T2Z2])
def test_curvature_is_closed(scenario):
    datum = scenario.datum
    for k in (1, 2, 3):
        for gtuple in datum.group.tuples(k):
            theta = curvature3(datum, gtuple)
            total = theta.d_manifold() + theta.d_simplex(True)
            assert total.is_zero()


def test_curvature_u_weights():
    parts = curvature3_u(T2Z2.datum, (1, 1))
    assert set(parts) <= {2, 1, 0}
    full = curvature3(T2Z2.datum, (1, 1))
    for weight, (r, s) in ((2, (3, 0)), (1, (2, 1)), (0, (1, 2))):
        if weight in parts:
            assert parts[weight] == full.component(r, s)
