"""Scenario bundles: manifold + group + gerbe datum + truncation caps.

A scenario is the unit of input for the command line tool.  Scenarios
are stored as JSON (see ``load_scenario`` for the schema) and a handful
of canonical ones ship with the package:

* ``nct3``    - point, Gamma = Z3 x Z3, multiplier zeta_3^{b c}: the
                rational noncommutative-torus-type twisted group algebra.
* ``pointz2`` - point, Gamma = Z2, trivial gerbe.
* ``z2sq``    - point, Gamma = Z2 x Z2, multiplier (-1)^{b c}.
* ``t1z2``    - circle, Gamma = Z2 acting by x -> x + 1/2, with a
                nonvanishing potential and multiplier -1.
* ``t2z2``    - 2-torus, Gamma = Z2 shifting the first coordinate by 1/2,
                with a potential whose curvature is nonzero.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from .forms import Form
from .gerbe import GerbeDatum
from .groups import GroupData, GroupValidationError, cyclic_group, product_of_cyclics
from .manifold import ModelManifold, Unit

SCHEMA_VERSION = 1

DEFAULT_TRUNCATION = {"max_level": 3, "max_arity": 2, "exp_order_cap": None}


class ScenarioError(ValueError):
    """Scenario file is malformed; the message names the offending field."""


class Scenario:
    __slots__ = ("name", "manifold", "group", "datum", "truncation", "seed")

    def __init__(self, name, manifold, group, datum, truncation=None, seed=0):
        self.name = name
        self.manifold = manifold
        self.group = group
        self.datum = datum
        self.truncation = dict(DEFAULT_TRUNCATION)
        if truncation:
            self.truncation.update(truncation)
        self.seed = seed

    def __repr__(self):
        return f"Scenario({self.name!r})"

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        man = self.manifold
        grp = self.group
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "manifold": {
                "kind": man.kind,
                "dim": man.dim,
                "cyclotomic_order": man.order,
            },
            "group": {
                "elements": list(grp.labels),
                "mult": [list(row) for row in grp.mult],
                "action": [
                    {
                        "matrix": [list(row) for row in mat],
                        "translation": [str(t) for t in tr],
                    }
                    for mat, tr in grp.actions
                ],
            },
            "gerbe": {
                "a": [form.to_terms() for form in self.datum.a],
                "lambda": [
                    [
                        {
                            "zeta_exp": self.datum.lam[(g, h)].zeta_exp,
                            "freq": list(self.datum.lam[(g, h)].freq),
                        }
                        for h in grp.elements()
                    ]
                    for g in grp.elements()
                ],
            },
            "truncation": dict(self.truncation),
            "seed": self.seed,
        }


def _require(mapping, key, where):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ScenarioError(f"missing field {key!r} in {where}")
    return mapping[key]


def scenario_from_dict(data: dict, name_hint: str = "?") -> Scenario:
    if _require(data, "schema_version", "scenario") != SCHEMA_VERSION:
        raise ScenarioError(
            f"unsupported schema_version {data['schema_version']!r} (expected {SCHEMA_VERSION})"
        )
    name = data.get("name", name_hint)

    man_data = _require(data, "manifold", "scenario")
    try:
        manifold = ModelManifold(
            _require(man_data, "kind", "manifold"),
            int(_require(man_data, "dim", "manifold")),
            int(_require(man_data, "cyclotomic_order", "manifold")),
        )
    except ValueError as err:
        raise ScenarioError(f"bad manifold block: {err}") from err

    grp_data = _require(data, "group", "scenario")
    labels = _require(grp_data, "elements", "group")
    mult = _require(grp_data, "mult", "group")
    action = _require(grp_data, "action", "group")
    try:
        actions = [
            (
                tuple(tuple(int(x) for x in row) for row in _require(a, "matrix", "action")),
                tuple(Fraction(t) for t in _require(a, "translation", "action")),
            )
            for a in action
        ]
        group = GroupData(
            labels, mult, actions, dim=manifold.dim, order=manifold.order
        )
    except GroupValidationError as err:
        raise ScenarioError(
            f"bad group block: {err}"
            + (f" (witness: {err.witness})" if err.witness else "")
        ) from err
    except (TypeError, ValueError, ZeroDivisionError) as err:
        raise ScenarioError(f"bad group block: {err}") from err

    gerbe_data = _require(data, "gerbe", "scenario")
    a_tables = _require(gerbe_data, "a", "gerbe")
    lam_tables = _require(gerbe_data, "lambda", "gerbe")
    if len(a_tables) != group.size or len(lam_tables) != group.size:
        raise ScenarioError("gerbe tables must match the group size")
    try:
        a = [Form.from_terms(manifold, 0, table) for table in a_tables]
        lam = {}
        for g, row in enumerate(lam_tables):
            if len(row) != group.size:
                raise ScenarioError("gerbe.lambda rows must match the group size")
            for h, cell in enumerate(row):
                lam[(g, h)] = Unit(
                    manifold.order,
                    int(_require(cell, "zeta_exp", "lambda cell")),
                    tuple(_require(cell, "freq", "lambda cell")),
                )
        datum = GerbeDatum(manifold, group, a, lam)
    except ScenarioError:
        raise
    except (ValueError, KeyError, TypeError) as err:
        raise ScenarioError(f"bad gerbe block: {err}") from err

    truncation = data.get("truncation", {})
    seed = int(data.get("seed", 0))
    return Scenario(name, manifold, group, datum, truncation, seed)


def load_scenario(path) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as err:
        raise ScenarioError(f"cannot read scenario file: {err}") from err
    except json.JSONDecodeError as err:
        raise ScenarioError(f"scenario file is not valid JSON: {err}") from err
    name_hint = str(path).rsplit("/", 1)[-1].removesuffix(".json")
    return scenario_from_dict(data, name_hint)


def bundled_scenario_path(name: str):
    """Filesystem path of a scenario shipped with the package."""
    return resources.files("gcl").joinpath("data", f"{name}.json")


def load_bundled(name: str) -> Scenario:
    path = bundled_scenario_path(name)
    if not path.is_file():
        raise ScenarioError(f"no bundled scenario named {name!r}")
    return scenario_from_dict(json.loads(path.read_text()), name)


# -- canonical scenarios (the bundled JSON files mirror these builders) ----------


def _trivial_lambda(manifold, group):
    return {
        (g, h): Unit.one(manifold.order, manifold.dim)
        for g in group.elements()
        for h in group.elements()
    }


def build_nct3() -> Scenario:
    manifold = ModelManifold.point(3)
    group = product_of_cyclics([3, 3], dim=0, order=3)
    lam = {}
    for g in group.elements():
        for h in group.elements():
            (_, b), (c, _) = group.tuple_labels[g], group.tuple_labels[h]
            lam[(g, h)] = Unit(3, (b * c) % 3, ())
    a = [Form.zero(manifold, 0) for _ in group.elements()]
    return Scenario("nct3", manifold, group, GerbeDatum(manifold, group, a, lam), seed=3)


def build_pointz2() -> Scenario:
    manifold = ModelManifold.point(2)
    group = cyclic_group(2, dim=0, order=2)
    a = [Form.zero(manifold, 0), Form.zero(manifold, 0)]
    datum = GerbeDatum(manifold, group, a, _trivial_lambda(manifold, group))
    return Scenario("pointz2", manifold, group, datum, seed=2)


def build_z2sq() -> Scenario:
    manifold = ModelManifold.point(2)
    group = product_of_cyclics([2, 2], dim=0, order=2)
    lam = {}
    for g in group.elements():
        for h in group.elements():
            (_, b), (c, _) = group.tuple_labels[g], group.tuple_labels[h]
            lam[(g, h)] = Unit(2, (b * c) % 2, ())
    a = [Form.zero(manifold, 0) for _ in group.elements()]
    return Scenario("z2sq", manifold, group, GerbeDatum(manifold, group, a, lam), seed=4)


def build_t1z2() -> Scenario:
    manifold = ModelManifold.torus(1, 2)
    group = cyclic_group(
        2, dim=1, order=2, translations=[(Fraction(0),), (Fraction(1, 2),)]
    )
    lam = _trivial_lambda(manifold, group)
    lam[(1, 1)] = Unit(2, 1, (0,))
    a = [
        Form.zero(manifold, 0),
        Form.e(manifold, 0, (2,)) * Form.dx(manifold, 0, 1),
    ]
    return Scenario("t1z2", manifold, group, GerbeDatum(manifold, group, a, lam), seed=5)


def build_t2z2() -> Scenario:
    manifold = ModelManifold.torus(2, 2)
    group = cyclic_group(
        2,
        dim=2,
        order=2,
        translations=[(Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(0))],
    )
    lam = _trivial_lambda(manifold, group)
    lam[(1, 1)] = Unit(2, 1, (0, 0))
    a = [
        Form.zero(manifold, 0),
        Form.e(manifold, 0, (0, 1)) * Form.dx(manifold, 0, 1),
    ]
    return Scenario("t2z2", manifold, group, GerbeDatum(manifold, group, a, lam), seed=6)


BUILDERS = {
    "nct3": build_nct3,
    "pointz2": build_pointz2,
    "z2sq": build_z2sq,
    "t1z2": build_t1z2,
    "t2z2": build_t2z2,
}


def build(name: str) -> Scenario:
    if name not in BUILDERS:
        raise ScenarioError(f"unknown scenario {name!r}")
    return BUILDERS[name]()
