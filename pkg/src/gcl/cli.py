"""Command line driver: load a scenario, run suites, emit canonical reports.

Commands
--------
verify       gerbe identities + window compatibility + homological laws
dd           curvature-window simplex integrals with (alpha, theta) tables
chain-check  the JLO chain-identity grid
pair         composite cocycle values and its chain identity
all          every suite including the cdga laws

Every command accepts --out (canonical JSON report), --seed,
--max-level, --max-arity and --jobs.  Suites execute sequentially
whatever --jobs says, so reports for a fixed (scenario, seed, version)
are byte-identical across runs; the flag is accepted for interface
stability only.  Exit status is 0 exactly when every check passes;
scenario-loading problems exit with status 2.
"""

from __future__ import annotations

import json
import sys

import click

from . import __version__
from .cyclotomic import Cyc
from .forms import Form
from .homology import ConvSection, Unitized
from .report import build_report, render_text, write_report
from .scenarios import ScenarioError, load_scenario
from .suites import run_command


def _fail_load(message: str):
    click.echo(f"gcl: {message}", err=True)
    sys.exit(2)


def _element_index(group, g):
    if isinstance(g, int):
        if 0 <= g < group.size:
            return g
        raise ScenarioError(f"group element index {g} out of range")
    label = str(g)
    for i, lab in enumerate(group.labels):
        if str(lab) == label:
            return i
    raise ScenarioError(f"unknown group element label {label!r}")


def _load_args(path, datum):
    """Argument tuples from JSON: lists of sections with optional scalar.

    Each tuple is a list of sections; a section is {"parts": [{"g":
    index-or-label, "terms": term-list}]}; the zeroth section may carry
    a unitized {"scalar": {"num": [..], "den": d}} coefficient vector.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as err:
        raise ScenarioError(f"cannot read args file: {err}") from err
    except json.JSONDecodeError as err:
        raise ScenarioError(f"args file is not valid JSON: {err}") from err
    if not isinstance(data, list):
        raise ScenarioError("args file must be a list of argument tuples")
    out = []
    for t, tup in enumerate(data):
        if not isinstance(tup, list) or not tup:
            raise ScenarioError(f"argument tuple {t} must be a non-empty list")
        sections = []
        for i, sec in enumerate(tup):
            section = ConvSection(datum)
            for part in sec.get("parts", []):
                g = _element_index(datum.group, part["g"])
                fn = Form.from_terms(datum.manifold, 0, part["terms"])
                section = section + ConvSection(datum, {g: fn})
            if i == 0:
                scal = sec.get("scalar")
                coeff = (
                    Cyc.from_vector(
                        datum.manifold.order, scal["num"], scal.get("den", 1)
                    )
                    if scal
                    else 0
                )
                sections.append(Unitized(section, coeff))
            else:
                sections.append(section)
        out.append(tuple(sections))
    return out


def _execute(command, scenario_path, out, seed, max_level, max_arity, jobs,
             args_path=None):
    del jobs  # sequential execution keeps reports byte-identical
    try:
        scenario = load_scenario(scenario_path)
    except ScenarioError as err:
        _fail_load(str(err))
    args_list = None
    if args_path is not None:
        try:
            args_list = _load_args(args_path, scenario.datum)
        except (ScenarioError, KeyError, TypeError, ValueError) as err:
            _fail_load(f"bad args file: {err}")
    if command in ("dd", "chain-check", "pair"):
        gate = scenario.datum.verify()
        if gate["status"] != "pass":
            suites, extras = [gate], {}
        else:
            suites, extras = run_command(
                command, scenario, seed=seed, max_level=max_level,
                max_arity=max_arity, args_list=args_list,
            )
    else:
        suites, extras = run_command(
            command, scenario, seed=seed, max_level=max_level,
            max_arity=max_arity, args_list=args_list,
        )
    used_seed = scenario.seed if seed is None else seed
    report = build_report(command, scenario, used_seed, suites, extras)
    click.echo(render_text(report))
    if out is not None:
        write_report(out, report)
    sys.exit(0 if report["status"] == "pass" else 1)


def common_options(fn):
    for option in reversed(
        [
            click.argument("scenario_path", metavar="SCENARIO",
                           type=click.Path(dir_okay=False)),
            click.option("--out", type=click.Path(dir_okay=False), default=None,
                         help="Write the canonical JSON report to this path."),
            click.option("--seed", type=int, default=None,
                         help="Override the scenario seed."),
            click.option("--max-level", type=int, default=None,
                         help="Override the group-tuple level cap."),
            click.option("--max-arity", type=int, default=None,
                         help="Override the cyclic-arity cap."),
            click.option("--jobs", type=click.IntRange(min=1), default=1,
                         help="Accepted for interface stability; runs are "
                              "sequential so reports stay byte-identical."),
        ]
    ):
        fn = option(fn)
    return fn


@click.group()
@click.version_option(__version__, prog_name="gcl")
def main():
    """Exact verification suites for gerbe-twisted convolution data."""


@main.command()
@common_options
def verify(scenario_path, out, seed, max_level, max_arity, jobs):
    """Gerbe, window-compatibility, and homological identity suites."""
    _execute("verify", scenario_path, out, seed, max_level, max_arity, jobs)


@main.command()
@common_options
def dd(scenario_path, out, seed, max_level, max_arity, jobs):
    """Curvature-window integrals and the (alpha, theta) tables."""
    _execute("dd", scenario_path, out, seed, max_level, max_arity, jobs)


@main.command("chain-check")
@common_options
def chain_check(scenario_path, out, seed, max_level, max_arity, jobs):
    """The JLO chain-identity grid."""
    _execute("chain-check", scenario_path, out, seed, max_level, max_arity, jobs)


@main.command()
@common_options
@click.option("--args", "args_path", type=click.Path(dir_okay=False), default=None,
              help="JSON file with convolution argument tuples.")
def pair(scenario_path, out, seed, max_level, max_arity, jobs, args_path):
    """Composite cocycle values and its chain identity."""
    _execute("pair", scenario_path, out, seed, max_level, max_arity, jobs,
             args_path=args_path)


@main.command("all")
@common_options
def run_all(scenario_path, out, seed, max_level, max_arity, jobs):
    """Every suite, including the cdga laws on the scenario's manifold."""
    _execute("all", scenario_path, out, seed, max_level, max_arity, jobs)


if __name__ == "__main__":  # pragma: no cover
    main()
