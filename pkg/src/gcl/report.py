"""Canonical machine-readable reports for suite runs.

Reports are plain JSON with sorted keys and fixed separators, so two
runs with the same (scenario, seed, version) produce byte-identical
files.  To keep that guarantee no wall-clock data is recorded; every
value is exact: cyclotomic scalars appear as coefficient vectors of
rational strings together with the order N, Laurent values as
power-indexed lists of such vectors, and forms as their term lists.
"""

from __future__ import annotations

import hashlib
import json

from . import __version__
from .cyclotomic import Cyc
from .homology import ULaurent

SCHEMA_VERSION = 1


def canonical_json(payload) -> str:
    """Deterministic JSON: sorted keys, no whitespace, ASCII only."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def scenario_digest(scenario) -> str:
    """SHA-256 of the scenario's canonical serialization."""
    data = canonical_json(scenario.to_dict()).encode("ascii")
    return hashlib.sha256(data).hexdigest()


def serialize_cyc(value: Cyc) -> dict:
    return {"order": value.n, "coeffs": [str(c) for c in value.c]}


def serialize_ulaurent(value: ULaurent) -> dict:
    return {
        "order": value.order,
        "terms": [
            {"power": p, "coeffs": [str(c) for c in value.coeff(p).c]}
            for p in value.powers()
        ],
    }


def build_report(command: str, scenario, seed: int, suites: list,
                 extras: dict | None = None) -> dict:
    """Assemble the canonical report dictionary for a command run."""
    status = "pass" if all(s["status"] == "pass" for s in suites) else "fail"
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": "gcl",
        "version": __version__,
        "command": command,
        "scenario": {"name": scenario.name, "digest": scenario_digest(scenario)},
        "seed": seed,
        "status": status,
        "suites": suites,
    }
    if extras:
        if "values" in extras:
            report["values"] = [serialize_ulaurent(v) for v in extras["values"]]
        if "dd" in extras:
            report["dd"] = extras["dd"]
    return report


def write_report(path, report: dict) -> None:
    with open(path, "w", encoding="ascii") as handle:
        handle.write(canonical_json(report))
        handle.write("\n")


def render_text(report: dict) -> str:
    """Human summary: one line per suite plus a final verdict."""
    lines = [f"scenario {report['scenario']['name']} (seed {report['seed']})"]
    for suite in report["suites"]:
        total = len(suite["checks"])
        passed = sum(1 for c in suite["checks"] if c["status"] == "pass")
        lines.append(f"  {suite['suite']}: {passed}/{total} checks pass")
        for check in suite["checks"]:
            if check["status"] != "pass":
                lines.append(f"    FAIL {check['id']}")
    if "values" in report:
        for i, value in enumerate(report["values"]):
            terms = value["terms"]
            shown = (
                " + ".join(
                    "u^{}*({})".format(t["power"], ",".join(t["coeffs"]))
                    for t in terms
                )
                if terms
                else "0"
            )
            lines.append(f"  value[{i}] = {shown}")
    lines.append(report["status"].upper())
    return "\n".join(lines)
