"""Bundled worked examples with golden outputs.

Each file in ``data/corpus`` holds a command name, its decoded JSON
arguments and an ``expected`` mapping; a run passes when every expected
key of the report matches exactly.
"""

from __future__ import annotations

import json
from importlib import resources

from .errors import MalformedInput


def _files():
    root = resources.files("toripos") / "data" / "corpus"
    return sorted((f for f in root.iterdir() if f.name.endswith(".json")), key=lambda f: f.name[: -len(".json")])


def names() -> list[str]:
    return [f.name[: -len(".json")] for f in _files()]


def load(name: str) -> dict:
    for f in _files():
        if f.name == f"{name}.json":
            return json.loads(f.read_text(encoding="utf-8"))
    raise MalformedInput(f"no corpus example named {name!r}")


def _commands():
    from . import cli

    return {
        "fan_validate": cli.cmd_fan_validate,
        "bundle_validate": cli.cmd_bundle_validate,
        "restrict": cli.cmd_restrict,
        "positivity": cli.cmd_positivity,
        "sections": cli.cmd_sections,
        "blowup": cli.cmd_blowup,
        "qtwist": cli.cmd_qtwist,
        "mlgen": cli.cmd_mlgen,
        "mult": cli.cmd_mult,
        "normgen": cli.cmd_normgen,
    }


def diff(expected: dict, report: dict) -> list[str]:
    from .io import plain

    report = plain(report)
    out = []
    for key in sorted(expected):
        if key not in report:
            out.append(f"{key}: missing")
        elif report[key] != expected[key]:
            out.append(f"{key}: expected {json.dumps(expected[key])}, got {json.dumps(report[key])}")
    return out


def run_one(name: str) -> dict:
    entry = load(name)
    fn = _commands().get(entry["command"])
    if fn is None:
        raise MalformedInput(f"corpus example {name} uses unknown command {entry['command']!r}")
    report = fn(**entry["args"])
    problems = diff(entry["expected"], report)
    shown = {k: report[k] for k in sorted(entry["expected"]) if k in report}
    return {"name": name, "pass": not problems, "diff": problems, "report": shown}


def run_all() -> dict:
    results = [run_one(n) for n in names()]
    failed = sum(not r["pass"] for r in results)
    return {
        "results": [{"name": r["name"], "pass": r["pass"], "diff": r["diff"]} for r in results],
        "passed": len(results) - failed,
        "failed": failed,
    }
