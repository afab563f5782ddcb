"""Text and JSON rendering of check reports."""

from __future__ import annotations

import json

from ..checks import CheckReport

# JSON Schema (draft 2020-12) of the machine-readable report
SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["suite", "results"],
    "additionalProperties": False,
    "properties": {
        "suite": {"type": "string"},
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "status", "ms"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string"},
                    "status": {"enum": ["pass", "fail"]},
                    "witness": {"type": "string"},
                    "value": {"type": "string"},
                    "ms": {"type": "number", "minimum": 0},
                },
                # failures always carry a witness, passes never do
                "if": {"properties": {"status": {"const": "fail"}}},
                "then": {"required": ["witness"]},
                "else": {"not": {"required": ["witness"]}},
            },
        },
    },
}


def to_dict(rep: CheckReport, timings: bool = True) -> dict:
    results = []
    for c in rep.checks:
        r = {"id": c.id, "status": c.status}
        if not c.ok:
            r["witness"] = c.witness or "violated"
        if c.value is not None:
            r["value"] = c.value
        r["ms"] = round(c.ms, 3) if timings else 0
        results.append(r)
    return {"suite": rep.name, "results": results}


def render_json(rep: CheckReport, timings: bool = True) -> str:
    return json.dumps(to_dict(rep, timings), indent=2, ensure_ascii=False) + "\n"


def render_text(rep: CheckReport) -> str:
    lines = [f"suite: {rep.name}"]
    for c in rep.checks:
        lines.append(f"{'PASS' if c.ok else 'FAIL'}  {c.id}")
        if c.value is not None:
            lines.append(f"      = {c.value}")
        if not c.ok:
            lines.append(f"      witness: {c.witness}")
    npass = sum(c.ok for c in rep.checks)
    nfail = len(rep.checks) - npass
    lines.append(f"{npass} passed, {nfail} failed")
    return "\n".join(lines) + "\n"


def render(rep: CheckReport, fmt: str = "text") -> bytes:
    if fmt == "json":
        return render_json(rep).encode("utf-8")
    if fmt == "text":
        return render_text(rep).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def exit_code(rep: CheckReport) -> int:
    return 0 if rep.passed else 1
