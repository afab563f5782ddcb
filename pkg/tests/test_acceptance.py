"""The nine acceptance criteria at their stated tolerances."""

import json
import time
from pathlib import Path

import jsonschema
import pytest

from avgeo.cli import SCHEMA, ParseError, parse, render_json, render_text
from avgeo.cli.engine import Engine
from avgeo.suites import CRITERIA, run_criterion

from .conftest import ACCEPTANCE

HERE = Path(__file__).parent
THEMES = ("exactpoly", "affspace", "avbundle", "algebroids", "avbrackets", "mechanics")
MALFORMED = {
    "missing_name": (2, 9),
    "rz_arity": (3, 15),
    "unknown_keyword": (3, 3),
    "lexical": (2, 15),
    "unclosed_base": (2, 21),
}


def _record(n, name, ok, detail):
    ACCEPTANCE[n] = (name, ok, detail)
    print(f"criterion {n} ({name}): {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    name = CRITERIA[n][0]
    t = time.perf_counter()
    rep = run_criterion(n)
    secs = time.perf_counter() - t
    fails = rep.failures()
    detail = f"{len(rep.checks) - len(fails)}/{len(rep.checks)} checks, {secs:.2f}s"
    if fails:
        detail += f"; first failure: {fails[0].id}: {fails[0].witness}"
    _record(n, name, not fails and rep.checks, detail)
    assert rep.checks, "criterion ran no checks"
    assert not fails, detail


def _cli_criterion() -> list:
    problems = []
    for theme in THEMES:
        src = (HERE / "golden" / f"{theme}.avg").read_text()
        texts, jsons = set(), set()
        for _ in range(2):
            rep = Engine(theme).run(parse(src))
            texts.add(render_text(rep))
            js = render_json(rep, timings=False)
            jsons.add(js)
            jsonschema.validate(json.loads(render_json(rep)), SCHEMA)
        if len(texts) != 1 or len(jsons) != 1:
            problems.append(f"{theme}: report not byte-stable")
        if texts.pop() != (HERE / "golden" / f"{theme}.txt").read_text():
            problems.append(f"{theme}: text differs from golden")
        if jsons.pop() != (HERE / "golden" / f"{theme}.json").read_text():
            problems.append(f"{theme}: json differs from golden")
    for name, pos in MALFORMED.items():
        try:
            parse((HERE / "malformed" / f"{name}.avg").read_text())
            problems.append(f"{name}: parsed without error")
        except ParseError as e:
            if (e.line, e.column) != pos:
                problems.append(f"{name}: error at {(e.line, e.column)}, expected {pos}")
    return problems


def test_criterion_9_cli():
    problems = _cli_criterion()
    _record(9, "CLI", not problems,
            f"{len(THEMES)} golden scripts, {len(MALFORMED)} malformed scripts" + (f"; {problems}" if problems else ""))
    assert not problems
