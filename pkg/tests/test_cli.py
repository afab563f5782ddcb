import io
import json
import os
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avgeo.checks import CheckReport
from avgeo.cli import SCHEMA, ExecError, ParseError, Statement, execute, main, parse, render_json, render_text
from avgeo.cli.dsl import Expr, FRef, Ref
from avgeo.cli.engine import Engine, parse_metric

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"
SCRIPTS = sorted(p.stem for p in GOLDEN.glob("*.avg"))
REGEN = os.environ.get("AVGEO_REGEN_GOLDEN") == "1"

# expected (line, column) of the first error in each malformed script
MALFORMED = {
    "missing_name": (2, 9),
    "rz_arity": (3, 15),
    "unknown_keyword": (3, 3),
    "lexical": (2, 15),
    "unclosed_base": (2, 21),
}
# scripts whose report is expected to contain failures (negative controls)
EXPECT_FAIL = {"algebroids", "avbrackets"}


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()

    class _Buf(io.StringIO):
        @property
        def buffer(self):
            return self

        def write(self, s):
            return out.write(s.decode() if isinstance(s, bytes) else s)

    with redirect_stdout(_Buf()), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def report_for(name: str) -> CheckReport:
    text = (GOLDEN / f"{name}.avg").read_text()
    return Engine(name).run(parse(text))


# ---------------------------------------------------------------------------
# golden files


@pytest.mark.parametrize("name", SCRIPTS)
def test_golden_text(name):
    got = render_text(report_for(name))
    path = GOLDEN / f"{name}.txt"
    if REGEN:
        path.write_text(got)
    assert got == path.read_text()


@pytest.mark.parametrize("name", SCRIPTS)
def test_golden_json(name):
    got = render_json(report_for(name), timings=False)
    path = GOLDEN / f"{name}.json"
    if REGEN:
        path.write_text(got)
    assert got == path.read_text()
    jsonschema.validate(json.loads(got), SCHEMA)


@pytest.mark.parametrize("name", SCRIPTS)
def test_run_exit_code_and_schema(name):
    code, out, err = run_cli("run", str(GOLDEN / f"{name}.avg"), "--format", "json")
    assert err == ""
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    failed = any(r["status"] == "fail" for r in doc["results"])
    assert failed == (name in EXPECT_FAIL)
    assert code == (1 if failed else 0)


def test_json_byte_identical_without_timings():
    a = render_json(report_for("mechanics"), timings=False)
    b = render_json(report_for("mechanics"), timings=False)
    assert a == b


def test_golden_set_covers_six_themes():
    assert len(SCRIPTS) == 6


# ---------------------------------------------------------------------------
# parse errors


@pytest.mark.parametrize("name", sorted(MALFORMED))
def test_malformed_positions(name):
    text = (HERE / "malformed" / f"{name}.avg").read_text()
    with pytest.raises(ParseError) as ei:
        parse(text)
    assert (ei.value.line, ei.value.column) == MALFORMED[name]
    assert ei.value.expected


@pytest.mark.parametrize("name", sorted(MALFORMED))
def test_malformed_exit_code(name):
    code, out, err = run_cli("run", str(HERE / "malformed" / f"{name}.avg"))
    line, col = MALFORMED[name]
    assert code == 2 and out == ""
    assert f"line {line}, column {col}" in err


def test_section_without_name():
    with pytest.raises(ParseError) as ei:
        parse("section = 3")
    assert (ei.value.line, ei.value.column) == (1, 9)


def test_simple_statements():
    s = parse("section s1 = x^2 - y\ncheck canonical S1\n")
    sec, chk = s.statements
    assert sec.keyword == "section" and sec.name.name == "s1" and sec.args[0].text == "x^2 - y"
    assert chk.keyword == "check" and chk.kind == "canonical" and chk.args[0].name == "S1"
    assert (chk.args[0].line, chk.args[0].col) == (2, 17)


def test_spec_surface_forms():
    s = parse("space A affine dim 2\nspace V special dim 3 v0=[0,0,1]\navbundle Z base(x,y) fiber(s)\n"
              "section sigma = x^2*y\ngauge g = x^3\n")
    rep = execute(s)
    assert rep.checks == []


def test_comments_and_strings():
    s = parse('report "a # b"  # trailing\n# only comment\n\n')
    assert s.statements[0].args[0] == "a # b"


# ---------------------------------------------------------------------------
# pretty printing


_idents = st.sampled_from(["A", "B", "sigma", "tau", "R", "S", "P", "x1", "G_2"])
_polys = st.sampled_from(["x^2 - y", "3/2*x*y", "0", "x", "-y + 1", "(x + y)^2"])
_vfs = st.sampled_from(["d/dx", "x*d/dy", "0", "d/dx + y*d/dy"])


@st.composite
def statements(draw):
    k = draw(st.sampled_from(["space", "avbundle", "section", "rzsection", "affpoisson", "check", "bracket",
                              "construct", "dynamics", "integrate", "report"]))
    n = draw(_idents)
    if k == "space":
        return f"space {n} {draw(st.sampled_from(['affine', 'special_affine', 'special']))} dim {draw(st.integers(1, 4))}"
    if k == "avbundle":
        return f"avbundle {n} base( x , y )" + draw(st.sampled_from(["", " fiber(s)", " fiber( w )"]))
    if k == "section":
        return f"section {n}{draw(st.sampled_from(['', ' on Z']))} =   {draw(_polys)}"
    if k == "rzsection":
        return f"rzsection {n} = ({draw(_vfs)},{draw(_polys)} , {draw(_polys)},{draw(_polys)})"
    if k == "affpoisson":
        return f"affpoisson {n} = (lambda0: d/dx^d/dy,x0: {draw(_vfs)})"
    if k == "check":
        c = draw(st.sampled_from(["canonical", "squared_zero", "duality", "membership", "jacobi", "theorem"]))
        if c == "jacobi":
            return f"check jacobi {n} {n} {n}"
        if c == "theorem":
            return f"check theorem hull_product {n}  {n}"
        return f"check {c}   {n}"
    if k == "bracket":
        return draw(st.sampled_from([f"bracket vertical F({n}) F( {n} )", f"bracket aff P {n} {n}",
                                     f"bracket rz {n} {n}", f"bracket schouten {n} {n}"]))
    if k == "construct":
        return f"construct a_times {n} {n}" + draw(st.sampled_from(["", f" as {n}"]))
    if k == "dynamics":
        return 'dynamics newton metric=diag(1,2) mass=3/2 potential = "x1^2 + k*x2"  k=2'
    if k == "integrate":
        return 'integrate dt=1e-3 steps=10 state="0,1,0"'
    return f'report "{n} suite"'


@settings(max_examples=150, deadline=None)
@given(st.lists(statements(), min_size=1, max_size=8))
def test_parse_render_parse_idempotent(lines):
    text = "\n".join(lines) + "\n"
    s1 = parse(text)
    canon = s1.render()
    s2 = parse(canon)
    assert s2.statements == s1.statements
    assert s2.render() == canon


# ---------------------------------------------------------------------------
# execution errors


def test_undefined_identifier_names_it_and_its_use_site():
    text = "avbundle Z base(q, p)\naffpoisson P = (lambda0: d/dq^d/dp)\ncheck canonical Q\n"
    with pytest.raises(ExecError) as ei:
        execute(parse(text))
    e = ei.value
    assert "'Q'" in str(e) and "check canonical Q" in str(e)
    assert (e.line, e.column) == (3, 17)


def test_type_mismatch():
    text = "avbundle Z base(q, p)\nsection P = q\ncheck canonical P\n"
    with pytest.raises(ExecError) as ei:
        execute(parse(text))
    assert "is a section" in str(ei.value) and "expected a structure" in str(ei.value)


def test_redeclaration():
    with pytest.raises(ExecError) as ei:
        execute(parse("space A affine dim 1\nspace A affine dim 2\n"))
    assert ei.value.line == 2


def test_unknown_coordinate_in_expression_has_position():
    with pytest.raises(ParseError) as ei:
        execute(parse("avbundle Z base(x)\nsection s = x + zz\n"))
    assert (ei.value.line, ei.value.column) == (2, 17)


def test_section_before_bundle():
    with pytest.raises(ExecError):
        execute(parse("section s = 1\n"))


def test_integrate_needs_parameter_values():
    text = 'dynamics newton metric=I1 potential="k*x1^2"\nintegrate steps=1\n'
    with pytest.raises(ExecError) as ei:
        execute(parse(text))
    assert "'k'" in str(ei.value)


def test_integrate_with_parameter_value():
    text = 'dynamics newton metric=I1 potential="k*x1^2/2" k=1\nintegrate dt=1/100 steps=100 state="0,1,0"\n'
    rep = execute(parse(text))
    assert rep.passed and "x1=0.5403" in rep.checks[-1].value


def test_integrate_bad_state_length():
    with pytest.raises(ExecError):
        execute(parse('dynamics newton metric=I1\nintegrate state="1,2"\n'))


def test_metric_forms():
    assert parse_metric("I2") == [[1, 0], [0, 1]]
    assert parse_metric("diag(1,2)") == [[1, 0], [0, 2]]
    assert parse_metric("2,1;1,2") == [[2, 1], [1, 2]]
    with pytest.raises(ValueError):
        parse_metric("1,2;3")


def test_vertical_bracket_is_difference_of_sections():
    text = "avbundle Z base(x, y)\nsection sigma = x^2\nsection sigma2 = y\nbracket vertical F(sigma) F(sigma2)\n"
    rep = execute(parse(text))
    assert rep.checks[-1].value == "x^2 - y"


# ---------------------------------------------------------------------------
# reports


def test_report_all_pass_has_no_witness():
    rep = CheckReport("ok")
    rep.add("a", True, witness="ignored")
    doc = json.loads(render_json(rep))
    jsonschema.validate(doc, SCHEMA)
    assert "witness" not in doc["results"][0]


def test_report_failure_has_witness():
    rep = CheckReport("bad")
    rep.add("a", False, witness="x != y")
    doc = json.loads(render_json(rep))
    jsonschema.validate(doc, SCHEMA)
    assert doc["results"][0]["witness"] == "x != y"
    assert "witness: x != y" in render_text(rep)


def test_report_empty_suite():
    doc = json.loads(render_json(CheckReport("empty")))
    jsonschema.validate(doc, SCHEMA)
    assert doc == {"suite": "empty", "results": []}


def test_schema_rejects_pass_with_witness():
    bad = {"suite": "s", "results": [{"id": "a", "status": "pass", "witness": "w", "ms": 0}]}
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(bad, SCHEMA)


# ---------------------------------------------------------------------------
# subcommands


def test_check_suite_exit_code(tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run_cli("check", "--suite", "mechanics", "--format", "json", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, SCHEMA)
    assert doc["suite"] == "mechanics" and doc["results"]


def test_dynamics_subcommand_symbolic_parameter():
    code, out, _ = run_cli("dynamics", "newton", "--metric", "I3", "--mass", "1",
                           "--potential", "1/2*k*(x1^2+x2^2+x3^2)")
    assert code == 0
    assert "= -x1*k" in out and "= p1" in out


def test_integrate_subcommand_csv(tmp_path):
    out = tmp_path / "traj.csv"
    code, text, _ = run_cli("integrate", "--metric", "I1", "--potential", "k*x1^2/2", "--param", "k=1",
                            "--state", "0,1,0", "--dt", "1e-3", "--steps", "1000", "--out", str(out))
    assert code == 0 and "final state" in text
    rows = out.read_text().splitlines()
    assert rows[0] == "t,x0,x1,p1" and len(rows) == 1002
    t, x0, x1, p1 = map(float, rows[-1].split(","))
    assert abs(x1 - 0.5403023058681398) < 1e-10 and abs(p1 + 0.8414709848078965) < 1e-10


def test_integrate_subcommand_stdout():
    code, text, _ = run_cli("integrate", "--metric", "I1", "--steps", "2", "--dt", "0.5")
    assert code == 0 and text.splitlines()[0] == "t,x0,x1,p1" and len(text.splitlines()) == 4


def test_integrate_rejects_bad_steps():
    code, _, err = run_cli("integrate", "--metric", "I1", "--steps", "0")
    assert code == 2 and "steps" in err


def test_fmt_subcommand_is_canonical(tmp_path):
    src = tmp_path / "s.avg"
    src.write_text("avbundle   Z base( x,y )\nsection s =   x^2 # c\n")
    code, out, _ = run_cli("fmt", str(src))
    assert code == 0 and out == "avbundle Z base(x, y) fiber(s)\nsection s = x^2\n"


def test_statement_equality_ignores_positions():
    a = Statement("check", 1, 1, kind="canonical", args=(Ref("P", 1, 17),))
    b = Statement("check", 9, 4, kind="canonical", args=(Ref("P", 9, 20),))
    assert a == b
    assert FRef(Ref("s")) == FRef(Ref("s", 3, 3)) and Expr("x", 1, 1) == Expr("x", 2, 2)
