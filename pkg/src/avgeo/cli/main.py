"""avgeo command line: run scripts, verification suites, dynamics and integration."""

from __future__ import annotations

import argparse
import sys

from ..expr import ParseError
from .dsl import Expr, Script, Statement, parse
from .engine import Engine, ExecError
from .report import exit_code, render

SUITE_NAMES = ("all", "affspace", "avbundle", "algebroids", "avbrackets", "mechanics")


def _emit(data: bytes, out: str | None):
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _error(e: Exception, source: str | None = None) -> int:
    msg = f"avgeo: error: {e}\n"
    line = getattr(e, "line", None)
    col = getattr(e, "column", None)
    if source is not None and line:
        lines = source.splitlines()
        if 0 < line <= len(lines):
            msg += f"  {lines[line - 1]}\n  {' ' * (max(col, 1) - 1)}^\n"
    sys.stderr.write(msg)
    return 2


def _run_script(script: Script, name: str, fmt: str, out: str | None, source: str | None = None) -> int:
    try:
        rep = Engine(name).run(script)
    except (ParseError, ExecError) as e:
        return _error(e, source)
    _emit(render(rep, fmt), out)
    return exit_code(rep)


def cmd_run(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        sys.stderr.write(f"avgeo: error: {e}\n")
        return 2
    try:
        script = parse(text)
    except ParseError as e:
        return _error(e, text)
    name = args.file.replace("\\", "/").rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return _run_script(script, name, args.format, args.out, text)


def cmd_fmt(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    try:
        script = parse(text)
    except ParseError as e:
        return _error(e, text)
    _emit(script.render().encode("utf-8"), args.out)
    return 0


def cmd_check(args) -> int:
    from ..suites import run_suite
    rep = run_suite(args.suite)
    _emit(render(rep, args.format), args.out)
    return exit_code(rep)


def _options(args, system: str) -> tuple:
    opts = []
    if system == "newton":
        opts.append(("metric", Expr(args.metric)))
        opts.append(("mass", str(args.mass)))
        if args.potential:
            opts.append(("potential", Expr(args.potential)))
    else:
        if not args.hamiltonian:
            raise ExecError("timedep dynamics needs --hamiltonian", 0, 0)
        opts.append(("H", Expr(args.hamiltonian)))
    for p in args.param or ():
        key, sep, val = p.partition("=")
        if not sep or not key.strip():
            raise ExecError(f"--param expects NAME=VALUE, got {p!r}", 0, 0)
        opts.append((key.strip(), val.strip()))
    return tuple(opts)


def cmd_dynamics(args) -> int:
    try:
        stmt = Statement("dynamics", 1, 1, kind=args.system, options=_options(args, args.system))
    except ExecError as e:
        return _error(e)
    return _run_script(Script([stmt]), f"dynamics {args.system}", args.format, args.out)


def cmd_integrate(args) -> int:
    system = "timedep" if args.hamiltonian else "newton"
    try:
        dyn = Statement("dynamics", 1, 1, kind=system, options=_options(args, system))
    except ExecError as e:
        return _error(e)
    opts = [("dt", str(args.dt)), ("steps", str(args.steps))]
    if args.state:
        opts.append(("state", Expr(args.state)))
    eng = Engine(f"integrate {system}")
    try:
        eng.execute(dyn)
        eng.execute(Statement("integrate", 2, 1, options=tuple(opts)))
    except (ParseError, ExecError) as e:
        return _error(e)
    if args.out:
        eng.trajectory.write_csv(args.out)
        _emit(render(eng.report, args.format), None)
    else:
        eng.trajectory.write_csv(sys.stdout)
    return exit_code(eng.report)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="avgeo", description="AV-differential geometry: scripts and verification suites")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="execute a script")
    r.add_argument("file")
    r.add_argument("--format", choices=("text", "json"), default="text")
    r.add_argument("--out")
    r.set_defaults(fn=cmd_run)

    f = sub.add_parser("fmt", help="print a script in canonical form")
    f.add_argument("file")
    f.add_argument("--out")
    f.set_defaults(fn=cmd_fmt)

    c = sub.add_parser("check", help="run a verification suite")
    c.add_argument("--suite", choices=SUITE_NAMES, default="all")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--out")
    c.set_defaults(fn=cmd_check)

    def mech_args(q):
        q.add_argument("--metric", default="I3", help="I<n>, diag(a,b,..) or rows 'a,b;c,d'")
        q.add_argument("--mass", default="1")
        q.add_argument("--potential", help="polynomial in x1..xk (x0 is time)")
        q.add_argument("--hamiltonian", help="time-dependent H(q, p, t)")
        q.add_argument("--param", action="append", metavar="NAME=VALUE", help="value of a potential parameter")

    d = sub.add_parser("dynamics", help="vector field generated by a hamiltonian")
    d.add_argument("system", choices=("newton", "timedep"))
    mech_args(d)
    d.add_argument("--format", choices=("text", "json"), default="text")
    d.add_argument("--out")
    d.set_defaults(fn=cmd_dynamics)

    i = sub.add_parser("integrate", help="RK4 trajectory as CSV")
    mech_args(i)
    i.add_argument("--state", help="comma-separated initial state in chart order")
    i.add_argument("--dt", default="1e-3")
    i.add_argument("--steps", type=int, default=1000)
    i.add_argument("--out", help="CSV path (default: stdout)")
    i.add_argument("--format", choices=("text", "json"), default="text")
    i.set_defaults(fn=cmd_integrate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)
