"""Script execution: declarations fill an environment, commands produce checks."""

from __future__ import annotations

import re
import time
from dataclasses import dataclass
from fractions import Fraction

from .. import affspace as A
from .. import algebroids as G
from .. import avbrackets as B
from .. import avbundle as Z
from .. import mechanics as M
from ..checks import Check, CheckReport
from ..exactpoly import MULTIVECTOR, Poly, PolyTensor, pullback_form, schouten_nijenhuis, wedge
from ..expr import ParseError, parse_poly, parse_tensor
from .dsl import Expr, FRef, Ref, Script, Statement, render_statement


class ExecError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        if not self.line:
            return self.message
        return f"line {self.line}, column {self.column}: {self.message}"


@dataclass
class Binding:
    kind: str  # space, avbundle, section, gauge, tensor, rzsection, affgebroid, structure
    value: object
    line: int


# errors raised by the library that describe bad input rather than bugs
_DOMAIN_ERRORS = (A.AffSpaceError, Z.BundleError, G.MembershipError, B.StructureError, M.MechanicsError,
                  ValueError, ZeroDivisionError)

_KIND_OF_DECL = {"space": "space", "avbundle": "avbundle", "section": "section", "gauge": "gauge",
                 "tensor": "tensor", "rzsection": "rzsection", "affgebroid": "affgebroid",
                 "affpoisson": "structure", "affjacobi": "structure"}


@dataclass
class Dynamics:
    field: PolyTensor
    chart: tuple  # the state chart; field.chart may carry extra parameters


class Engine:
    def __init__(self, suite: str = "script"):
        self.env: dict = {}
        self.last_bundle: Binding | None = None
        self.dynamics: Dynamics | None = None
        self.trajectory: M.Trajectory | None = None
        self.report = CheckReport(suite)

    # -- environment ---------------------------------------------------------

    def lookup(self, ref: Ref, want, stmt: Statement) -> object:
        b = self.env.get(ref.name)
        if b is None:
            raise ExecError(f"undefined identifier {ref.name!r} in '{render_statement(stmt)}'", ref.line, ref.col)
        wants = (want,) if isinstance(want, str) else tuple(want)
        if b.kind not in wants:
            raise ExecError(f"{ref.name!r} is a {b.kind} (line {b.line}), expected a {' or '.join(wants)}",
                            ref.line, ref.col)
        return b.value

    def bundle_for(self, stmt: Statement) -> Z.AVChart:
        if stmt.target is not None:
            return self.lookup(stmt.target, "avbundle", stmt)
        if self.last_bundle is None:
            raise ExecError(f"no avbundle declared before this {stmt.keyword}", stmt.line, stmt.col)
        return self.last_bundle.value

    def bind(self, stmt: Statement, value):
        kind = _KIND_OF_DECL[stmt.keyword]
        prev = self.env.get(stmt.name.name)
        if prev is not None:
            raise ExecError(f"{stmt.name.name!r} already declared on line {prev.line}", stmt.name.line, stmt.name.col)
        b = Binding(kind, value, stmt.line)
        self.env[stmt.name.name] = b
        if kind == "avbundle":
            self.last_bundle = b

    # -- running -------------------------------------------------------------

    def run(self, script: Script) -> CheckReport:
        for stmt in script.statements:
            self.execute(stmt)
        return self.report

    def execute(self, stmt: Statement):
        t = time.perf_counter()
        n0 = len(self.report.checks)
        try:
            getattr(self, "_" + stmt.keyword)(stmt)
        except (ExecError, ParseError):
            raise
        except _DOMAIN_ERRORS as e:
            raise ExecError(f"{type(e).__name__}: {e}", stmt.line, stmt.col) from e
        new = self.report.checks[n0:]
        ms = (time.perf_counter() - t) * 1000
        for c in new:
            c.ms = ms / len(new)

    def emit(self, stmt: Statement, rep: CheckReport | None = None, *, id: str | None = None, ok: bool = True,
             witness=None, value=None):
        label = render_statement(stmt)
        if rep is not None:
            for c in rep.checks:
                self.report.checks.append(Check(f"{label}: {c.id}", c.ok, c.witness, c.value))
            return
        full = label if id is None else f"{label}: {id}"
        self.report.add(full, ok, witness=witness, value=value)

    # -- expressions ---------------------------------------------------------

    @staticmethod
    def poly(e: Expr, chart) -> Poly:
        return parse_poly(e.text, chart, e.line, e.col)

    @staticmethod
    def multivector(e: Expr, chart, degree: int) -> PolyTensor:
        t = parse_tensor(e.text, chart, MULTIVECTOR, e.line, e.col)
        if t.degree == 0 and t.scalar_part().is_zero():
            return PolyTensor.zero(tuple(chart), MULTIVECTOR, degree)
        if t.degree != degree:
            raise ExecError(f"expected a multivector of degree {degree}, found degree {t.degree}", e.line, e.col)
        return t

    # -- declarations --------------------------------------------------------

    def _space(self, s: Statement):
        dim = int(s.args[0])
        opts = {k: tuple(Fraction(x) for x in v) for k, v in s.options}
        kind = s.kind
        if kind == "affine":
            if "v0" in opts:
                raise ExecError("an affine space carries no v0", s.line, s.col)
            sp = A.affine_space(dim, label=s.name.name) if "one" not in opts else \
                A.HullSpace(len(opts["one"]), A.AFFINE, one=opts["one"], label=s.name.name)
        elif kind == "special_affine":
            sp = A.special_affine_space(dim, v0=opts.get("v0"), one=opts.get("one"), label=s.name.name)
        elif kind in ("special", "special_vector"):
            if "one" in opts:
                raise ExecError("a special vector space carries no covector", s.line, s.col)
            sp = A.special_vector_space(dim, v0=opts.get("v0"), label=s.name.name)
        else:
            if "v0" in opts:
                raise ExecError("a cospecial vector space carries no v0", s.line, s.col)
            sp = A.cospecial_vector_space(dim, phi0=opts.get("one"), label=s.name.name)
        if sp.dim != dim:
            raise ExecError(f"given vectors describe a space of dimension {sp.dim}, not {dim}", s.line, s.col)
        self.bind(s, sp)

    def _avbundle(self, s: Statement):
        self.bind(s, Z.AVChart(tuple(s.args), s.options[0][1]))

    def _section(self, s: Statement):
        b = self.bundle_for(s)
        e = s.args[0]
        p = self.poly(e, b.base_coords)
        self.bind(s, Z.section(b, p))

    def _gauge(self, s: Statement):
        b = self.bundle_for(s)
        self.bind(s, Z.GaugeChange(b, self.poly(s.args[0], b.base_coords)))

    def _tensor(self, s: Statement):
        b = self.bundle_for(s)
        e = s.args[0]
        self.bind(s, parse_tensor(e.text, b.base_coords, None, e.line, e.col))

    def _rzsection(self, s: Statement):
        b = self.bundle_for(s)
        ch = b.base_coords
        X = self.multivector(s.args[0], ch, 1)
        alpha, beta, gamma = (self.poly(e, ch) for e in s.args[1:])
        self.bind(s, G.RZSection.make(ch, X, alpha, beta, gamma))

    def _affgebroid(self, s: Statement):
        opts = dict(s.options)
        if s.kind == "newton":
            if s.target is not None:
                raise ExecError("the newton affgebroid lives on space-time, not on a bundle", s.target.line,
                                s.target.col)
            st = _spacetime(opts, s)
            self.bind(s, M.newton_affgebroid(st))
            return
        if opts:
            raise ExecError(f"affgebroid {s.kind} takes no options", s.line, s.col)
        ch = self.bundle_for(s).base_coords
        make = {"canonical": G.canonical_z_affgebroid, "ttilde": G.ttilde_affine, "tbar": G.tbar_affgebroid,
                "lbar": G.lbar_affgebroid, "perturbed": G.perturbed_affgebroid}[s.kind]
        self.bind(s, make(ch))

    def _structure(self, s: Statement):
        b = self.bundle_for(s)
        ch = b.base_coords
        o = dict(s.options)
        L0 = self.multivector(o["lambda0"], ch, 2) if "lambda0" in o else None
        X0 = self.multivector(o["x0"], ch, 1) if "x0" in o else None
        if s.keyword == "affpoisson":
            self.bind(s, B.AffStructure.make(b, L0, X0, kind=B.POISSON))
            return
        G0 = self.multivector(o["gamma0"], ch, 1) if "gamma0" in o else None
        f0 = self.poly(o["f0"], ch) if "f0" in o else 0
        self.bind(s, B.AffStructure.make(b, L0, X0, G0, f0, kind=B.JACOBI))

    _affpoisson = _structure
    _affjacobi = _structure

    # -- commands ------------------------------------------------------------

    def _report(self, s: Statement):
        self.report.name = s.args[0]

    def _check(self, s: Statement):
        k = s.kind
        if k == "theorem":
            name, refs = s.args[0], s.args[1:]
            fn = A.THEOREMS.get(name)
            if fn is None:
                raise ExecError(f"unknown theorem {name!r}; choose one of {', '.join(A.THEOREMS)}", s.line, s.col)
            ops = [self.lookup(r, "space", s) for r in refs]
            w = fn(*ops)
            self.emit(s, ok=w.check(), witness=w.summary(), value=w.name)
            return
        ref = s.args[0]
        if k in ("canonical", "squared_zero"):
            S = self.lookup(ref, "structure", s)
            self.emit(s, B.canonicality_check(S) if k == "canonical" else B.squared_zero_report(S))
        elif k == "affgebroid":
            spec = self.lookup(ref, "affgebroid", s)
            rep = G.affgebroid_axioms(spec)
            self.emit(s, rep)
            if rep.passed:
                self.emit(s, B.c3_report(B.from_affgebroid(spec)))
        elif k == "duality":
            sp = self.lookup(ref, "space", s)
            modes = (["vector"] if sp.is_affine() else []) + (["special"] if sp.kind == A.SPECIAL_AFFINE else [])
            if not modes:
                raise ExecError(f"{ref.name!r} is a {sp.kind} space; double duals need an affine space",
                                ref.line, ref.col)
            for m in modes:
                w = A.double_dual_witness(sp, m)
                self.emit(s, id=f"{m} double dual is canonically isomorphic", ok=w.check(), witness=w.summary())
        elif k == "contact":
            self.emit(s, _contact_report(self.lookup(ref, "avbundle", s)))
        elif k == "phase":
            self.emit(s, _phase_report(self.lookup(ref, "avbundle", s)))
        elif k == "gauge":
            self.emit(s, _gauge_report(self.lookup(ref, "gauge", s)))
        elif k == "jacobi":
            R, S2, T = (self.lookup(r, "rzsection", s) for r in s.args)
            _same_chart(s, R, S2, T)
            J = G.rz_jacobiator(R, S2, T)
            self.emit(s, id="jacobiator vanishes", ok=J.is_zero(), witness=J)
        elif k == "membership":
            R = self.lookup(ref, "rzsection", s)
            tags = sorted(G.subbundle_membership(R))
            self.emit(s, value="{" + ", ".join(tags) + "}")

    def _bracket(self, s: Statement):
        k = s.kind
        if k == "vertical":
            secs = [self._section_operand(s, a) for a in s.args]
            b = secs[0].bundle
            if secs[1].bundle != b:
                raise ExecError("sections of different bundles", s.line, s.col)
            v = Z.vertical_jacobi(b, Z.f_map(secs[0]), Z.f_map(secs[1]))
            self.emit(s, value=v)
        elif k == "aff":
            S = self.lookup(s.args[0], "structure", s)
            a, c = (self._section_operand(s, x) for x in s.args[1:])
            for x, sec in zip(s.args[1:], (a, c)):
                if sec.bundle != S.bundle:
                    r = x.ref if isinstance(x, FRef) else x
                    raise ExecError(f"{r.name!r} is a section of another bundle", r.line, r.col)
            self.emit(s, value=B.aff_bracket(S, a, c))
        elif k == "rz":
            R, S2 = (self.lookup(r, "rzsection", s) for r in s.args)
            _same_chart(s, R, S2)
            self.emit(s, value=G.rz_bracket(R, S2))
        else:
            P, Q = (self.lookup(r, "tensor", s) for r in s.args)
            for r, t in zip(s.args, (P, Q)):
                if t.kind != MULTIVECTOR:
                    raise ExecError(f"{r.name!r} is a form; the Schouten bracket takes multivectors", r.line, r.col)
            _same_chart(s, P, Q)
            self.emit(s, value=schouten_nijenhuis(P, Q))

    def _section_operand(self, s: Statement, a) -> Z.AVSection:
        ref = a.ref if isinstance(a, FRef) else a
        return self.lookup(ref, "section", s)

    def _dual(self, s: Statement):
        sp = self.lookup(s.args[0], "space", s)
        mode = s.kind or ("special" if sp.kind == A.SPECIAL_AFFINE else "vector")
        if mode == "special":
            d = A.special_dual(sp)
        elif sp.kind == A.SPECIAL_VECTOR:
            d = A.affine_dual(sp)
        else:
            d = A.vector_dual(sp)
        self.emit(s, value=describe_space(d))

    def _construct(self, s: Statement):
        ops = [self.lookup(r, "space", s) for r in s.args]
        c = A.categorial_construct(s.kind, ops)
        if s.target is not None:
            if s.target.name in self.env:
                prev = self.env[s.target.name]
                raise ExecError(f"{s.target.name!r} already declared on line {prev.line}", s.target.line,
                                s.target.col)
            self.env[s.target.name] = Binding("space", c.space, s.line)
        self.emit(s, value=describe_space(c.space))

    def _dynamics(self, s: Statement):
        opts = dict(s.options)
        if s.kind == "newton":
            st = _spacetime(opts, s)
            xs = st.chart()
            params = _numeric_params(opts, ("metric", "mass", "potential"), s)
            phi = None
            if "potential" in opts:
                e = _expr_option(opts, "potential", s)
                phi = _substitute(self._poly_with_params(e, xs), params)
            h = M.newton_hamiltonian(st, phi)
            V = M.newton_dynamics(st, h)
            E = M.newton_expected(st, phi if phi is not None else 0)
            chart = st.phase_chart()
            self.emit(s, id="agrees with x' = g^-1 p/m + u, p' = -grad phi", ok=V == E,
                      witness=f"bracket route {V}, direct {E}")
        else:
            chart = M.timedep_chart(1)
            params = _numeric_params(opts, ("H",), s)
            if "H" not in opts:
                raise ExecError("dynamics timedep needs H=\"...\"", s.line, s.col)
            e = _expr_option(opts, "H", s)
            H = _substitute(self.poly(e, chart + tuple(params)), params)
            H = H.on(chart)
            V = M.timedep_dynamics(H)
            D = M.timedep_direct(H)
            C = M.timedep_cotangent_route(H)
            self.emit(s, id="agrees with X_H + d/dt", ok=V == D, witness=f"bracket route {V}, direct {D}")
            self.emit(s, id="agrees with the projected cotangent field", ok=V == C,
                      witness=f"bracket route {V}, cotangent {C}")
        for i, x in enumerate(chart):
            self.emit(s, id=f"d{x}/dt", value=V.component((i,)))
        self.dynamics = Dynamics(V, chart)

    def _poly_with_params(self, e: Expr, chart) -> Poly:
        """Parse on chart, letting unknown identifiers become parameters appended after it."""
        extra = tuple(n for n in dict.fromkeys(re.findall(r"[A-Za-z_]\w*", e.text))
                      if n not in chart and not (n[:1] == "d" and n[1:] in chart))
        return self.poly(e, tuple(chart) + extra)

    def _integrate(self, s: Statement):
        if self.dynamics is None:
            raise ExecError("integrate needs a preceding dynamics command", s.line, s.col)
        opts = dict(s.options)
        for k in opts:
            if k not in ("dt", "steps", "state", "out"):
                raise ExecError(f"unknown integrate option {k!r}", s.line, s.col)
        dyn = self.dynamics
        if dyn.field.chart != dyn.chart:
            free = [c for c in dyn.field.chart if c not in dyn.chart]
            raise ExecError(f"parameter {free[0]!r} has no value; give it as an option of dynamics, "
                            f"e.g. {free[0]}=1", s.line, s.col)
        dt = _float_option(opts, "dt", 1e-3, s)
        steps = _int_option(opts, "steps", 1000, s)
        state = _state_option(opts, dyn.chart, s)
        traj = M.integrate(dyn.field, M.PhaseState(dyn.chart, state), dt, steps)
        self.trajectory = traj
        if "out" in opts:
            out = opts["out"]
            traj.write_csv(out.text if isinstance(out, Expr) else out)
        self.emit(s, id="final state", value=format_state(dyn.chart, traj.final))


# ---------------------------------------------------------------------------
# helpers


def describe_space(sp: A.HullSpace) -> str:
    parts = [f"{sp.kind}", f"dim {sp.dim}", f"hull {sp.hull_dim}"]
    if sp.one is not None:
        parts.append("one=[" + ",".join(str(x) for x in sp.one) + "]")
    if sp.v0 is not None:
        parts.append("v0=[" + ",".join(str(x) for x in sp.v0) + "]")
    return " ".join(parts)


def format_state(chart, coords) -> str:
    return ", ".join(f"{c}={v:.10g}" for c, v in zip(chart, coords))


def _same_chart(s: Statement, *objs):
    charts = {o.chart for o in objs}
    if len(charts) != 1:
        raise ExecError("operands live on different charts", s.line, s.col)


def parse_metric(text: str) -> list:
    """I<n> (identity), diag(a,b,..) or rows a,b;c,d."""
    t = text.replace(" ", "")
    m = re.fullmatch(r"I(\d+)", t)
    if m:
        n = int(m.group(1))
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    m = re.fullmatch(r"diag\((.*)\)", t)
    if m:
        d = [Fraction(x) for x in m.group(1).split(",")]
        return [[d[i] if i == j else Fraction(0) for j in range(len(d))] for i in range(len(d))]
    rows = [[Fraction(x) for x in r.split(",")] for r in t.split(";")]
    if len({len(r) for r in rows}) != 1 or len(rows) != len(rows[0]):
        raise ValueError(f"metric {text!r} is not square")
    return rows


def _spacetime(opts: dict, s: Statement) -> M.NewtonSpacetime:
    metric = opts.get("metric", "I3")
    metric = metric.text if isinstance(metric, Expr) else str(metric)
    try:
        g = parse_metric(metric)
        mass = Fraction(str(opts.get("mass", "1")))
    except (ValueError, ZeroDivisionError) as e:
        raise ExecError(f"bad metric or mass: {e}", s.line, s.col) from e
    return M.standard_spacetime(g, mass, space_dim=len(g))


def _numeric_params(opts: dict, known, s: Statement) -> dict:
    out = {}
    for k, v in opts.items():
        if k in known:
            continue
        try:
            out[k] = Fraction(v) if isinstance(v, str) else None
        except (ValueError, ZeroDivisionError):
            out[k] = None
        if out[k] is None:
            raise ExecError(f"option {k!r} must be a number", s.line, s.col)
    return out


def _expr_option(opts: dict, key: str, s: Statement) -> Expr:
    v = opts[key]
    if not isinstance(v, Expr):
        v = Expr(str(v), s.line, s.col)
    return v


def _substitute(p: Poly, params: dict) -> Poly:
    if not params:
        return p
    sub = {n: Poly.const(p.chart, v) for n, v in params.items() if n in p.chart}
    keep = tuple(c for c in p.chart if c not in sub)
    return p.substitute(sub, p.chart).on(keep) if sub else p


def _float_option(opts, key, default, s) -> float:
    v = opts.get(key, default)
    try:
        return float(Fraction(v)) if isinstance(v, str) else float(v)
    except (ValueError, ZeroDivisionError) as e:
        raise ExecError(f"option {key!r} must be a number, got {v!r}", s.line, s.col) from e


def _int_option(opts, key, default, s) -> int:
    v = opts.get(key, default)
    if isinstance(v, str) and not re.fullmatch(r"\d+", v):
        raise ExecError(f"option {key!r} must be a positive integer, got {v!r}", s.line, s.col)
    return int(v)


def _state_option(opts, chart, s) -> list:
    if "state" not in opts:
        return [0.0] * len(chart)
    v = opts["state"]
    text = v.text if isinstance(v, Expr) else str(v)
    try:
        xs = [float(Fraction(x.strip())) for x in text.split(",")]
    except (ValueError, ZeroDivisionError) as e:
        raise ExecError(f"state must be comma-separated numbers, got {text!r}", s.line, s.col) from e
    if len(xs) != len(chart):
        raise ExecError(f"state has {len(xs)} entries, chart ({', '.join(chart)}) needs {len(chart)}",
                        s.line, s.col)
    return xs


def _contact_report(b: Z.AVChart) -> CheckReport:
    rep = CheckReport("contact")
    cs = Z.contact_structure(b)
    LL = schouten_nijenhuis(cs.Lambda, cs.Lambda)
    d = LL + wedge(cs.Gamma, cs.Lambda) * 2
    rep.add("[[Lambda, Lambda]] = -2 Gamma ^ Lambda", d.is_zero(), witness=d)
    GL = schouten_nijenhuis(cs.Gamma, cs.Lambda)
    rep.add("[[Gamma, Lambda]] = 0", GL.is_zero(), witness=GL)
    ch = cs.chart
    gens = [Poly.var(ch, x) for x in ch]
    bad = None
    for i, f in enumerate(gens):
        for j, g in enumerate(gens[i + 1:], i + 1):
            for h in gens[j + 1:]:
                jac = cs.bracket(f, cs.bracket(g, h)) + cs.bracket(g, cs.bracket(h, f)) + cs.bracket(h, cs.bracket(f, g))
                if bad is None and not jac.is_zero():
                    bad = f"{f}, {g}, {h}: {jac}"
    rep.add("Jacobi identity on coordinate functions", bad is None, witness=bad)
    return rep


def _phase_report(b: Z.AVChart) -> CheckReport:
    rep = CheckReport("phase")
    om = Z.phase_symplectic(b)
    d_theta = Z.affine_differential(Z.liouville(b))
    rep.add("d theta = omega", d_theta == om, witness=d_theta)
    adj = Z.adjoint_symplectic(b)
    rep.add("omega of the adjoint bundle is -omega", adj == -om, witness=adj)
    return rep


def _gauge_report(g: Z.GaugeChange) -> CheckReport:
    rep = CheckReport("gauge")
    b = g.bundle
    om = Z.phase_symplectic(b)
    moved = pullback_form(om, g.phase_map(), b.phase_chart())
    rep.add("omega is gauge invariant", moved == om, witness=moved - om)
    cs = Z.contact_structure(b)
    eta = Z.gauge_contact_form(cs.eta, g)
    rep.add("contact form is gauge invariant", eta == cs.eta, witness=eta - cs.eta)
    lam = Z.gauge_contact_tensor(cs.Lambda, g)
    rep.add("contact bivector is gauge invariant", lam == cs.Lambda, witness=lam - cs.Lambda)
    return rep


def execute(script: Script, suite: str = "script") -> CheckReport:
    return Engine(suite).run(script)


__all__ = ["ExecError", "Engine", "execute", "parse_metric", "describe_space", "format_state"]
