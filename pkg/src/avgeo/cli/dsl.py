"""Line-oriented script language.

One statement per line, ``#`` starts a comment.  Declarations::

    space A affine dim 2
    space V special dim 3 v0=[0,0,1]         # special vector space; also special_affine, cospecial_vector
    avbundle Z base(x, y) fiber(s)
    gauge g [on Z] = x^3
    section sigma [on Z] = x^2 - y
    tensor L [on Z] = d/dx^d/dy
    rzsection R [on Z] = (x*d/dy, 0, y, 0)
    affgebroid G = canonical [on Z]          # also ttilde, tbar, lbar, perturbed, newton
    affpoisson P [on Z] = (lambda0: d/dx^d/dy, x0: d/dx)
    affjacobi J [on Z] = (lambda0: ..., x0: ..., gamma0: ..., f0: -1)

Commands::

    check canonical P          check squared_zero P     check affgebroid G
    check duality A            check contact Z          check theorem hull_product A B
    check phase Z              check jacobi R S T       check membership R
    check gauge g
    bracket vertical F(sigma) F(tau)
    bracket aff P sigma tau    bracket rz R S           bracket schouten L M
    dual A
    construct a_tensor A B as C
    dynamics newton metric=I3 mass=1 potential="1/2*(x1^2+x2^2+x3^2)"
    dynamics timedep H="p^2/2 + t*q"
    integrate dt=0.001 steps=1000 state="0,0,0,0,1,0,0" [out="traj.csv"]
    report "suite name"

Expressions are kept as source text with their positions and parsed
against a chart when the script runs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..expr import ParseError, tokenize

SPACE_KINDS = ("affine", "special", "special_affine", "special_vector", "cospecial_vector")
GEBROID_KINDS = ("canonical", "ttilde", "tbar", "lbar", "perturbed", "newton")
CHECK_ARITY = {
    "canonical": 1, "squared_zero": 1, "affgebroid": 1, "duality": 1, "contact": 1, "phase": 1,
    "jacobi": 3, "membership": 1, "gauge": 1, "theorem": None,
}
BRACKET_ARITY = {"vertical": 2, "aff": 3, "rz": 2, "schouten": 2}
CONSTRUCT_KINDS = ("a_times", "a_oplus", "sv_times", "sv_oplus", "cv_times", "cv_oplus", "sa_times", "sa_oplus",
                   "boxtimes", "sa_tensor", "a_tensor", "specialization")
DYNAMICS_KINDS = ("newton", "timedep")
STRUCTURE_KEYS = {"affpoisson": ("lambda0", "x0"), "affjacobi": ("lambda0", "x0", "gamma0", "f0")}
DECLS = ("space", "avbundle", "section", "gauge", "tensor", "rzsection", "affgebroid", "affpoisson", "affjacobi")
COMMANDS = ("check", "bracket", "dual", "construct", "dynamics", "integrate", "report")


@dataclass(frozen=True)
class Ref:
    name: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Expr:
    text: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class FRef:
    """F(name): the affine function of a section."""
    ref: Ref

    def __str__(self) -> str:
        return f"F({self.ref})"


@dataclass(frozen=True)
class Statement:
    keyword: str
    line: int = field(compare=False)
    col: int = field(compare=False)
    name: Ref | None = None
    kind: str | None = None  # sub-keyword: space kind, check kind, bracket kind, ...
    target: Ref | None = None  # "on BUNDLE" or "as NAME"
    args: tuple = ()  # Refs, FRefs, Exprs, or words
    options: tuple = ()  # (key, value) pairs; value is str or Expr

    @property
    def is_declaration(self) -> bool:
        return self.keyword in DECLS

    def refs(self) -> list:
        out = []
        for a in self.args:
            if isinstance(a, Ref):
                out.append(a)
            elif isinstance(a, FRef):
                out.append(a.ref)
        if self.target is not None and self.keyword != "construct":
            out.append(self.target)
        return out

    def label(self) -> str:
        return render_statement(self)


@dataclass
class Script:
    statements: list

    def render(self) -> str:
        return "".join(render_statement(s) + "\n" for s in self.statements)


def _opt(v) -> str:
    if isinstance(v, Expr):
        return '"' + v.text + '"'
    if isinstance(v, tuple):
        return "[" + ",".join(v) + "]"
    return str(v)


def render_statement(s: Statement) -> str:
    k = s.keyword
    on = f" on {s.target}" if s.target is not None else ""
    if k == "space":
        opts = "".join(f" {key}={_opt(v)}" for key, v in s.options)
        return f"space {s.name} {s.kind} dim {s.args[0]}{opts}"
    if k == "avbundle":
        return f"avbundle {s.name} base({', '.join(s.args)}) fiber({s.options[0][1]})"
    if k in ("section", "gauge", "tensor"):
        return f"{k} {s.name}{on} = {s.args[0]}"
    if k == "rzsection":
        return f"rzsection {s.name}{on} = ({', '.join(str(a) for a in s.args)})"
    if k == "affgebroid":
        opts = "".join(f" {key}={_opt(v)}" for key, v in s.options)
        return f"affgebroid {s.name} = {s.kind}{on}{opts}"
    if k in STRUCTURE_KEYS:
        body = ", ".join(f"{key}: {v}" for key, v in s.options)
        return f"{k} {s.name}{on} = ({body})"
    if k in ("check", "bracket"):
        return " ".join([k, s.kind] + [str(a) for a in s.args])
    if k == "dual":
        return f"dual {s.args[0]}" + (f" {s.kind}" if s.kind else "")
    if k == "construct":
        tail = f" as {s.target}" if s.target is not None else ""
        return " ".join(["construct", s.kind] + [str(a) for a in s.args]) + tail
    if k == "dynamics":
        return " ".join(["dynamics", s.kind] + [f"{key}={_opt(v)}" for key, v in s.options])
    if k == "integrate":
        return " ".join(["integrate"] + [f"{key}={_opt(v)}" for key, v in s.options])
    if k == "report":
        return f'report "{s.args[0]}"'
    raise ValueError(k)


# ---------------------------------------------------------------------------
# scanner


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?(?:/\d+)?")


class _Line:
    def __init__(self, text: str, line: int):
        self.text = text
        self.line = line
        self.pos = 0

    # positions are 1-based columns
    @property
    def col(self) -> int:
        return self.pos + 1

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.ws()
        return self.pos >= len(self.text)

    def fail(self, msg: str, expected=(), col: int | None = None):
        raise ParseError(msg, self.line, col if col is not None else self.col, tuple(expected))

    def _found(self) -> str:
        self.ws()
        if self.pos >= len(self.text):
            return "end of line"
        m = _IDENT.match(self.text, self.pos)
        if m:
            return repr(m.group())
        return repr(self.text[self.pos])

    def peek_char(self) -> str:
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def ident(self, what: str = "identifier", expected=None) -> Ref:
        self.ws()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            self.fail(f"expected {what}, found {self._found()}", expected or (what,))
        r = Ref(m.group(), self.line, self.col)
        self.pos = m.end()
        return r

    def word(self, choices, what: str) -> str:
        self.ws()
        col = self.col
        m = _IDENT.match(self.text, self.pos)
        if not m or m.group() not in choices:
            self.fail(f"expected {what}, found {self._found()}", choices, col)
        self.pos = m.end()
        return m.group()

    def maybe_word(self, w: str) -> bool:
        self.ws()
        m = _IDENT.match(self.text, self.pos)
        if m and m.group() == w:
            self.pos = m.end()
            return True
        return False

    def char(self, c: str):
        self.ws()
        if self.pos >= len(self.text) or self.text[self.pos] != c:
            self.fail(f"expected {c!r}, found {self._found()}", (c,))
        self.pos += 1

    def maybe_char(self, c: str) -> bool:
        self.ws()
        if self.pos < len(self.text) and self.text[self.pos] == c:
            self.pos += 1
            return True
        return False

    def number(self, what: str = "number") -> str:
        self.ws()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.fail(f"expected {what}, found {self._found()}", (what,))
        self.pos = m.end()
        return m.group()

    def string(self) -> Expr:
        self.ws()
        if not self.maybe_char('"'):
            self.fail(f"expected a quoted string, found {self._found()}", ('"',))
        start = self.pos
        end = self.text.find('"', start)
        if end < 0:
            self.fail("unterminated string", ('"',), col=start)
        self.pos = end + 1
        raw = self.text[start:end]
        lead = len(raw) - len(raw.lstrip())
        return Expr(raw.strip(), self.line, start + 1 + lead)

    def expr(self, stops: str = "") -> Expr:
        """Raw expression text up to a stop character at depth 0 or the end of line."""
        self.ws()
        start = self.pos
        depth = 0
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c == "(":
                depth += 1
            elif c == ")":
                if depth == 0 and ")" in stops:
                    break
                depth -= 1
            elif depth == 0 and c in stops:
                break
            self.pos += 1
        raw = self.text[start:self.pos]
        text = raw.strip()
        if not text:
            self.fail("expected an expression", ("expression",), col=start + 1)
        e = Expr(text, self.line, start + 1)
        tokenize(text, self.line, start + 1)  # lexical errors carry positions
        return e

    def end(self):
        if not self.at_end():
            self.fail(f"unexpected {self._found()}", ("end of line",))


# ---------------------------------------------------------------------------
# parser


def parse(text: str) -> Script:
    stmts = []
    for i, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw)
        if not body.strip():
            continue
        stmts.append(_statement(_Line(body, i)))
    return Script(stmts)


def _strip_comment(line: str) -> str:
    out, in_str = [], False
    for c in line:
        if c == '"':
            in_str = not in_str
        if c == "#" and not in_str:
            break
        out.append(c)
    return "".join(out).rstrip()


def _statement(ln: _Line) -> Statement:
    ln.ws()
    col = ln.col
    kw = ln.word(DECLS + COMMANDS, "a declaration or command")
    fn = _HANDLERS[kw]
    st = fn(ln, kw, col)
    ln.end()
    return st


def _on(ln: _Line) -> Ref | None:
    if ln.maybe_word("on"):
        return ln.ident("bundle name")
    return None


def _space(ln, kw, col):
    name = ln.ident("name")
    kind = ln.word(SPACE_KINDS, "space kind")
    ln.word(("dim",), "'dim'")
    ln.ws()
    at = ln.col
    dim = ln.number("dimension")
    if not dim.isdigit() or int(dim) < (0 if kind in ("affine", "special_affine") else 1):
        ln.fail(f"dimension must be a non-negative integer, got {dim}", ("dimension",), at)
    opts = _options(ln)
    for key, v in opts:
        if key not in ("one", "v0") or not isinstance(v, tuple):
            ln.fail(f"unknown space option {key!r}", ("one=[..]", "v0=[..]"), col)
    return Statement(kw, ln.line, col, name=name, kind=kind, args=(dim,), options=opts)


def _avbundle(ln, kw, col):
    name = ln.ident("name")
    ln.word(("base",), "'base'")
    ln.char("(")
    coords = [ln.ident("coordinate").name]
    while ln.maybe_char(","):
        coords.append(ln.ident("coordinate").name)
    if not ln.maybe_char(")"):
        ln.fail(f"expected ',' or ')', found {ln._found()}", (",", ")"))
    fiber = "s"
    if ln.maybe_word("fiber"):
        ln.char("(")
        fiber = ln.ident("fiber coordinate").name
        ln.char(")")
    if fiber in coords or len(set(coords)) != len(coords):
        ln.fail("coordinate names must be distinct", ("distinct names",), col)
    return Statement(kw, ln.line, col, name=name, args=tuple(coords), options=(("fiber", fiber),))


def _section(ln, kw, col):
    name = ln.ident("name")
    target = _on(ln)
    ln.char("=")
    return Statement(kw, ln.line, col, name=name, target=target, args=(ln.expr(),))


def _rzsection(ln, kw, col):
    name = ln.ident("name")
    target = _on(ln)
    ln.char("=")
    ln.ws()
    open_col = ln.col
    ln.char("(")
    parts = [ln.expr(",)")]
    while ln.maybe_char(","):
        parts.append(ln.expr(",)"))
    ln.char(")")
    if len(parts) != 4:
        ln.fail(f"rzsection takes 4 components (X, alpha, beta, gamma), got {len(parts)}",
                ("4 components",), open_col)
    return Statement(kw, ln.line, col, name=name, target=target, args=tuple(parts))


def _options(ln: _Line) -> tuple:
    out = []
    while not ln.at_end():
        key = ln.ident("option name").name
        ln.char("=")
        c = ln.peek_char()
        if c == '"':
            val = ln.string()
        elif c == "[":
            ln.char("[")
            nums = [ln.number()]
            while ln.maybe_char(","):
                nums.append(ln.number())
            ln.char("]")
            val = tuple(nums)
        elif c and (c.isdigit() or c in "-+."):
            val = ln.number("option value")
        else:
            val = ln.ident("option value").name
            if ln.maybe_char("("):
                nums = [ln.number()]
                while ln.maybe_char(","):
                    nums.append(ln.number())
                ln.char(")")
                val = f"{val}({','.join(nums)})"
        if any(k == key for k, _ in out):
            ln.fail(f"option {key!r} given twice", ())
        out.append((key, val))
    return tuple(out)


def _affgebroid(ln, kw, col):
    name = ln.ident("name")
    ln.char("=")
    kind = ln.word(GEBROID_KINDS, "affgebroid kind")
    target = _on(ln)
    return Statement(kw, ln.line, col, name=name, kind=kind, target=target, options=_options(ln))


def _structure(ln, kw, col):
    name = ln.ident("name")
    target = _on(ln)
    ln.char("=")
    ln.char("(")
    allowed = STRUCTURE_KEYS[kw]
    opts = []
    while True:
        key = ln.word(allowed, f"{kw} component")
        if any(k == key for k, _ in opts):
            ln.fail(f"component {key!r} given twice", allowed)
        ln.char(":")
        opts.append((key, ln.expr(",)")))
        if ln.maybe_char(","):
            continue
        if ln.maybe_char(")"):
            break
        ln.fail(f"expected ',' or ')', found {ln._found()}", (",", ")"))
    return Statement(kw, ln.line, col, name=name, target=target, options=tuple(opts))


def _refs_to_end(ln: _Line, n: int | None, what: str, lo: int = 1) -> tuple:
    out = []
    while not ln.at_end():
        out.append(ln.ident("name"))
    if n is not None and len(out) != n:
        ln.fail(f"{what} takes {n} operand{'s' if n != 1 else ''}, got {len(out)}", (f"{n} names",))
    if n is None and len(out) < lo:
        ln.fail(f"{what} takes at least {lo} operand(s), got {len(out)}", ("name",))
    return tuple(out)


def _check(ln, kw, col):
    kind = ln.word(tuple(CHECK_ARITY), "check kind")
    if kind == "theorem":
        thm = ln.ident("theorem name")
        args = (thm.name,) + _refs_to_end(ln, None, "check theorem")
        return Statement(kw, ln.line, col, kind=kind, args=args)
    return Statement(kw, ln.line, col, kind=kind, args=_refs_to_end(ln, CHECK_ARITY[kind], f"check {kind}"))


def _operand(ln: _Line):
    r = ln.ident("operand")
    if r.name == "F" and ln.maybe_char("("):
        inner = ln.ident("section name")
        ln.char(")")
        return FRef(inner)
    return r


def _bracket(ln, kw, col):
    kind = ln.word(tuple(BRACKET_ARITY), "bracket kind")
    ops = []
    while not ln.at_end():
        ops.append(_operand(ln))
    n = BRACKET_ARITY[kind]
    if len(ops) != n:
        ln.fail(f"bracket {kind} takes {n} operands, got {len(ops)}", (f"{n} operands",))
    return Statement(kw, ln.line, col, kind=kind, args=tuple(ops))


def _dual(ln, kw, col):
    ref = ln.ident("space name")
    mode = None
    if not ln.at_end():
        mode = ln.word(("vector", "special"), "duality mode")
    return Statement(kw, ln.line, col, kind=mode, args=(ref,))


def _construct(ln, kw, col):
    kind = ln.word(CONSTRUCT_KINDS, "construction")
    refs = []
    target = None
    while not ln.at_end():
        if ln.maybe_word("as"):
            target = ln.ident("result name")
            break
        refs.append(ln.ident("space name"))
    need = 1 if kind == "specialization" else 2
    if (kind == "specialization" and len(refs) != 1) or len(refs) < need:
        ln.fail(f"construct {kind} takes {'1' if need == 1 else 'at least 2'} operand(s), got {len(refs)}",
                ("space name",))
    return Statement(kw, ln.line, col, kind=kind, args=tuple(refs), target=target)


def _dynamics(ln, kw, col):
    kind = ln.word(DYNAMICS_KINDS, "dynamics kind")
    return Statement(kw, ln.line, col, kind=kind, options=_options(ln))


def _integrate(ln, kw, col):
    return Statement(kw, ln.line, col, options=_options(ln))


def _report(ln, kw, col):
    if ln.peek_char() == '"':
        title = ln.string().text
    else:
        title = ln.ident("suite name").name
    return Statement(kw, ln.line, col, args=(title,))


_HANDLERS = {
    "space": _space, "avbundle": _avbundle, "section": _section, "gauge": _section, "tensor": _section,
    "rzsection": _rzsection, "affgebroid": _affgebroid, "affpoisson": _structure, "affjacobi": _structure,
    "check": _check, "bracket": _bracket, "dual": _dual, "construct": _construct, "dynamics": _dynamics,
    "integrate": _integrate, "report": _report,
}

__all__ = ["ParseError", "Script", "Statement", "Ref", "Expr", "FRef", "parse", "render_statement"]
