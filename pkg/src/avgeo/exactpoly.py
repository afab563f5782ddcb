"""Exact polynomials, multivector fields and differential forms on a chart.

A chart is a tuple of coordinate names.  ``Poly`` is a sparse polynomial
with ``Fraction`` coefficients keyed by exponent tuples.  ``PolyTensor``
holds a skew tensor (multivector or form) as a map from strictly
increasing index tuples to ``Poly`` coefficients.  Indices refer to a
frame, which by default is the coordinate frame of the chart.

Conventions used throughout the package:

* ``(X^Y)(a, b) = a(X) b(Y) - a(Y) b(X)`` for bivectors on 1-forms.
* ``i_{X^Y} w = w(X, Y, ...)``, that is ``i_{X^Y} = i_Y o i_X``.
* The Schouten-Nijenhuis bracket extends the Lie bracket with
  ``[[X, f]] = X(f)`` and ``[[P, Q]] = -(-1)^{(p-1)(q-1)} [[Q, P]]``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _iproduct
from typing import Callable, Iterable, Mapping, Sequence

from .linalg import frac

Chart = tuple


class ChartMismatch(ValueError):
    pass


class DegreeError(ValueError):
    pass


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class Poly:
    """Sparse polynomial over the rationals on a named chart."""

    __slots__ = ("chart", "terms", "_hash")

    def __init__(self, chart: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.chart = tuple(chart)
        n = len(self.chart)
        clean: dict[tuple, Fraction] = {}
        for e, c in (terms or {}).items():
            c = frac(c)
            if c == 0:
                continue
            e = tuple(e)
            if len(e) != n or any(k < 0 for k in e):
                raise ValueError(f"bad exponent {e} for chart {self.chart}")
            clean[e] = clean.get(e, Fraction(0)) + c
            if clean[e] == 0:
                del clean[e]
        self.terms = clean
        self._hash = None

    # constructors
    @classmethod
    def const(cls, chart, c) -> "Poly":
        chart = tuple(chart)
        return cls(chart, {(0,) * len(chart): c})

    @classmethod
    def zero(cls, chart) -> "Poly":
        return cls(chart)

    @classmethod
    def var(cls, chart, name: str) -> "Poly":
        chart = tuple(chart)
        if name not in chart:
            raise ChartMismatch(f"{name!r} is not a coordinate of {chart}")
        e = [0] * len(chart)
        e[chart.index(name)] = 1
        return cls(chart, {tuple(e): 1})

    @classmethod
    def monomial(cls, chart, exps: Sequence[int], c=1) -> "Poly":
        return cls(chart, {tuple(exps): c})

    @classmethod
    def vars(cls, chart) -> tuple["Poly", ...]:
        return tuple(cls.var(chart, v) for v in chart)

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.chart), Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def depends_on(self, name: str) -> bool:
        if name not in self.chart:
            return False
        i = self.chart.index(name)
        return any(e[i] for e in self.terms)

    def free_vars(self) -> tuple[str, ...]:
        return tuple(v for v in self.chart if self.depends_on(v))

    # coercion
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.chart != self.chart:
                raise ChartMismatch(f"charts differ: {self.chart} vs {other.chart}")
            return other
        if _is_scalar(other) or isinstance(other, str):
            return Poly.const(self.chart, frac(other))
        return NotImplemented

    # arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, Fraction(0)) + c
        return Poly(self.chart, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.chart, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, PolyTensor):
            return NotImplemented
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, Fraction(0)) + c1 * c2
        return Poly(self.chart, t)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_scalar(other):
            c = frac(other)
            if c == 0:
                raise ZeroDivisionError("division of a polynomial by zero")
            return Poly(self.chart, {e: v / c for e, v in self.terms.items()})
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = Poly.const(self.chart, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.chart == other.chart and self.terms == other.terms
        if _is_scalar(other):
            return self.terms == Poly.const(self.chart, other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self.terms.items())))
        return self._hash

    # calculus
    def diff(self, var) -> "Poly":
        i = var if isinstance(var, int) else self.chart.index(var)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                t[tuple(e2)] = c * e[i]
        return Poly(self.chart, t)

    def gradient(self) -> tuple["Poly", ...]:
        return tuple(self.diff(i) for i in range(len(self.chart)))

    def substitute(self, mapping: Mapping[str, "Poly"], chart=None) -> "Poly":
        """Replace each coordinate by a polynomial on ``chart``.

        Coordinates missing from ``mapping`` are kept and must exist in
        the target chart.
        """
        target = tuple(chart) if chart is not None else self.chart
        images = []
        for v in self.chart:
            if v in mapping:
                img = mapping[v]
                if not isinstance(img, Poly):
                    img = Poly.const(target, img)
                if img.chart != target:
                    raise ChartMismatch(f"image of {v} lives on {img.chart}, expected {target}")
                images.append(img)
            else:
                images.append(Poly.var(target, v))
        out = Poly.zero(target)
        cache: dict[tuple[int, int], Poly] = {}
        for e, c in self.terms.items():
            term = Poly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    def on(self, chart) -> "Poly":
        """Re-express on another chart containing every variable used."""
        chart = tuple(chart)
        if chart == self.chart:
            return self
        pos = []
        for i, v in enumerate(self.chart):
            if v in chart:
                pos.append(chart.index(v))
            else:
                pos.append(None)
        t = {}
        for e, c in self.terms.items():
            e2 = [0] * len(chart)
            for i, k in enumerate(e):
                if k:
                    if pos[i] is None:
                        raise ChartMismatch(f"variable {self.chart[i]} not in chart {chart}")
                    e2[pos[i]] += k
            t[tuple(e2)] = c
        return Poly(chart, t)

    def evaluate(self, point: Mapping[str, object] | Sequence) -> Fraction:
        if isinstance(point, Mapping):
            vals = [frac(point[v]) if self.depends_on(v) else Fraction(0) for v in self.chart]
        else:
            vals = [frac(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def compile_float(self) -> Callable[[Sequence[float]], float]:
        items = [(float(c), e) for e, c in self.terms.items()]

        def f(x: Sequence[float]) -> float:
            total = 0.0
            for c, e in items:
                term = c
                for xi, k in zip(x, e):
                    if k:
                        term *= xi ** k
                total += term
            return total

        return f

    # display
    def _sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self._sorted_terms():
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.chart, e) if k
            )
            a = abs(c)
            if mono:
                body = mono if a == 1 else f"{a}*{mono}"
            else:
                body = str(a)
            parts.append(("-" if c < 0 else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly({str(self)!r} on {self.chart})"


def as_poly(x, chart) -> Poly:
    if isinstance(x, Poly):
        if x.chart != tuple(chart):
            raise ChartMismatch(f"charts differ: {x.chart} vs {tuple(chart)}")
        return x
    return Poly.const(chart, frac(x))


# ---------------------------------------------------------------------------
# skew index bookkeeping


def sort_sign(seq: Sequence[int]) -> tuple[int, tuple]:
    """Sign of the sorting permutation and the sorted tuple; 0 on repeats."""
    s = list(seq)
    if len(set(s)) != len(s):
        return 0, ()
    sign = 1
    for i in range(len(s)):
        for j in range(len(s) - 1 - i):
            if s[j] > s[j + 1]:
                s[j], s[j + 1] = s[j + 1], s[j]
                sign = -sign
    return sign, tuple(s)


def merge_sign(a: tuple, b: tuple) -> tuple[int, tuple]:
    return sort_sign(a + b)


MULTIVECTOR = "multivector"
FORM = "form"


class PolyTensor:
    """A multivector field or differential form with polynomial coefficients."""

    __slots__ = ("chart", "kind", "degree", "comps", "frame", "_hash")

    def __init__(self, chart, kind: str, degree: int, comps: Mapping[tuple, object] | None = None,
                 frame: Sequence[str] | None = None):
        if kind not in (MULTIVECTOR, FORM):
            raise ValueError(f"unknown tensor kind {kind!r}")
        self.chart = tuple(chart)
        self.kind = kind
        self.degree = int(degree)
        self.frame = tuple(frame) if frame is not None else self.chart
        if self.degree < 0:
            raise DegreeError(f"negative degree {degree}")
        n = len(self.frame)
        clean: dict[tuple, Poly] = {}
        for idx, c in (comps or {}).items():
            idx = tuple(idx)
            if len(idx) != self.degree or any(i < 0 or i >= n for i in idx):
                raise ValueError(f"bad index {idx} for degree {self.degree}")
            sign, s = sort_sign(idx)
            if sign == 0:
                continue
            c = as_poly(c, self.chart)
            if sign < 0:
                c = -c
            prev = clean.get(s)
            c = c if prev is None else prev + c
            if c.is_zero():
                clean.pop(s, None)
            else:
                clean[s] = c
        self.comps = clean
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, chart, kind, degree, frame=None) -> "PolyTensor":
        return cls(chart, kind, degree, {}, frame)

    @classmethod
    def scalar(cls, f, kind=MULTIVECTOR, chart=None, frame=None) -> "PolyTensor":
        if not isinstance(f, Poly):
            f = Poly.const(chart, f)
        return cls(f.chart, kind, 0, {(): f}, frame)

    @classmethod
    def basis(cls, chart, kind, idx: Sequence[int], coeff=1, frame=None) -> "PolyTensor":
        return cls(chart, kind, len(idx), {tuple(idx): coeff}, frame)

    @classmethod
    def vector_field(cls, chart, comps: Mapping[str, object]) -> "PolyTensor":
        chart = tuple(chart)
        return cls(chart, MULTIVECTOR, 1, {(chart.index(k),): v for k, v in comps.items()})

    @classmethod
    def one_form(cls, chart, comps: Mapping[str, object]) -> "PolyTensor":
        chart = tuple(chart)
        return cls(chart, FORM, 1, {(chart.index(k),): v for k, v in comps.items()})

    @classmethod
    def d(cls, chart, name: str) -> "PolyTensor":
        """Coordinate 1-form dx."""
        return cls.one_form(chart, {name: 1})

    @classmethod
    def partial(cls, chart, name: str) -> "PolyTensor":
        """Coordinate vector field d/dx."""
        return cls.vector_field(chart, {name: 1})

    def like(self, degree: int | None = None, comps=None) -> "PolyTensor":
        return PolyTensor(self.chart, self.kind, self.degree if degree is None else degree,
                          comps or {}, self.frame)

    # queries
    @property
    def rank(self) -> int:
        return len(self.frame)

    def is_zero(self) -> bool:
        return not self.comps

    def component(self, idx: Sequence[int]) -> Poly:
        sign, s = sort_sign(tuple(idx))
        if sign == 0:
            return Poly.zero(self.chart)
        c = self.comps.get(s)
        if c is None:
            return Poly.zero(self.chart)
        return c if sign > 0 else -c

    def scalar_part(self) -> Poly:
        if self.degree != 0:
            raise DegreeError("not a degree-0 tensor")
        return self.comps.get((), Poly.zero(self.chart))

    def _check(self, other: "PolyTensor", same_degree=True):
        if not isinstance(other, PolyTensor):
            raise TypeError(f"expected PolyTensor, got {type(other).__name__}")
        if other.chart != self.chart:
            raise ChartMismatch(f"charts differ: {self.chart} vs {other.chart}")
        if other.frame != self.frame:
            raise ChartMismatch(f"frames differ: {self.frame} vs {other.frame}")
        if other.kind != self.kind:
            raise TypeError(f"cannot combine {self.kind} with {other.kind}")
        if same_degree and other.degree != self.degree:
            raise DegreeError(f"degrees differ: {self.degree} vs {other.degree}")

    # arithmetic
    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        comps = dict(self.comps)
        for k, v in other.comps.items():
            comps[k] = comps[k] + v if k in comps else v
        return self.like(comps=comps)

    __radd__ = __add__

    def __neg__(self):
        return self.like(comps={k: -v for k, v in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        if isinstance(f, PolyTensor):
            return NotImplemented
        f = as_poly(f, self.chart)
        return self.like(comps={k: f * v for k, v in self.comps.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if isinstance(other, PolyTensor):
            return (self.chart == other.chart and self.kind == other.kind
                    and self.degree == other.degree and self.frame == other.frame
                    and self.comps == other.comps)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, self.kind, self.degree, self.frame,
                               frozenset(self.comps.items())))
        return self._hash

    def map_coeffs(self, fn: Callable[[Poly], Poly], chart=None) -> "PolyTensor":
        return PolyTensor(chart or self.chart, self.kind, self.degree,
                          {k: fn(v) for k, v in self.comps.items()}, self.frame)

    def on(self, chart, frame=None) -> "PolyTensor":
        """Move to a larger chart; coordinate frame indices are re-mapped."""
        chart = tuple(chart)
        if self.frame == self.chart and frame is None:
            pos = [chart.index(v) for v in self.chart]
            return PolyTensor(chart, self.kind, self.degree,
                              {tuple(pos[i] for i in k): v.on(chart) for k, v in self.comps.items()})
        return PolyTensor(chart, self.kind, self.degree,
                          {k: v.on(chart) for k, v in self.comps.items()}, frame or self.frame)

    def __str__(self) -> str:
        if not self.comps:
            return "0"
        parts = []
        for idx in sorted(self.comps):
            c = self.comps[idx]
            if self.kind == MULTIVECTOR:
                names = [f"d/d{self.frame[i]}" if self.frame[i] in self.chart else self.frame[i] for i in idx]
            else:
                names = [f"d{self.frame[i]}" if self.frame[i] in self.chart else f"{self.frame[i]}*" for i in idx]
            basis = "^".join(names)
            cs = str(c)
            if not basis:
                parts.append(cs)
            elif cs == "1":
                parts.append(basis)
            elif cs == "-1":
                parts.append("-" + basis)
            elif len(c.terms) == 1:
                parts.append(f"{cs}*{basis}")
            else:
                parts.append(f"({cs})*{basis}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"PolyTensor({self.kind}, deg {self.degree}: {self})"


def as_tensor(x, kind: str, chart, frame=None) -> PolyTensor:
    if isinstance(x, PolyTensor):
        return x
    return PolyTensor.scalar(as_poly(x, chart), kind, frame=frame)


# ---------------------------------------------------------------------------
# algebraic operations (valid in any frame)


def wedge(a: PolyTensor, b: PolyTensor) -> PolyTensor:
    a._check(b, same_degree=False)
    deg = a.degree + b.degree
    if deg > a.rank:
        return PolyTensor.zero(a.chart, a.kind, deg, a.frame)
    comps: dict[tuple, Poly] = {}
    for i, ci in a.comps.items():
        for j, cj in b.comps.items():
            sign, s = merge_sign(i, j)
            if sign == 0:
                continue
            v = ci * cj
            if sign < 0:
                v = -v
            comps[s] = comps[s] + v if s in comps else v
    return PolyTensor(a.chart, a.kind, deg, comps, a.frame)


def tensor_zero(chart, kind, degree, frame=None) -> PolyTensor:
    return PolyTensor.zero(chart, kind, degree, frame)


def _interior_basis_vector(k: int, form_idx: tuple) -> tuple[int, tuple]:
    if k not in form_idx:
        return 0, ()
    pos = form_idx.index(k)
    return (-1) ** pos, form_idx[:pos] + form_idx[pos + 1:]


def interior(p: PolyTensor, w: PolyTensor) -> PolyTensor:
    """Interior product with i_{X^Y} w = w(X, Y, ...)."""
    if p.kind != MULTIVECTOR or w.kind != FORM:
        raise TypeError("interior product needs a multivector and a form")
    if p.chart != w.chart or p.frame != w.frame:
        raise ChartMismatch("interior product across different charts or frames")
    if p.degree > w.degree:
        raise DegreeError(f"interior of degree {p.degree} into a {w.degree}-form")
    deg = w.degree - p.degree
    comps: dict[tuple, Poly] = {}
    for I, cI in p.comps.items():
        for J, cJ in w.comps.items():
            sign, rest = 1, J
            for k in I:
                s, rest = _interior_basis_vector(k, rest)
                sign *= s
                if sign == 0:
                    break
            if sign == 0:
                continue
            v = cI * cJ
            if sign < 0:
                v = -v
            comps[rest] = comps[rest] + v if rest in comps else v
    return PolyTensor(w.chart, FORM, deg, comps, w.frame)


def interior_or_zero(p: PolyTensor, w: PolyTensor) -> PolyTensor:
    if p.degree > w.degree:
        return tensor_zero(w.chart, FORM, 0, w.frame)
    return interior(p, w)


def contract_one_form(phi: PolyTensor, p: PolyTensor) -> PolyTensor:
    """i_phi P for a 1-form phi, as a left graded derivation of the wedge."""
    if phi.kind != FORM or phi.degree != 1 or p.kind != MULTIVECTOR:
        raise TypeError("contract_one_form needs a 1-form and a multivector")
    if p.degree == 0:
        raise DegreeError("cannot contract a 1-form into a function")
    comps: dict[tuple, Poly] = {}
    for I, c in p.comps.items():
        for pos, k in enumerate(I):
            f = phi.comps.get((k,))
            if f is None:
                continue
            rest = I[:pos] + I[pos + 1:]
            v = f * c
            if pos % 2:
                v = -v
            comps[rest] = comps[rest] + v if rest in comps else v
    return PolyTensor(p.chart, MULTIVECTOR, p.degree - 1, comps, p.frame)


def pair(p: PolyTensor, forms: Sequence[PolyTensor]) -> Poly:
    """Evaluate a k-vector on k one-forms: (X^Y)(a,b) = a(X)b(Y) - a(Y)b(X)."""
    if len(forms) != p.degree:
        raise DegreeError("number of forms must equal the multivector degree")
    total = Poly.zero(p.chart)
    for I, c in p.comps.items():
        # determinant of [forms[r](e_{I[s]})]
        total = total + c * _det([[f.component((i,)) for i in I] for f in forms], p.chart)
    return total


def evaluate_form(w: PolyTensor, vectors: Sequence[PolyTensor]) -> Poly:
    """w(X_1, ..., X_k) with dx^dy(d/dx, d/dy) = 1."""
    if len(vectors) != w.degree:
        raise DegreeError("number of vectors must equal the form degree")
    total = Poly.zero(w.chart)
    for J, c in w.comps.items():
        total = total + c * _det([[X.component((j,)) for X in vectors] for j in J], w.chart)
    return total


def _det(m: list[list[Poly]], chart) -> Poly:
    n = len(m)
    if n == 0:
        return Poly.const(chart, 1)
    if n == 1:
        return m[0][0]
    total = Poly.zero(chart)
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        t = m[0][j] * _det(minor, chart)
        total = total + (t if j % 2 == 0 else -t)
    return total


def bivector_apply(p: PolyTensor, f: Poly, g: Poly) -> Poly:
    """P(df, dg) for a bivector in the coordinate frame."""
    return pair(p, [exterior_derivative(as_tensor(f, FORM, p.chart)),
                    exterior_derivative(as_tensor(g, FORM, p.chart))])


def apply_vector(x: PolyTensor, f: Poly) -> Poly:
    """X(f) for a coordinate vector field."""
    if x.kind != MULTIVECTOR or x.degree != 1 or x.frame != x.chart:
        raise TypeError("apply_vector needs a coordinate vector field")
    f = as_poly(f, x.chart)
    total = Poly.zero(x.chart)
    for (i,), c in x.comps.items():
        total = total + c * f.diff(i)
    return total


# ---------------------------------------------------------------------------
# calculus in the coordinate frame


def _require_coordinate(t: PolyTensor):
    if t.frame != t.chart:
        raise ChartMismatch("operation needs the coordinate frame")


def exterior_derivative(w: PolyTensor) -> PolyTensor:
    if w.kind != FORM:
        raise TypeError("exterior derivative of a non-form")
    _require_coordinate(w)
    n = len(w.chart)
    if w.degree == n:
        return tensor_zero(w.chart, FORM, n + 1)
    comps: dict[tuple, Poly] = {}
    for I, c in w.comps.items():
        for a in range(n):
            da = c.diff(a)
            if da.is_zero():
                continue
            sign, s = merge_sign((a,), I)
            if sign == 0:
                continue
            v = da if sign > 0 else -da
            comps[s] = comps[s] + v if s in comps else v
    return PolyTensor(w.chart, FORM, w.degree + 1, comps)


def _right_dxi(I: tuple, a: int) -> tuple[int, tuple]:
    if a not in I:
        return 0, ()
    k = I.index(a)
    return (-1) ** (len(I) - 1 - k), I[:k] + I[k + 1:]


def schouten_nijenhuis(p: PolyTensor, q: PolyTensor) -> PolyTensor:
    """Schouten-Nijenhuis bracket via the odd-variable formula.

    Multivectors are read as polynomials in odd variables xi_a = d/dx^a and
    [[P,Q]] = sum_a dP/dxi_a * dQ/dx^a - (-1)^{(p-1)(q-1)} dQ/dxi_a * dP/dx^a
    with right derivatives in the odd variables.
    """
    if isinstance(p, Poly):
        p = PolyTensor.scalar(p)
    if isinstance(q, Poly):
        q = PolyTensor.scalar(q)
    if p.kind != MULTIVECTOR or q.kind != MULTIVECTOR:
        raise TypeError("Schouten bracket of non-multivectors")
    _require_coordinate(p)
    _require_coordinate(q)
    if p.chart != q.chart:
        raise ChartMismatch(f"charts differ: {p.chart} vs {q.chart}")
    n = len(p.chart)
    deg = p.degree + q.degree - 1
    if deg < 0:
        return PolyTensor.zero(p.chart, MULTIVECTOR, 0)
    if deg > n:
        return tensor_zero(p.chart, MULTIVECTOR, deg)
    sgn = -((-1) ** ((p.degree - 1) * (q.degree - 1)))
    comps: dict[tuple, Poly] = {}

    def acc(A: PolyTensor, B: PolyTensor, factor: int):
        for I, cI in A.comps.items():
            for a in range(n):
                s1, Ir = _right_dxi(I, a)
                if s1 == 0:
                    continue
                for J, cJ in B.comps.items():
                    dJ = cJ.diff(a)
                    if dJ.is_zero():
                        continue
                    s2, K = merge_sign(Ir, J)
                    if s2 == 0:
                        continue
                    v = cI * dJ
                    if s1 * s2 * factor < 0:
                        v = -v
                    comps[K] = comps[K] + v if K in comps else v

    acc(p, q, 1)
    acc(q, p, sgn)
    return PolyTensor(p.chart, MULTIVECTOR, deg, comps)


def lie_derivative(x: PolyTensor, t) -> PolyTensor | Poly:
    """Lie derivative along a vector field, by coordinate formulas."""
    if x.kind != MULTIVECTOR or x.degree != 1:
        raise TypeError("Lie derivative along a non-vector")
    _require_coordinate(x)
    if isinstance(t, Poly):
        return apply_vector(x, t)
    if t.kind == MULTIVECTOR:
        return schouten_nijenhuis(x, t)
    _require_coordinate(t)
    n = len(x.chart)
    comps: dict[tuple, Poly] = {}

    def put(k, v):
        comps[k] = comps[k] + v if k in comps else v

    for I, c in t.comps.items():
        put(I, apply_vector(x, c))
        for pos, i in enumerate(I):
            # replace dx^i by d(X^i) = sum_a dX^i/dx^a dx^a
            xi = x.component((i,))
            for a in range(n):
                dxa = xi.diff(a)
                if dxa.is_zero():
                    continue
                J = I[:pos] + (a,) + I[pos + 1:]
                sign, s = sort_sign(J)
                if sign == 0:
                    continue
                v = c * dxa
                put(s, v if sign > 0 else -v)
    return PolyTensor(t.chart, FORM, t.degree, comps)


def pullback_form(w: PolyTensor, mapping: Mapping[str, Poly], chart) -> PolyTensor:
    """Pull back a form along y^i = mapping[y^i](x) into the chart x."""
    if w.kind != FORM:
        raise TypeError("pullback of a non-form")
    _require_coordinate(w)
    chart = tuple(chart)
    images = [as_poly(mapping[v], chart) if v in mapping else Poly.var(chart, v) for v in w.chart]
    dys = [exterior_derivative(PolyTensor.scalar(img, FORM)) for img in images]
    out = PolyTensor.zero(chart, FORM, w.degree)
    sub = {v: images[i] for i, v in enumerate(w.chart)}
    for I, c in w.comps.items():
        term = PolyTensor.scalar(c.substitute(sub, chart), FORM)
        for i in I:
            term = wedge(term, dys[i])
        out = out + term
    return out


def pushforward_multivector(p: PolyTensor, forward: Mapping[str, Poly], inverse: Mapping[str, Poly],
                            chart) -> PolyTensor:
    """Push a multivector along a polynomial diffeomorphism.

    ``forward`` gives the new coordinates as polynomials on ``p.chart``;
    ``inverse`` gives the old coordinates as polynomials on ``chart``.
    """
    if p.kind != MULTIVECTOR:
        raise TypeError("pushforward of a non-multivector")
    _require_coordinate(p)
    chart = tuple(chart)
    old = p.chart
    inv = {v: as_poly(inverse[v], chart) for v in old}
    # jacobian columns: image of d/dx^j is sum_i dy^i/dx^j d/dy^i
    cols = []
    for j in range(len(old)):
        comps = {}
        for i, y in enumerate(chart):
            d = as_poly(forward[y], old).diff(j)
            if not d.is_zero():
                comps[(i,)] = d.substitute(inv, chart)
        cols.append(PolyTensor(chart, MULTIVECTOR, 1, comps))
    out = PolyTensor.zero(chart, MULTIVECTOR, p.degree)
    for I, c in p.comps.items():
        term = PolyTensor.scalar(c.substitute(inv, chart), MULTIVECTOR)
        for j in I:
            term = wedge(term, cols[j])
        out = out + term
    return out


def euler_field(chart, names: Iterable[str]) -> PolyTensor:
    chart = tuple(chart)
    return PolyTensor.vector_field(chart, {v: Poly.var(chart, v) for v in names})


def all_index_sets(n: int, k: int) -> list[tuple]:
    from itertools import combinations
    return list(combinations(range(n), k))


def monomials(chart, max_degree: int) -> list[Poly]:
    chart = tuple(chart)
    out = []
    for e in _iproduct(range(max_degree + 1), repeat=len(chart)):
        if sum(e) <= max_degree:
            out.append(Poly.monomial(chart, e))
    out.sort(key=lambda m: (m.degree(), str(m)))
    return out
