"""First-order operators on an AV-bundle and Lie affgebroids.

An element of RZ is a quadruple (X, alpha, beta, gamma) standing for the
operator  X - (alpha s + beta) d/ds + gamma  on functions of (x, s).
The named subbundles are cut out by linear conditions on
phi0 = alpha and phi1 = gamma.

A Lie affgebroid is given by a bracket on affine sections (tuples of
base polynomials in hull coordinates) and an affine anchor.  Its Lie
algebroid hull is recovered from brackets of constant sections.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

from . import linalg as la
from .affspace import SPECIAL_AFFINE, HullSpace
from .avbundle import AVChart, AVSection, f_map, split_affine
from .checks import CheckReport
from .exactpoly import (
    MULTIVECTOR,
    ChartMismatch,
    Poly,
    PolyTensor,
    apply_vector,
    monomials,
    schouten_nijenhuis,
)
from .frames import FrameAlgebroid

TTILDE = "TtildeZ"
LBREVE = "LbreveZ"
LTILDE = "LtildeZ"
TBAR = "TbarZ"
LBAR = "LbarZ"
ZDAG = "Zdag"
TAGS = (TTILDE, LBREVE, LTILDE, TBAR, LBAR, ZDAG)

# affine subbundles and their model subbundles
MODEL = {TBAR: TTILDE, LBAR: LTILDE}


class MembershipError(ValueError):
    pass


def _vf_zero(chart) -> PolyTensor:
    return PolyTensor.zero(chart, MULTIVECTOR, 1)


@dataclass(frozen=True)
class RZSection:
    chart: tuple
    X: PolyTensor
    alpha: Poly
    beta: Poly
    gamma: Poly

    @classmethod
    def make(cls, chart, X=None, alpha=0, beta=0, gamma=0) -> "RZSection":
        chart = tuple(chart)
        if X is None:
            X = _vf_zero(chart)
        if X.chart != chart or X.kind != MULTIVECTOR or X.degree != 1:
            raise ChartMismatch("X must be a vector field on the base chart")
        p = [c if isinstance(c, Poly) else Poly.const(chart, c) for c in (alpha, beta, gamma)]
        for c in p:
            if c.chart != chart:
                raise ChartMismatch(f"component on {c.chart}, expected {chart}")
        return cls(chart, X, *p)

    def _check(self, other: "RZSection"):
        if other.chart != self.chart:
            raise ChartMismatch("RZ sections over different charts")

    def __add__(self, o: "RZSection") -> "RZSection":
        self._check(o)
        return RZSection(self.chart, self.X + o.X, self.alpha + o.alpha, self.beta + o.beta, self.gamma + o.gamma)

    def __sub__(self, o: "RZSection") -> "RZSection":
        self._check(o)
        return RZSection(self.chart, self.X - o.X, self.alpha - o.alpha, self.beta - o.beta, self.gamma - o.gamma)

    def __mul__(self, f) -> "RZSection":
        f = f if isinstance(f, Poly) else Poly.const(self.chart, f)
        return RZSection(self.chart, self.X * f, self.alpha * f, self.beta * f, self.gamma * f)

    def __eq__(self, o) -> bool:
        return (isinstance(o, RZSection) and self.chart == o.chart and self.X == o.X
                and self.alpha == o.alpha and self.beta == o.beta and self.gamma == o.gamma)

    def __hash__(self):
        return hash((self.chart, self.X, self.alpha, self.beta, self.gamma))

    def is_zero(self) -> bool:
        return self.X.is_zero() and self.alpha.is_zero() and self.beta.is_zero() and self.gamma.is_zero()

    def coords(self) -> tuple:
        """(f_1..f_n, alpha, beta, gamma)."""
        return tuple(self.X.component((i,)) for i in range(len(self.chart))) + (self.alpha, self.beta, self.gamma)

    @classmethod
    def from_coords(cls, chart, cs: Sequence[Poly]) -> "RZSection":
        n = len(chart)
        X = PolyTensor(chart, MULTIVECTOR, 1, {(i,): c for i, c in enumerate(cs[:n])})
        return cls.make(chart, X, cs[n], cs[n + 1], cs[n + 2])

    def __str__(self) -> str:
        return f"(X: {self.X}, alpha: {self.alpha}, beta: {self.beta}, gamma: {self.gamma})"


def x_rz(chart) -> RZSection:
    """The section X_RZ = -d/ds."""
    return RZSection.make(chart, beta=1)


def i_rz(chart) -> RZSection:
    """The identity operator I_RZ."""
    return RZSection.make(chart, gamma=1)


def phi0(R: RZSection) -> Poly:
    return R.alpha


def phi1(R: RZSection) -> Poly:
    return R.gamma


def rz_bracket(R: RZSection, S: RZSection) -> RZSection:
    R._check(S)
    X, Y = R.X, S.X

    def act(V, f):
        return apply_vector(V, f)

    return RZSection(
        R.chart,
        schouten_nijenhuis(X, Y),
        act(X, S.alpha) - act(Y, R.alpha),
        act(X, S.beta) - act(Y, R.beta) + R.alpha * S.beta - S.alpha * R.beta,
        act(X, S.gamma) - act(Y, R.gamma),
    )


def operator_apply(bundle: AVChart, R: RZSection, F: Poly) -> Poly:
    """(X - (alpha s + beta) d/ds + gamma)(F) for F on the total space."""
    if R.chart != bundle.base_coords:
        raise ChartMismatch("section and bundle have different bases")
    ch = bundle.chart
    s = bundle.s
    lift = bundle.lift
    out = lift(R.gamma) * F - (lift(R.alpha) * s + lift(R.beta)) * F.diff(bundle.fiber_coord)
    for i, x in enumerate(bundle.base_coords):
        c = R.X.component((i,))
        if not c.is_zero():
            out = out + lift(c) * F.diff(x)
    return out.on(ch)


def operator_from_action(bundle: AVChart, D: Callable[[Poly], Poly]) -> RZSection:
    """Recover (X, alpha, beta, gamma) from a first-order operator by its values on
    1, s, x^a and check the prediction on x^a s."""
    ch = bundle.chart
    base = bundle.base_coords
    one = Poly.const(ch, 1)
    s = bundle.s
    g = D(one)
    if g.depends_on(bundle.fiber_coord):
        raise MembershipError("operator does not preserve s-free functions")
    ds = D(s) - g * s  # = -(alpha s + beta)
    alpha, beta = split_affine(bundle, -ds)
    comps = {}
    for i, x in enumerate(base):
        xv = Poly.var(ch, x)
        comps[(i,)] = (D(xv) - g * xv).on(base)
    X = PolyTensor(base, MULTIVECTOR, 1, comps)
    R = RZSection.make(base, X, alpha, beta, g.on(base))
    for x in base:
        probe = Poly.var(ch, x) * s
        if D(probe) != operator_apply(bundle, R, probe):
            raise MembershipError(f"operator is not first order along {x}*s")
    return R


def commutator_oracle(bundle: AVChart, R: RZSection, S: RZSection) -> RZSection:
    """Bracket read off the operator commutator on the separating family."""
    def D(F):
        return operator_apply(bundle, R, operator_apply(bundle, S, F)) - operator_apply(
            bundle, S, operator_apply(bundle, R, F))
    return operator_from_action(bundle, D)


# ---------------------------------------------------------------------------
# subbundles


def subbundle_membership(R: RZSection) -> frozenset:
    a, g = R.alpha, R.gamma
    tags = set()
    if g.is_zero():
        tags.add(LBREVE)
        if a.is_zero():
            tags.add(TTILDE)
        if a == Poly.const(R.chart, -1):
            tags.add(TBAR)
        if R.X.is_zero():
            tags.add(ZDAG)
    if (g - a).is_zero():
        tags.add(LTILDE)
    if g - a == Poly.const(R.chart, 1):
        tags.add(LBAR)
    return frozenset(tags)


def act_on_section(R: RZSection, sig: AVSection, as_tag: str):
    """D(sigma) through F_{D(sigma)} = D(F_sigma).

    Vector subbundles (TtildeZ, LtildeZ) return a base polynomial; affine
    subbundles (TbarZ, LbarZ) return a section."""
    if as_tag not in (TTILDE, LTILDE, TBAR, LBAR):
        raise MembershipError(f"no action on sections for {as_tag}")
    if as_tag not in subbundle_membership(R):
        raise MembershipError(f"operator {R} is not in {as_tag}")
    b = sig.bundle
    F = operator_apply(b, R, f_map(sig))
    if as_tag in (TTILDE, LTILDE):
        if F.depends_on(b.fiber_coord):
            raise MembershipError("image depends on s")
        return F.on(b.base_coords)
    G = F + b.s
    if G.depends_on(b.fiber_coord):
        raise MembershipError("image is not the graph function of a section")
    return AVSection(b, G.on(b.base_coords))


def act_coordinates(R: RZSection, sig: AVSection) -> Poly:
    """Coordinate form f_a d_a sigma + gamma sigma + beta of the same action."""
    out = R.beta + R.gamma * sig.value
    for i, x in enumerate(R.chart):
        out = out + R.X.component((i,)) * sig.value.diff(x)
    return out


def hamiltonian_operator(bundle: AVChart, phi: Poly) -> RZSection:
    """D_phi = {phi, .}_Z for a fiber-affine phi = alpha s + beta."""
    alpha, beta = split_affine(bundle, phi)
    return RZSection.make(bundle.base_coords, None, alpha, beta, alpha)


def zdag_section(bundle: AVChart, phi: Poly) -> RZSection:
    """Embedding of Aff(Z) in RZ as the vertical field -(alpha s + beta) d/ds."""
    alpha, beta = split_affine(bundle, phi)
    return RZSection.make(bundle.base_coords, None, alpha, beta, 0)


def closure_check(tag: str, generators: Sequence[RZSection]) -> CheckReport:
    rep = CheckReport(f"closure {tag}")
    for i, R in enumerate(generators):
        if tag not in subbundle_membership(R):
            rep.add(f"member[{i}]", False, witness=str(R))
    target = MODEL.get(tag, tag)
    for i, j in combinations(range(len(generators)), 2):
        B = rz_bracket(generators[i], generators[j])
        rep.add(f"bracket[{i},{j}] in {target}", target in subbundle_membership(B), witness=str(B))
        for name, form in (("phi0", phi0), ("phi1", phi1)):
            R, S = generators[i], generators[j]
            lhs = form(B)
            rhs = apply_vector(R.X, form(S)) - apply_vector(S.X, form(R))
            rep.add(f"{name} closed on [{i},{j}]", lhs == rhs, witness=f"{lhs} != {rhs}")
    return rep


def rz_jacobiator(R: RZSection, S: RZSection, T: RZSection) -> RZSection:
    return (rz_bracket(R, rz_bracket(S, T)) + rz_bracket(S, rz_bracket(T, R))
            + rz_bracket(T, rz_bracket(R, S)))


# ---------------------------------------------------------------------------
# Lie affgebroids


Section = tuple  # hull coordinates, tuple of base Poly


@dataclass
class AffgebroidSpec:
    name: str
    chart: tuple
    fiber: HullSpace
    bracket: Callable[[Section, Section], Section]
    anchor: Callable[[Section], PolyTensor]
    frame_names: tuple | None = None
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        self.chart = tuple(self.chart)
        if self.fiber.kind != SPECIAL_AFFINE:
            raise ValueError("affgebroid fiber must be special affine")

    @property
    def hull_dim(self) -> int:
        return self.fiber.hull_dim

    def const(self, v) -> Section:
        return tuple(Poly.const(self.chart, c) for c in v)

    def one_of(self, sec: Section) -> Poly:
        out = Poly.zero(self.chart)
        for c, s in zip(self.fiber.one, sec):
            if c:
                out = out + s * c
        return out

    def is_affine_section(self, sec: Section) -> bool:
        return self.one_of(sec) == Poly.const(self.chart, 1)

    def is_vector_section(self, sec: Section) -> bool:
        return self.one_of(sec).is_zero()

    def base_point(self) -> Section:
        return self.const(self.fiber.base_point())

    def adapted_basis(self) -> list:
        """Hull basis (v0, p0, w_2..): v0, a base point, then a complement of v0 in the model."""
        v0 = tuple(self.fiber.v0)
        p0 = self.fiber.base_point()
        cand = [v0] + list(self.fiber.model_basis())
        ws = [cand[i] for i in la.independent_subset(cand) if i > 0]
        return [v0, p0] + ws

    def vector_part(self, sigma: Section, V: Section) -> Section:
        """[sigma, V]_v = [sigma, p + V] - [sigma, p] for a vector section V."""
        p = self.base_point()
        return _sub(self.bracket(sigma, _add(p, V)), self.bracket(sigma, p))

    def linear_anchor(self, V: Section) -> PolyTensor:
        p = self.base_point()
        return self.anchor(_add(p, V)) - self.anchor(p)


def _add(a: Section, b: Section) -> Section:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Section, b: Section) -> Section:
    return tuple(x - y for x, y in zip(a, b))


def _scale(f: Poly, a: Section) -> Section:
    return tuple(f * x for x in a)


def _is_zero(a: Section) -> bool:
    return all(x.is_zero() for x in a)


def _fmt(a: Section) -> str:
    return "(" + ", ".join(str(x) for x in a) + ")"


def generator_sections(spec: AffgebroidSpec, degree: int = 2) -> list:
    """p0 and p0 + m w for monomials m of degree <= degree and model basis vectors w."""
    p0 = spec.base_point()
    out = [p0]
    for w in spec.fiber.model_basis():
        wv = spec.const(w)
        for m in monomials(spec.chart, degree):
            out.append(_add(p0, _scale(m, wv)))
    return out


def affgebroid_axioms(spec: AffgebroidSpec, degree: int = 2, jacobi_degree: int = 1) -> CheckReport:
    rep = CheckReport(f"affgebroid {spec.name}")
    gens = generator_sections(spec, degree)
    consts = generator_sections(spec, 0)
    jac = generator_sections(spec, jacobi_degree)
    model = [spec.const(w) for w in spec.fiber.model_basis()]
    p0 = spec.base_point()

    for g in gens:
        if not spec.is_affine_section(g):
            rep.add("generators affine", False, witness=_fmt(g))
    skew_ok, values_ok = True, True
    skew_w = val_w = None
    for i, j in combinations(range(len(gens)), 2):
        a, b = gens[i], gens[j]
        ab = spec.bracket(a, b)
        if not _is_zero(_add(ab, spec.bracket(b, a))):
            skew_ok, skew_w = False, f"pair ({_fmt(a)}, {_fmt(b)})"
        if not spec.is_vector_section(ab):
            values_ok, val_w = False, f"[{_fmt(a)}, {_fmt(b)}] = {_fmt(ab)}"
    rep.add("skew-symmetry", skew_ok, witness=skew_w)
    rep.add("values in the model bundle", values_ok, witness=val_w)

    # bi-affine over the reals: affine combination in the second slot
    ok, wit = True, None
    for a in consts:
        for b, c in combinations(gens, 2):
            comb = _add(_scale(Poly.const(spec.chart, 3), b), _scale(Poly.const(spec.chart, -2), c))
            lhs = spec.bracket(a, comb)
            rhs = _add(_scale(Poly.const(spec.chart, 3), spec.bracket(a, b)),
                       _scale(Poly.const(spec.chart, -2), spec.bracket(a, c)))
            if lhs != rhs:
                ok, wit = False, f"slot 2 with {_fmt(a)}, {_fmt(b)}, {_fmt(c)}"
    rep.add("bi-affine", ok, witness=wit)

    # quasi-derivation [sigma, sigma' + f X] = [sigma, sigma'] + f [sigma, X]_v + rho(sigma)(f) X
    ok, wit = True, None
    for a in gens:
        rho = spec.anchor(a)
        for X in model:
            vx = spec.vector_part(a, X)
            for f in monomials(spec.chart, degree):
                lhs = _sub(spec.bracket(a, _add(p0, _scale(f, X))), spec.bracket(a, p0))
                rhs = _add(_scale(f, vx), _scale(apply_vector(rho, f), X))
                if lhs != rhs:
                    ok, wit = False, f"sigma={_fmt(a)}, f={f}, X={_fmt(X)}"
    rep.add("quasi-derivation", ok, witness=wit)

    # Jacobi through the vector part
    ok, wit = True, None
    for a, b, c in combinations(jac, 3):
        t = _add(_add(spec.vector_part(a, spec.bracket(b, c)), spec.vector_part(b, spec.bracket(c, a))),
                 spec.vector_part(c, spec.bracket(a, b)))
        if not _is_zero(t):
            ok, wit = False, f"triple ({_fmt(a)}, {_fmt(b)}, {_fmt(c)}) -> {_fmt(t)}"
            break
    rep.add("Jacobi identity", ok, witness=wit)

    # anchor is a morphism of brackets
    ok, wit = True, None
    for a, b in combinations(jac, 2):
        lhs = spec.linear_anchor(spec.bracket(a, b))
        rhs = schouten_nijenhuis(spec.anchor(a), spec.anchor(b))
        if lhs != rhs:
            ok, wit = False, f"pair ({_fmt(a)}, {_fmt(b)})"
    rep.add("anchor morphism", ok, witness=wit)
    return rep


@dataclass
class HullAlgebroid:
    spec: AffgebroidSpec
    basis: list  # hull vectors, columns of the frame
    algebroid: FrameAlgebroid

    def to_frame(self, sec: Section) -> PolyTensor:
        inv = la.inverse(la.columns(self.basis))
        comps = {}
        for i, row in enumerate(inv):
            c = Poly.zero(self.spec.chart)
            for r, s in zip(row, sec):
                if r:
                    c = c + s * r
            comps[i] = c
        return self.algebroid.section(comps)

    def from_frame(self, t: PolyTensor) -> Section:
        out = [Poly.zero(self.spec.chart) for _ in range(self.spec.hull_dim)]
        for (i,), c in t.comps.items():
            for k, b in enumerate(self.basis[i]):
                if b:
                    out[k] = out[k] + c * b
        return tuple(out)

    def one_form(self):
        """1_A as a hull 1-form in the frame."""
        from .exactpoly import FORM
        comps = {(i,): la.dot(self.spec.fiber.one, b) for i, b in enumerate(self.basis)}
        return PolyTensor(self.spec.chart, FORM, 1, {k: Poly.const(self.spec.chart, v) for k, v in comps.items() if v},
                          self.algebroid.frame)

    def hull_bracket_const(self, u: Sequence, v: Sequence) -> Section:
        return self.from_frame(self.algebroid.bracket(self.to_frame(self.spec.const(u)),
                                                      self.to_frame(self.spec.const(v))))


def _constant_hull_bracket(spec: AffgebroidSpec, u, v) -> Section:
    """Bilinear extension of the affine bracket to constant hull vectors."""
    p0 = spec.fiber.base_point()
    lu, lv = la.dot(spec.fiber.one, u), la.dot(spec.fiber.one, v)
    wu, wv = la.sub(u, la.scale(lu, p0)), la.sub(v, la.scale(lv, p0))
    P = spec.const(p0)
    Pw = spec.const(la.add(p0, wu))
    Pv = spec.const(la.add(p0, wv))
    B = spec.bracket
    pp = B(P, P)
    p_wv = _sub(B(P, Pv), pp)
    wu_p = _sub(B(Pw, P), pp)
    wu_wv = _add(_sub(_sub(B(Pw, Pv), B(Pw, P)), B(P, Pv)), pp)
    out = _scale(Poly.const(spec.chart, lu * lv), pp)
    out = _add(out, _scale(Poly.const(spec.chart, lu), p_wv))
    out = _add(out, _scale(Poly.const(spec.chart, lv), wu_p))
    return _add(out, wu_wv)


def _constant_hull_anchor(spec: AffgebroidSpec, u) -> PolyTensor:
    p0 = spec.fiber.base_point()
    lu = la.dot(spec.fiber.one, u)
    w = la.sub(u, la.scale(lu, p0))
    P = spec.const(p0)
    return spec.anchor(P) * Poly.const(spec.chart, lu) + spec.linear_anchor(spec.const(w))


def algebroid_hull(spec: AffgebroidSpec) -> HullAlgebroid:
    basis = spec.adapted_basis()
    names = spec.frame_names or tuple(f"b{i}" for i in range(len(basis)))
    inv = la.inverse(la.columns(basis))
    anchors = [_constant_hull_anchor(spec, b) for b in basis]
    structure = {}
    for i, j in combinations(range(len(basis)), 2):
        val = _constant_hull_bracket(spec, basis[i], basis[j])
        row = {}
        for k, r in enumerate(inv):
            c = Poly.zero(spec.chart)
            for rr, s in zip(r, val):
                if rr:
                    c = c + s * rr
            if not c.is_zero():
                row[k] = c
        structure[(i, j)] = row
    alg = FrameAlgebroid(spec.chart, names, anchors, structure, name=f"hull({spec.name})")
    return HullAlgebroid(spec, basis, alg)


def hull_report(spec: AffgebroidSpec, degree: int = 2) -> CheckReport:
    rep = CheckReport(f"hull {spec.name}")
    h = algebroid_hull(spec)
    alg = h.algebroid
    rep.add("hull is a Lie algebroid", alg.is_lie_algebroid())
    one = h.one_form()
    rep.add("1_A closed", alg.is_cocycle(one), witness=str(alg.d(one)))
    ok, wit = True, None
    for i, j in combinations(range(alg.rank), 2):
        b = alg.bracket(alg.basis((i,)), alg.basis((j,)))
        if not spec.is_vector_section(h.from_frame(b)):
            ok, wit = False, f"[b{i}, b{j}]"
    rep.add("hull brackets in the model (aff)", ok, witness=wit)
    ok, wit = True, None
    gens = generator_sections(spec, degree)
    for a, b in combinations(gens, 2):
        direct = spec.bracket(a, b)
        ext = h.from_frame(alg.bracket(h.to_frame(a), h.to_frame(b)))
        if direct != ext:
            ok, wit = False, f"pair ({_fmt(a)}, {_fmt(b)}): {_fmt(direct)} vs {_fmt(ext)}"
            break
    rep.add("extension restricts to the affine bracket", ok, witness=wit)
    return rep


def is_central(spec: AffgebroidSpec, v: Sequence | None = None) -> bool:
    """v (default v0) brackets to zero with every hull frame section."""
    h = algebroid_hull(spec)
    alg = h.algebroid
    V = h.to_frame(spec.const(v if v is not None else spec.fiber.v0))
    return all(alg.bracket(V, alg.basis((i,))).is_zero() for i in range(alg.rank)) and \
        h.algebroid.anchor_of(V).is_zero()


# ---------------------------------------------------------------------------
# examples


def canonical_z_affgebroid(chart) -> AffgebroidSpec:
    """[sigma, sigma'] = sigma - sigma' on an AV-bundle; hull coordinates (c, s)."""
    chart = tuple(chart)
    fiber = HullSpace(2, SPECIAL_AFFINE, one=la.vec([1, 0]), v0=la.vec([0, 1]), label="Z")

    def bracket(a, b):
        c, s = a
        c2, s2 = b
        return (Poly.zero(chart), c2 * s - c * s2)

    def anchor(a):
        return _vf_zero(chart)

    return AffgebroidSpec("canonical Z", chart, fiber, bracket, anchor, frame_names=("v0", "p0"))


def _rz_spec(name: str, chart, with_gamma: bool, one, v0) -> AffgebroidSpec:
    chart = tuple(chart)
    n = len(chart)
    width = n + (3 if with_gamma else 2)
    fiber = HullSpace(width, SPECIAL_AFFINE, one=la.vec(one), v0=la.vec(v0), label=name)

    def to_rz(a):
        cs = list(a) + ([] if with_gamma else [Poly.zero(chart)])
        return RZSection.from_coords(chart, cs)

    def from_rz(R):
        cs = R.coords()
        return cs if with_gamma else cs[:-1]

    def bracket(a, b):
        return from_rz(rz_bracket(to_rz(a), to_rz(b)))

    def anchor(a):
        return to_rz(a).X

    spec = AffgebroidSpec(name, chart, fiber, bracket, anchor)
    spec.notes["to_rz"] = to_rz
    spec.notes["from_rz"] = from_rz
    return spec


def tbar_affgebroid(chart) -> AffgebroidSpec:
    """TbarZ: alpha = -1, gamma = 0; hull coordinates (f, alpha, beta), 1_A = -alpha."""
    n = len(chart)
    one = [0] * n + [-1, 0]
    v0 = [0] * n + [0, 1]
    return _rz_spec(TBAR, chart, False, one, v0)


def lbar_affgebroid(chart) -> AffgebroidSpec:
    """LbarZ: gamma - alpha = 1; hull coordinates (f, alpha, beta, gamma)."""
    n = len(chart)
    one = [0] * n + [-1, 0, 1]
    v0 = [0] * n + [0, 1, 0]
    return _rz_spec(LBAR, chart, True, one, v0)


def ttilde_affine(chart) -> AffgebroidSpec:
    """TtildeZ viewed as a special affine bundle: hull (f, beta, c) with 1 = c, v0 = X_RZ."""
    chart = tuple(chart)
    n = len(chart)
    fiber = HullSpace(n + 2, SPECIAL_AFFINE, one=la.unit(n + 2, n + 1), v0=la.unit(n + 2, n), label=TTILDE)

    def to_rz(a):
        X = PolyTensor(chart, MULTIVECTOR, 1, {(i,): c for i, c in enumerate(a[:n])})
        return RZSection.make(chart, X, 0, a[n], 0)

    def bracket(a, b):
        R = rz_bracket(to_rz(a), to_rz(b))
        return R.coords()[:n] + (R.beta, Poly.zero(chart))

    def anchor(a):
        return to_rz(a).X

    spec = AffgebroidSpec(TTILDE, chart, fiber, bracket, anchor)
    spec.notes["to_rz"] = to_rz
    return spec


def hull_matches_rz(spec: AffgebroidSpec) -> CheckReport:
    """Hull bracket of constant hull vectors equals rz_bracket of the same RZ elements."""
    rep = CheckReport(f"hull of {spec.name} vs RZ")
    h = algebroid_hull(spec)
    to_rz = spec.notes["to_rz"]
    n = spec.hull_dim
    units = [la.unit(n, i) for i in range(n)]
    for i, j in combinations(range(n), 2):
        lhs = to_rz(h.hull_bracket_const(units[i], units[j]))
        rhs = rz_bracket(to_rz(spec.const(units[i])), to_rz(spec.const(units[j])))
        rep.add(f"[e{i}, e{j}]", lhs == rhs, witness=f"{lhs} vs {rhs}")
    return rep


def hull_in_subbundle(spec: AffgebroidSpec, tag: str) -> bool:
    """Affine points of the fiber land in tag, model directions in its model subbundle."""
    to_rz = spec.notes["to_rz"]
    p = spec.fiber.base_point()
    pts = [spec.const(p)] + [spec.const(la.add(p, w)) for w in spec.fiber.model_basis()]
    dirs = [spec.const(w) for w in spec.fiber.model_basis()]
    model = MODEL.get(tag, tag)
    return (all(tag in subbundle_membership(to_rz(a)) for a in pts)
            and all(model in subbundle_membership(to_rz(v)) for v in dirs))


def perturbed_affgebroid(chart) -> AffgebroidSpec:
    """Negative control: constant structure [w1,w2] = w3, [w2,w3] = w1, [w3,w1] = w1 (not Lie)."""
    chart = tuple(chart)
    fiber = HullSpace(4, SPECIAL_AFFINE, one=la.unit(4, 0), v0=la.unit(4, 3), label="perturbed")
    table = {(1, 2): 3, (2, 3): 1, (3, 1): 1}

    def bracket(a, b):
        out = [Poly.zero(chart) for _ in range(4)]
        for (i, j), k in table.items():
            out[k] = out[k] + a[i] * b[j] - a[j] * b[i]
        return tuple(out)

    def anchor(a):
        return _vf_zero(chart)

    return AffgebroidSpec("perturbed", chart, fiber, bracket, anchor)
