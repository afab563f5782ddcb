"""Aff-Poisson and aff-Jacobi brackets on AV-bundle sections.

A structure is stored through its components on the base: a Jacobi pair
(Lambda0, Gamma0) and a first-order operator D0 = X0 + f0.  The bracket
of two sections is

    {sigma, sigma'} = {sigma, sigma'}_(Lambda0, Gamma0) + D0(sigma' - sigma).

The same data gives invariant tensors on the total space, a bivector on
the algebroid TtildeZ (Poisson case) or on LtildeZ (Jacobi case), and
the differentials and Lie differentials built from it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg as la
from .algebroids import AffgebroidSpec, algebroid_hull, generator_sections, is_central
from .avbundle import AVChart, AVSection, jacobi_pair_bracket
from .checks import CheckReport
from .exactpoly import (
    FORM,
    MULTIVECTOR,
    DegreeError,
    Poly,
    PolyTensor,
    all_index_sets,
    apply_vector,
    bivector_apply,
    contract_one_form,
    interior,
    monomials,
    schouten_nijenhuis,
    wedge,
)
from .frames import FrameAlgebroid

POISSON = "poisson"
JACOBI = "jacobi"

XZ = "XZ"
EA = "ea"


class StructureError(ValueError):
    pass


def _vf(chart) -> PolyTensor:
    return PolyTensor.zero(chart, MULTIVECTOR, 1)


def _bv(chart) -> PolyTensor:
    return PolyTensor.zero(chart, MULTIVECTOR, 2)


@dataclass(frozen=True)
class AffStructure:
    bundle: AVChart
    Lambda0: PolyTensor
    Gamma0: PolyTensor
    X0: PolyTensor
    f0: Poly
    kind: str

    @classmethod
    def make(cls, bundle: AVChart, Lambda0=None, X0=None, Gamma0=None, f0=0, kind: str | None = None):
        base = bundle.base_coords
        Lambda0 = Lambda0 if Lambda0 is not None else _bv(base)
        X0 = X0 if X0 is not None else _vf(base)
        Gamma0 = Gamma0 if Gamma0 is not None else _vf(base)
        f0 = f0 if isinstance(f0, Poly) else Poly.const(base, f0)
        for t, deg in ((Lambda0, 2), (X0, 1), (Gamma0, 1)):
            if t.chart != base or t.kind != MULTIVECTOR or t.degree != deg:
                raise StructureError("structure components must be multivectors on the base chart")
        if kind is None:
            kind = POISSON if Gamma0.is_zero() and f0.is_zero() else JACOBI
        if kind == POISSON and not (Gamma0.is_zero() and f0.is_zero()):
            raise StructureError("aff-Poisson structures have Gamma0 = 0 and f0 = 0")
        if kind not in (POISSON, JACOBI):
            raise StructureError(f"unknown kind {kind!r}")
        return cls(bundle, Lambda0, Gamma0, X0, f0, kind)

    @property
    def base(self) -> tuple:
        return self.bundle.base_coords

    def vertical_bracket(self, f: Poly, g: Poly) -> Poly:
        """Bracket of the base Jacobi pair (Lambda0, Gamma0)."""
        return jacobi_pair_bracket(self.Lambda0, self.Gamma0, f, g)

    def D0(self, h: Poly) -> Poly:
        return apply_vector(self.X0, h) + self.f0 * h

    def __str__(self) -> str:
        parts = [f"lambda0: {self.Lambda0}", f"x0: {self.X0}"]
        if self.kind == JACOBI:
            parts += [f"gamma0: {self.Gamma0}", f"f0: {self.f0}"]
        return f"{self.kind} {{ " + ", ".join(parts) + " }"


def _sec_value(S: AffStructure, sig) -> Poly:
    if isinstance(sig, AVSection):
        if sig.bundle != S.bundle:
            raise StructureError("section of a different bundle")
        return sig.value
    return S.bundle.base_poly(sig)


def aff_bracket(S: AffStructure, sig, sig2) -> Poly:
    a, b = _sec_value(S, sig), _sec_value(S, sig2)
    return S.vertical_bracket(a, b) + S.D0(b - a)


def bracket_vector_part(S: AffStructure, sig, f: Poly) -> Poly:
    """{sigma, sigma' + f} - {sigma, sigma'}: the linear part in the second slot."""
    a = _sec_value(S, sig)
    z = Poly.zero(S.base)
    return aff_bracket(S, a, z + f) - aff_bracket(S, a, z)


# ---------------------------------------------------------------------------
# invariant tensors on the total space


@dataclass(frozen=True)
class InvariantTensorPair:
    bundle: AVChart
    Pi: PolyTensor
    Gamma: PolyTensor


def _lift_tensor(bundle: AVChart, t: PolyTensor) -> PolyTensor:
    return t.on(bundle.chart)


def to_invariant_tensors(S: AffStructure) -> InvariantTensorPair:
    """Pi = Lambda0 - d/ds ^ (X0 + s Gamma0), Gamma = Gamma0 + f0 d/ds."""
    b = S.bundle
    ds = PolyTensor.partial(b.chart, b.fiber_coord)
    W = _lift_tensor(b, S.X0) + _lift_tensor(b, S.Gamma0) * b.s
    Pi = _lift_tensor(b, S.Lambda0) - wedge(ds, W)
    Gamma = _lift_tensor(b, S.Gamma0) + ds * b.lift(S.f0)
    return InvariantTensorPair(b, Pi, Gamma)


def invariance_defects(pair: InvariantTensorPair) -> tuple[PolyTensor, PolyTensor]:
    """(L_XZ Gamma, L_XZ Pi - Gamma ^ XZ); both vanish for an invariant pair."""
    X = pair.bundle.fundamental_field()
    return (schouten_nijenhuis(X, pair.Gamma),
            schouten_nijenhuis(X, pair.Pi) - wedge(pair.Gamma, X))


def from_invariant_tensors(pair: InvariantTensorPair, kind: str | None = None) -> AffStructure:
    b = pair.bundle
    dG, dP = invariance_defects(pair)
    if not dG.is_zero() or not dP.is_zero():
        raise StructureError("tensor pair is not invariant under the fundamental field")
    base = b.base_coords
    n = len(base)
    si = n  # index of s in the chart
    gamma0 = PolyTensor(base, MULTIVECTOR, 1, {k: c.on(base) for k, c in pair.Gamma.comps.items() if k != (si,)})
    f0 = pair.Gamma.component((si,)).on(base)
    lam = {}
    W = {}
    for (i, j), c in pair.Pi.comps.items():
        if j == si:
            W[(i,)] = c  # Pi contains -ds ^ W = W ^ ds
        else:
            if c.depends_on(b.fiber_coord):
                raise StructureError("base part of Pi depends on s")
            lam[(i, j)] = c.on(base)
    Wt = PolyTensor(b.chart, MULTIVECTOR, 1, W)
    X0 = Wt - gamma0.on(b.chart) * b.s
    for c in X0.comps.values():
        if c.depends_on(b.fiber_coord):
            raise StructureError("X0 part depends on s")
    X0 = PolyTensor(base, MULTIVECTOR, 1, {k: c.on(base) for k, c in X0.comps.items()})
    return AffStructure.make(b, PolyTensor(base, MULTIVECTOR, 2, lam), X0, gamma0, f0, kind)


def tensor_bracket(pair: InvariantTensorPair, sig: AVSection, sig2: AVSection) -> Poly:
    """{F_sigma, F_sigma'}_J on the total space."""
    from .avbundle import f_map
    return jacobi_pair_bracket(pair.Pi, pair.Gamma, f_map(sig), f_map(sig2))


# ---------------------------------------------------------------------------
# hamiltonian fields


def hamiltonian_field(S: AffStructure, sig) -> PolyTensor:
    """X_sigma with X_sigma(f) = Lambda0(d sigma, df) + X0(f) (aff-Poisson case)."""
    if S.kind != POISSON:
        raise StructureError("hamiltonian vector fields are defined for aff-Poisson structures")
    a = _sec_value(S, sig)
    comps = {}
    for j, x in enumerate(S.base):
        c = bivector_apply(S.Lambda0, a, Poly.var(S.base, x))
        if not c.is_zero():
            comps[(j,)] = c
    return PolyTensor(S.base, MULTIVECTOR, 1, comps) + S.X0


def lambda_hamiltonian(Lambda0: PolyTensor, g: Poly) -> PolyTensor:
    base = Lambda0.chart
    comps = {(j,): bivector_apply(Lambda0, g, Poly.var(base, x)) for j, x in enumerate(base)}
    return PolyTensor(base, MULTIVECTOR, 1, {k: v for k, v in comps.items() if not v.is_zero()})


# ---------------------------------------------------------------------------
# the algebroids TtildeZ and LtildeZ


def ttilde_algebroid(bundle: AVChart) -> FrameAlgebroid:
    base = bundle.base_coords
    anchors = [PolyTensor.partial(base, x) for x in base] + [_vf(base)]
    return FrameAlgebroid(base, base + (XZ,), anchors, {}, name="TtildeZ")


def ltilde_algebroid(bundle: AVChart) -> FrameAlgebroid:
    base = bundle.base_coords
    n = len(base)
    anchors = [PolyTensor.partial(base, x) for x in base] + [_vf(base), _vf(base)]
    return FrameAlgebroid(base, base + (EA, XZ), anchors, {(n, n + 1): {n + 1: 1}}, name="LtildeZ")


def _into_frame(alg: FrameAlgebroid, t: PolyTensor) -> PolyTensor:
    """Base multivector written in the algebroid frame (first coordinates)."""
    return PolyTensor(alg.chart, t.kind, t.degree, dict(t.comps), alg.frame)


@dataclass
class CanonicalData:
    structure: AffStructure
    algebroid: FrameAlgebroid
    tensor: PolyTensor  # Lambda on TtildeZ or J on LtildeZ
    phi: PolyTensor | None  # phi0 on LtildeZ

    @property
    def is_jacobi(self) -> bool:
        return self.phi is not None


def multisection(S: AffStructure) -> CanonicalData:
    """Lambda = Lambda0 + XZ ^ X0, or J = Lambda0 + ea ^ Gamma0 + XZ ^ (X0 + f0 ea)."""
    b = S.bundle
    n = len(S.base)
    if S.kind == POISSON:
        alg = ttilde_algebroid(b)
        xz = alg.basis((n,))
        L = _into_frame(alg, S.Lambda0) + wedge(xz, _into_frame(alg, S.X0))
        return CanonicalData(S, alg, L, None)
    alg = ltilde_algebroid(b)
    ea, xz = alg.basis((n,)), alg.basis((n + 1,))
    J = (_into_frame(alg, S.Lambda0) + wedge(ea, _into_frame(alg, S.Gamma0))
         + wedge(xz, _into_frame(alg, S.X0) + ea * S.f0))
    phi = alg.basis((n,), kind=FORM)
    return CanonicalData(S, alg, J, phi)


def jet(cd: CanonicalData, sig) -> PolyTensor:
    """First jet of a section as an algebroid 1-form: (d sigma, sigma, 1) or (d sigma, 1)."""
    S = cd.structure
    a = _sec_value(S, sig)
    n = len(S.base)
    comps = {(i,): a.diff(x) for i, x in enumerate(S.base)}
    if cd.is_jacobi:
        comps[(n,)] = a
        comps[(n + 1,)] = Poly.const(S.base, 1)
    else:
        comps[(n,)] = Poly.const(S.base, 1)
    return PolyTensor(S.base, FORM, 1, {k: v for k, v in comps.items() if not v.is_zero()}, cd.algebroid.frame)


def multisection_bracket(cd: CanonicalData, sig, sig2) -> Poly:
    """Bracket read off the multisection: Lambda(j sigma, j sigma')."""
    a, b = jet(cd, sig), jet(cd, sig2)
    out = Poly.zero(cd.structure.base)
    for (i, j), c in cd.tensor.comps.items():
        out = out + c * (a.component((i,)) * b.component((j,)) - a.component((j,)) * b.component((i,)))
    return out


# ---------------------------------------------------------------------------
# canonicality


def derivation_defect(S: AffStructure, f: Poly, g: Poly) -> Poly:
    br = S.vertical_bracket
    return S.D0(br(f, g)) - br(S.D0(f), g) - br(f, S.D0(g))


def _separating(base) -> list:
    return [Poly.const(base, 1)] + [Poly.var(base, x) for x in base]


def canonicality_check(S: AffStructure) -> CheckReport:
    rep = CheckReport(f"canonical {S.kind}")
    L0, G0 = S.Lambda0, S.Gamma0
    LL = schouten_nijenhuis(L0, L0)
    if S.kind == POISSON:
        rep.add("[[Lambda0, Lambda0]] = 0", LL.is_zero(), witness=LL)
        LX = schouten_nijenhuis(L0, S.X0)
        rep.add("[[Lambda0, X0]] = 0", LX.is_zero(), witness=LX)
    else:
        d = LL + wedge(G0, L0) * 2
        rep.add("[[Lambda0, Lambda0]] = -2 Gamma0 ^ Lambda0", d.is_zero(), witness=d)
        GL = schouten_nijenhuis(G0, L0)
        rep.add("[[Gamma0, Lambda0]] = 0", GL.is_zero(), witness=GL)
        sep = _separating(S.base)
        bad = None
        for f in sep:
            for g in sep:
                v = derivation_defect(S, f, g)
                if not v.is_zero():
                    bad = f"D0{{{f},{g}}} - {{D0 {f},{g}}} - {{{f},D0 {g}}} = {v}"
                    break
            if bad:
                break
        rep.add("D0 is a derivation of the bracket", bad is None, witness=bad)
    cd = multisection(S)
    self_br = self_bracket(cd)
    rep.add("self-bracket of the multisection vanishes", self_br.is_zero(), witness=self_br)
    return rep


def self_bracket(cd: CanonicalData) -> PolyTensor:
    if cd.is_jacobi:
        return cd.algebroid.schouten_jacobi(cd.tensor, cd.tensor, cd.phi)
    return cd.algebroid.schouten(cd.tensor, cd.tensor)


def is_canonical(S: AffStructure) -> bool:
    return canonicality_check(S).passed


# ---------------------------------------------------------------------------
# cohomology and homology operators


def cohomology_operator(cd: CanonicalData, t, Y) -> PolyTensor:
    """d_Lambda(Y) = [[Lambda, Y]], or [[J, Y]]^phi + t i_phi J ^ Y."""
    alg = cd.algebroid
    Y = alg.coerce(Y)
    if not cd.is_jacobi:
        return alg.schouten(cd.tensor, Y)
    t = Fraction(t)
    out = alg.schouten_jacobi(cd.tensor, Y, cd.phi)
    if t:
        out = out + wedge(contract_one_form(cd.phi, cd.tensor), Y) * t
    return out


def homology_operator(cd: CanonicalData, t, w) -> PolyTensor:
    """L_Lambda = i_Lambda d - d i_Lambda, or
    L_J w + (|w| + t) i_{i_phi J} w + phi ^ i_J w."""
    alg = cd.algebroid
    w = alg.coerce(w, FORM)
    k = w.degree
    if k == 0:
        # degree -1: nothing below functions
        return alg.zero(FORM, 0)
    out = alg.lie(cd.tensor, w)
    if not cd.is_jacobi:
        return out
    t = Fraction(t)
    iJ = contract_one_form(cd.phi, cd.tensor)
    c = k + t
    if c:
        out = out + interior(iJ, w) * c
    if k >= 2:
        out = out + wedge(cd.phi, interior(cd.tensor, w))
    return out


def test_multisections(alg: FrameAlgebroid, max_poly_degree: int = 2, max_tensor_degree: int | None = None) -> list:
    """Monomial coefficient times basis multisection, all degrees."""
    top = alg.rank if max_tensor_degree is None else max_tensor_degree
    out = []
    for k in range(0, top + 1):
        for I in all_index_sets(alg.rank, k):
            for m in monomials(alg.chart, max_poly_degree):
                out.append(PolyTensor(alg.chart, MULTIVECTOR, k, {I: m}, alg.frame))
    return out


def test_forms(alg: FrameAlgebroid, max_poly_degree: int = 2, max_tensor_degree: int | None = None) -> list:
    top = alg.rank if max_tensor_degree is None else max_tensor_degree
    out = []
    for k in range(0, top + 1):
        for I in all_index_sets(alg.rank, k):
            for m in monomials(alg.chart, max_poly_degree):
                out.append(PolyTensor(alg.chart, FORM, k, {I: m}, alg.frame))
    return out


DEFAULT_TS = (0, 1, -1, 2)


def squared_zero_report(S: AffStructure, ts: Sequence = DEFAULT_TS, max_poly_degree: int = 2) -> CheckReport:
    """(d)^2 = 0 and (L)^2 = 0 on all monomial test multisections and forms."""
    cd = multisection(S)
    rep = CheckReport(f"squared-zero {S.kind}")
    tvals = ts if cd.is_jacobi else (0,)
    Ys = test_multisections(cd.algebroid, max_poly_degree)
    ws = test_forms(cd.algebroid, max_poly_degree)
    for t in tvals:
        label = f" t={t}" if cd.is_jacobi else ""
        bad = None
        for Y in Ys:
            v = cohomology_operator(cd, t, cohomology_operator(cd, t, Y))
            if not v.is_zero():
                bad = f"Y = {Y}: {v}"
                break
        rep.add(f"cohomology squared{label}", bad is None, witness=bad)
        bad = None
        for w in ws:
            if w.degree < 2:
                continue
            v = homology_operator(cd, t, homology_operator(cd, t, w))
            if not v.is_zero():
                bad = f"w = {w}: {v}"
                break
        rep.add(f"homology squared{label}", bad is None, witness=bad)
    return rep


def lie_square_identity(S: AffStructure, max_poly_degree: int = 2) -> CheckReport:
    """2 (L_Lambda)^2 = -L_[[Lambda, Lambda]] on test forms (Poisson case)."""
    cd = multisection(S)
    if cd.is_jacobi:
        raise StructureError("the identity is stated for TtildeZ bivectors")
    alg = cd.algebroid
    LL = alg.schouten(cd.tensor, cd.tensor)
    rep = CheckReport("2 L^2 = -L_[[L,L]]")
    bad = None
    for w in test_forms(alg, max_poly_degree):
        if w.degree < 2:
            continue
        lhs = homology_operator(cd, 0, homology_operator(cd, 0, w)) * 2
        if lhs != -alg.lie(LL, w):
            bad = f"w = {w}"
            break
    rep.add("2 (L_Lambda)^2 = -L_[[Lambda,Lambda]]", bad is None, witness=bad)
    return rep


def non_canonical_control(bundle: AVChart, kind: str = POISSON) -> AffStructure:
    """Lambda0 = d/dq ^ d/dp with X0 = q^2 d/dq on a 2-dim base; X0 is not Poisson."""
    base = bundle.base_coords
    if len(base) < 2:
        raise StructureError("control needs a base of dimension >= 2")
    q, p = base[0], base[1]
    L0 = wedge(PolyTensor.partial(base, q), PolyTensor.partial(base, p))
    X0 = PolyTensor.partial(base, q) * Poly.var(base, q) ** 2
    return AffStructure(bundle, L0, _vf(base), X0, Poly.zero(base), kind)


# ---------------------------------------------------------------------------
# from Lie affgebroids


@dataclass
class AffgebroidBrackets:
    spec: AffgebroidSpec
    basis: list
    dagger: AffStructure  # on AV(A^dag), linear aff-Poisson
    sharp: AffStructure  # on AV(A^#), affine aff-Jacobi (Poisson when v0 is central)
    linear_poisson: PolyTensor
    names: dict = field(default_factory=dict)

    def _frame_coeffs(self, sec) -> list:
        inv = la.inverse(la.columns(self.basis))
        out = []
        for row in inv:
            c = Poly.zero(self.spec.chart)
            for r, s in zip(row, sec):
                if r:
                    c = c + s * r
            out.append(c)
        return out

    def _linear(self, sec, chart) -> Poly:
        """iota(sec) = sum of frame coefficients times dual coordinates, with q = -s."""
        cs = self._frame_coeffs(sec)
        out = Poly.zero(chart)
        for c, name in zip(cs, self.names["xi"]):
            cc = c.on(chart)
            if name == self.names["q"]:
                out = out - cc * Poly.var(chart, self.names["s"])
            else:
                out = out + cc * Poly.var(chart, name)
        return out

    def hat_section(self, a) -> Poly:
        """sigma-hat_a on AV(A^dag): iota_a + s."""
        b = self.dagger.bundle
        v = self._linear(a, b.chart) + b.s
        return b.base_poly(v)

    def iota_dagger(self, V) -> Poly:
        b = self.dagger.bundle
        return b.base_poly(self._linear(V, b.chart))

    def restrict(self, f: Poly) -> Poly:
        """Restriction to A^# (r = 1) as a polynomial on the base of AV(A^#)."""
        r = self.names["r"]
        tgt = self.sharp.bundle.base_coords
        return f.substitute({r: Poly.const(tgt, 1), **{x: Poly.var(tgt, x) for x in tgt}}, tgt)

    def section_sharp(self, a) -> Poly:
        return self.restrict(self.hat_section(a))

    def iota_sharp(self, V) -> Poly:
        return self.restrict(self.iota_dagger(V))


def _dual_names(spec: AffgebroidSpec, k: int) -> dict:
    given = spec.notes.get("dual_names")
    if given:
        r, q, ys, s = given
    else:
        r, q, s = "r", "q", "s"
        ys = tuple(f"y{i}" for i in range(1, k + 1))
    taken = set(spec.chart)
    for n in (r, q, s) + tuple(ys):
        if n in taken:
            raise StructureError(f"dual coordinate {n!r} clashes with the base chart")
    return {"r": r, "q": q, "s": s, "y": tuple(ys), "xi": (r, q) + tuple(ys)}


def from_affgebroid(spec: AffgebroidSpec) -> AffgebroidBrackets:
    h = algebroid_hull(spec)
    alg = h.algebroid
    basis = h.basis
    N = len(basis)
    names = _dual_names(spec, N - 2)
    xi, r, q, s = names["xi"], names["r"], names["q"], names["s"]
    ys = names["y"]
    base_dag = spec.chart + (r,) + ys
    bundle_dag = AVChart(base_dag, s)
    ch = bundle_dag.chart

    def xi_poly(i):
        return -Poly.var(ch, s) if xi[i] == q else Poly.var(ch, xi[i])

    def d_xi(i):
        return -PolyTensor.partial(ch, s) if xi[i] == q else PolyTensor.partial(ch, xi[i])

    Pi = _bv(ch)
    for i in range(N):
        rho = alg.anchors[i].on(ch)
        if not rho.is_zero():
            Pi = Pi + wedge(d_xi(i), rho)
    for i, j in combinations(range(N), 2):
        row = alg.structure.get((i, j), {})
        c = Poly.zero(ch)
        for k, ck in row.items():
            c = c + ck.on(ch) * xi_poly(k)
        if not c.is_zero():
            Pi = Pi + wedge(d_xi(i), d_xi(j)) * c
    dagger = from_invariant_tensors(InvariantTensorPair(bundle_dag, Pi, _vf(ch)), POISSON)

    # Jacobi structure (Pi + Gamma ^ Delta, Gamma) restricted to r = 1
    rpoly = Poly.var(ch, r)
    Gamma = PolyTensor(ch, MULTIVECTOR, 1,
                       {(j,): bivector_apply(Pi, rpoly, Poly.var(ch, x)) for j, x in enumerate(ch)})
    Delta = _vf(ch)
    for i in range(N):
        Delta = Delta + d_xi(i) * xi_poly(i)
    PJ = Pi + wedge(Gamma, Delta)
    base_sh = spec.chart + ys
    bundle_sh = AVChart(base_sh, s)
    ch2 = bundle_sh.chart
    sub = {r: Poly.const(ch2, 1), **{x: Poly.var(ch2, x) for x in ch2}}
    ri = ch.index(r)

    def restrict_tensor(t: PolyTensor) -> PolyTensor:
        comps = {}
        for I, c in t.comps.items():
            cc = c.substitute(sub, ch2)
            if ri in I:
                if not cc.is_zero():
                    raise StructureError("Jacobi structure is not tangent to A^#")
                continue
            J = tuple(ch2.index(ch[i]) for i in I)
            comps[J] = cc
        return PolyTensor(ch2, MULTIVECTOR, t.degree, comps)

    PJr, Gr = restrict_tensor(PJ), restrict_tensor(Gamma)
    kind = POISSON if is_central(spec) else JACOBI
    sharp = from_invariant_tensors(InvariantTensorPair(bundle_sh, PJr, Gr), kind if Gr.is_zero() else JACOBI)
    return AffgebroidBrackets(spec, basis, dagger, sharp, Pi, names)


def c3_report(br: AffgebroidBrackets, degree: int = 1) -> CheckReport:
    """Both correspondences and their coherence on generator pairs."""
    spec = br.spec
    rep = CheckReport(f"c3 {spec.name}")
    gens = generator_sections(spec, degree)
    c1 = c2 = coh = None
    for a, b in combinations(gens, 2):
        lhs1 = br.iota_dagger(spec.bracket(a, b))
        rhs1 = aff_bracket(br.dagger, br.hat_section(a), br.hat_section(b))
        if lhs1 != rhs1 and c1 is None:
            c1 = f"{lhs1} vs {rhs1}"
        lhs2 = br.iota_sharp(spec.bracket(a, b))
        rhs2 = aff_bracket(br.sharp, br.section_sharp(a), br.section_sharp(b))
        if lhs2 != rhs2 and c2 is None:
            c2 = f"{lhs2} vs {rhs2}"
        if br.restrict(rhs1) != rhs2 and coh is None:
            coh = f"{br.restrict(rhs1)} vs {rhs2}"
    rep.add("c1: iota_[a,a'] = {hat sigma_a, hat sigma_a'} on A^dag", c1 is None, witness=c1)
    rep.add("c2: iota_[a,a'] = {sigma_a, sigma_a'} on A^#", c2 is None, witness=c2)
    rep.add("c1 restricted to A^# equals c2", coh is None, witness=coh)
    central = is_central(spec)
    rep.add("poisson tag iff v0 central", (br.sharp.kind == POISSON) == central,
            witness=f"kind={br.sharp.kind}, central={central}")
    return rep


# ---------------------------------------------------------------------------
# time-dependent hamiltonians


def timedep_structure(base: Sequence[str], time: str = "t", fiber: str = "s") -> AffStructure:
    """Canonical aff-Poisson structure of T*(Q x R) over the quotient by the momentum p_t.

    base = (q.., p.., t) with s = -p_t: Lambda0 = sum d/dp ^ d/dq and X0 = d/dt."""
    base = tuple(base)
    b = AVChart(base, fiber)
    n = (len(base) - 1) // 2
    qs, ps = base[:n], base[n:2 * n]
    L0 = _bv(base)
    for qn, pn in zip(qs, ps):
        L0 = L0 + wedge(PolyTensor.partial(base, pn), PolyTensor.partial(base, qn))
    return AffStructure.make(b, L0, PolyTensor.partial(base, time))


__all__ = [n for n in dir() if not n.startswith("_")]
