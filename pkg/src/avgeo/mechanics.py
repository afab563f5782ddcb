"""Applications: a charged particle, time-dependent hamiltonians, and a
massive particle in Newtonian space-time described without a preferred
inertial frame.

Newtonian conventions.  Coordinates (x0, x1.., p1..) are adapted to an
inertial frame u: the basis (u, e_1..) of V(N) with e_i spanning ker tau,
and p_i dual to e_i.  A momentum class is stored as a representative
[u, P, s] where P is the physical momentum m g(v - u).  Changing the
frame by d = u - u' gives

    P' = P + m g d,    s' = s - <P, d> - m/2 <g d, d>,

which is an exact groupoid action.  The hamiltonian section of the dual
AV-bundle has the value -h_u in these representatives.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import linalg as la
from .affspace import SPECIAL_AFFINE, HullSpace
from .algebroids import AffgebroidSpec, affgebroid_axioms, is_central
from .avbrackets import (
    AffStructure,
    POISSON,
    c3_report,
    aff_bracket,
    from_affgebroid,
    hamiltonian_field,
    timedep_structure,
)
from .avbundle import AffOneForm, AVChart, GaugeChange, phase_symplectic
from .checks import CheckReport
from .exactpoly import (
    FORM,
    MULTIVECTOR,
    Poly,
    PolyTensor,
    apply_vector,
    pullback_form,
    pushforward_multivector,
    wedge,
)


class MechanicsError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Newtonian space-time


@dataclass(frozen=True)
class NewtonSpacetime:
    tau: tuple
    metric_g: tuple  # on the basis e_1.. of ker tau returned by space_basis()
    mass: Fraction

    def __post_init__(self):
        tau = la.vec(self.tau)
        if la.is_zero_vec(tau):
            raise MechanicsError("tau must be non-zero")
        g = tuple(la.vec(r) for r in self.metric_g)
        k = len(tau) - 1
        if len(g) != k or any(len(r) != k for r in g):
            raise MechanicsError(f"metric must be {k}x{k} on ker tau")
        if any(g[i][j] != g[j][i] for i in range(k) for j in range(k)):
            raise MechanicsError("metric must be symmetric")
        # Sylvester: leading principal minors positive
        for n in range(1, k + 1):
            if _det([list(r[:n]) for r in g[:n]]) <= 0:
                raise MechanicsError("metric must be positive definite")
        m = la.frac(self.mass)
        if m <= 0:
            raise MechanicsError("mass must be positive")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "metric_g", g)
        object.__setattr__(self, "mass", m)

    @property
    def dim(self) -> int:
        return len(self.tau)

    @property
    def space_dim(self) -> int:
        return self.dim - 1

    def space_basis(self) -> list:
        return la.nullspace([list(self.tau)])

    def is_frame(self, u) -> bool:
        return len(u) == self.dim and la.dot(self.tau, la.vec(u)) == 1

    def check_frame(self, u) -> tuple:
        u = la.vec(u)
        if not self.is_frame(u):
            raise MechanicsError(f"tau(u) must equal 1, got u = {u}")
        return u

    def spatial(self, w) -> tuple:
        """Components of w in ker tau on the basis space_basis()."""
        w = la.vec(w)
        if la.dot(self.tau, w) != 0:
            raise MechanicsError("vector is not in ker tau")
        return la.solve(la.columns(self.space_basis()), w)

    def g(self, w) -> tuple:
        return la.matvec(self.metric_g, w)

    def g_inverse(self) -> list:
        return la.inverse(self.metric_g)

    def chart(self) -> tuple:
        return tuple(f"x{i}" for i in range(self.dim))

    def momentum_names(self) -> tuple:
        return tuple(f"p{i}" for i in range(1, self.dim))

    def phase_chart(self) -> tuple:
        return self.chart() + self.momentum_names()


def _det(m) -> Fraction:
    a = [list(map(Fraction, row)) for row in m]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def standard_spacetime(metric=None, mass=1, space_dim: int = 3) -> NewtonSpacetime:
    """tau = dx^0, metric on span(e_1..e_k); metric "I" or None means identity."""
    if metric is None or metric == "I":
        metric = la.identity(space_dim)
    tau = la.unit(space_dim + 1, 0)
    return NewtonSpacetime(tau, tuple(tuple(r) for r in metric), mass)


@dataclass(frozen=True)
class FramedMomentum:
    u: tuple
    p: tuple
    s: Fraction

    def __post_init__(self):
        object.__setattr__(self, "u", la.vec(self.u))
        object.__setattr__(self, "p", la.vec(self.p))
        object.__setattr__(self, "s", la.frac(self.s))


def frame_change(st: NewtonSpacetime, fm: FramedMomentum, u2) -> FramedMomentum:
    st.check_frame(fm.u)
    u2 = st.check_frame(u2)
    d = st.spatial(la.sub(fm.u, u2))
    gd = la.scale(st.mass, st.g(d))
    p2 = la.add(fm.p, gd)
    s2 = fm.s - la.dot(fm.p, d) - la.dot(gd, d) / 2
    return FramedMomentum(u2, p2, s2)


def canonical_form(st: NewtonSpacetime, fm: FramedMomentum, u_ref) -> FramedMomentum:
    return frame_change(st, fm, u_ref)


def momenta_equivalent(st: NewtonSpacetime, a: FramedMomentum, b: FramedMomentum) -> bool:
    return canonical_form(st, a, b.u) == b


def momentum_pairing(st: NewtonSpacetime, fm: FramedMomentum, v, r) -> Fraction:
    """Affine function of the momentum class on the point [u, v, r] of A_0.

    The point is given in the momentum's own frame u."""
    w = st.spatial(la.sub(la.vec(v), fm.u))
    return la.dot(fm.p, w) + fm.s - la.frac(r)


def velocity_shift(st: NewtonSpacetime, u, u2, v) -> Fraction:
    """f_{u,u'}(v) = m <g(u' - u), v - (u + u')/2>, the lagrangian frame shift."""
    u, u2, v = st.check_frame(u), st.check_frame(u2), st.check_frame(v)
    d = st.spatial(la.sub(u2, u))
    mid = la.scale(Fraction(1, 2), la.add(u, u2))
    w = st.spatial(la.sub(v, mid))
    return st.mass * la.dot(st.g(d), w)


def velocity_point_change(st: NewtonSpacetime, u, u2, v, r) -> Fraction:
    """r' with [u, v, r] = [u', v, r']."""
    return la.frac(r) - velocity_shift(st, u, u2, v)


# ---------------------------------------------------------------------------
# the Newtonian Lie affgebroid


def newton_affgebroid(st: NewtonSpacetime) -> AffgebroidSpec:
    """Sections [u, X, r] in adapted coordinates; hull coordinates (X^0, X^1.., r).

    [X~, Y~] = [u, [X, Y], X(s) - Y(r)] with anchor X."""
    chart = st.chart()
    n = st.dim
    one = la.unit(n + 1, 0)
    v0 = la.unit(n + 1, n)
    fiber = HullSpace(n + 1, SPECIAL_AFFINE, one=one, v0=v0, label="A")

    def vf(a) -> PolyTensor:
        return PolyTensor(chart, MULTIVECTOR, 1, {(i,): a[i] for i in range(n) if not a[i].is_zero()})

    def bracket(a, b):
        X, Y = vf(a), vf(b)
        XY = [apply_vector(X, b[i]) - apply_vector(Y, a[i]) for i in range(n)]
        return tuple(XY) + (apply_vector(X, b[n]) - apply_vector(Y, a[n]),)

    def anchor(a):
        return vf(a)

    spec = AffgebroidSpec("newton", chart, fiber, bracket, anchor,
                          frame_names=("w0", "u") + tuple(f"e{i}" for i in range(1, n)))
    spec.notes["dual_names"] = ("r", "q", st.momentum_names(), "s")
    return spec


def frame_section_map(st: NewtonSpacetime, u, u2) -> Callable:
    """Hull sections in the u-representation to the u'-representation.

    Both representations use the u-adapted coordinates on N; the last
    component changes by the linear part of -f_{u,u'}."""
    u, u2 = st.check_frame(u), st.check_frame(u2)
    d = st.spatial(la.sub(u2, u))
    gd = la.scale(st.mass, st.g(d))
    mid = la.scale(Fraction(1, 2), la.add(u, u2))
    mid_w = st.spatial(la.sub(mid, u))
    # f(X) for a hull vector X = X^0 u + X^i e_i: <gd, X^i e_i - X^0 (mid - u)>
    coef = [-la.dot(gd, mid_w)] + list(gd)

    def apply(sec):
        shift = Poly.zero(sec[0].chart)
        for c, x in zip(coef, sec[:-1]):
            if c:
                shift = shift + x * c
        return tuple(sec[:-1]) + (sec[-1] - shift,)

    return apply


def newton_well_defined(st: NewtonSpacetime, u2, degree: int = 1) -> CheckReport:
    """Bracket computed from u'-representatives and mapped back equals the u-bracket."""
    from .algebroids import generator_sections
    from itertools import combinations
    spec = newton_affgebroid(st)
    u = la.unit(st.dim, 0) if st.is_frame(la.unit(st.dim, 0)) else None
    if u is None:
        raise MechanicsError("adapted frame must be the first basis vector")
    fwd = frame_section_map(st, u, u2)
    rep = CheckReport("newton well-defined")
    bad = None
    for a, b in combinations(generator_sections(spec, degree), 2):
        lhs = spec.bracket(fwd(a), fwd(b))
        rhs = fwd(spec.bracket(a, b))
        # the bracket is a vector section; its shift uses the linear part only
        if lhs != rhs and bad is None:
            bad = f"{a}, {b}"
    rep.add("bracket independent of representatives", bad is None, witness=bad)
    return rep


def newton_report(st: NewtonSpacetime) -> CheckReport:
    spec = newton_affgebroid(st)
    rep = CheckReport("newton affgebroid")
    rep.extend(affgebroid_axioms(spec, degree=1, jacobi_degree=1))
    rep.add("w0 central", is_central(spec))
    br = from_affgebroid(spec)
    rep.extend(c3_report(br))
    rep.add("sharp structure is aff-Poisson", br.sharp.kind == POISSON, witness=br.sharp.kind)
    return rep


# ---------------------------------------------------------------------------
# Newtonian dynamics


def _momentum_flip(st: NewtonSpacetime) -> dict:
    ch = st.phase_chart()
    out = {x: Poly.var(ch, x) for x in ch}
    for p in st.momentum_names():
        out[p] = -Poly.var(ch, p)
    return out


def newton_structure(st: NewtonSpacetime) -> AffStructure:
    """Aff-Poisson structure on AV(A^#) over (x0.., p1..), from the affgebroid.

    The dual coordinates produced by from_affgebroid are minus the physical
    momenta; the structure is returned in physical momenta."""
    sharp = from_affgebroid(newton_affgebroid(st)).sharp
    flip = _momentum_flip(st)
    ch = st.phase_chart()
    L0 = pushforward_multivector(sharp.Lambda0, flip, flip, ch)
    X0 = pushforward_multivector(sharp.X0, flip, flip, ch)
    return AffStructure.make(sharp.bundle, L0, X0)


def newton_hamiltonian(st: NewtonSpacetime, potential=None) -> Poly:
    """h_u = <p, g^-1 p>/2m + phi(x) on the phase chart."""
    ch = st.phase_chart()
    ps = [Poly.var(ch, p) for p in st.momentum_names()]
    ginv = st.g_inverse()
    h = Poly.zero(ch)
    for i, pi in enumerate(ps):
        for j, pj in enumerate(ps):
            if ginv[i][j]:
                h = h + pi * pj * (ginv[i][j] / (2 * st.mass))
    if potential is not None:
        phi = potential if isinstance(potential, Poly) else Poly.const(st.chart(), potential)
        if any(phi.depends_on(p) for p in st.momentum_names() if p in phi.chart):
            raise MechanicsError("the potential depends on momenta")
        ext = _parameter_chart(ch, phi.chart)
        h = h.on(ext) + phi.on(ext)
    return h


def newton_dynamics(st: NewtonSpacetime, h: Poly, structure: AffStructure | None = None) -> PolyTensor:
    """Vector field generated by the hamiltonian section with value -h_u.

    h may live on the phase chart followed by constant parameters (k, omega, ..);
    the structure is extended trivially along them."""
    S = structure or newton_structure(st)
    ch = st.phase_chart()
    if tuple(S.base) != ch:
        raise MechanicsError(f"structure base {S.base} is not the adapted phase chart {ch}")
    ext = _parameter_chart(ch, h.chart)
    if ext != ch:
        S = AffStructure.make(AVChart(ext, S.bundle.fiber_coord), S.Lambda0.on(ext), S.X0.on(ext))
    return hamiltonian_field(S, -h.on(ext))


def _parameter_chart(ch: tuple, chart: tuple) -> tuple:
    """ch followed by the names of chart that are not in ch (constant parameters)."""
    return tuple(ch) + tuple(c for c in chart if c not in ch)


def newton_expected(st: NewtonSpacetime, potential) -> PolyTensor:
    """x' = g^-1 p/m + u and p' = -d_s phi, written out directly."""
    xs, ps = st.chart(), st.momentum_names()
    phi = potential if isinstance(potential, Poly) else Poly.const(xs, potential or 0)
    if any(p in phi.chart for p in ps):
        raise MechanicsError("the potential depends on momenta")
    ch = _parameter_chart(st.phase_chart(), phi.chart)
    phi = phi.on(ch)
    ginv = st.g_inverse()
    comps = {(0,): Poly.const(ch, 1)}
    for i in range(st.space_dim):
        c = Poly.zero(ch)
        for j, pj in enumerate(ps):
            if ginv[i][j]:
                c = c + Poly.var(ch, pj) * (ginv[i][j] / st.mass)
        comps[(i + 1,)] = c
        comps[(st.dim + i,)] = -phi.diff(xs[i + 1])
    return PolyTensor(ch, MULTIVECTOR, 1, {k: v for k, v in comps.items() if not v.is_zero()})


def frame_coordinate_change(st: NewtonSpacetime, d) -> tuple[dict, dict]:
    """Adapted coordinates for u' = u - d (d spatial) in terms of the u-coordinates.

    Returns (forward, inverse): x'^0 = x^0, x'^i = x^i + x^0 d^i,
    p' = p + m g d, and the inverse maps."""
    ch = st.phase_chart()
    xs, ps = st.chart(), st.momentum_names()
    d = la.vec(d)
    gd = la.scale(st.mass, st.g(d))
    fwd, inv = {}, {}
    x0 = Poly.var(ch, xs[0])
    fwd[xs[0]] = x0
    inv[xs[0]] = x0
    for i in range(st.space_dim):
        xi, pi = Poly.var(ch, xs[i + 1]), Poly.var(ch, ps[i])
        fwd[xs[i + 1]] = xi + x0 * d[i]
        inv[xs[i + 1]] = xi - x0 * d[i]
        fwd[ps[i]] = pi + gd[i]
        inv[ps[i]] = pi - gd[i]
    return fwd, inv


def transform_hamiltonian(st: NewtonSpacetime, h: Poly, d) -> Poly:
    """Value of the same hamiltonian section in the frame u' = u - d, in u'-coordinates.

    The section value transforms like s in a momentum class: the u-representative
    [u, P, -h] becomes [u', P + m g d, -h - <P, d> - m/2 <g d, d>]."""
    ch = st.phase_chart()
    d = la.vec(d)
    gd = la.scale(st.mass, st.g(d))
    ps = [Poly.var(ch, p) for p in st.momentum_names()]
    shift = Poly.const(ch, la.dot(gd, d) / 2)
    for pi, di in zip(ps, d):
        shift = shift + pi * di
    value = -h.on(ch) - shift  # in u-coordinates
    _, inv = frame_coordinate_change(st, d)
    return -value.substitute(inv, ch)


def frame_independence(st: NewtonSpacetime, potential, d) -> CheckReport:
    """The field computed in the frame u' and pulled back equals the u-field, exactly."""
    rep = CheckReport("newton frame independence")
    ch = st.phase_chart()
    h = newton_hamiltonian(st, potential)
    V = newton_dynamics(st, h)
    h2 = transform_hamiltonian(st, h, d)
    V2 = newton_dynamics(st, h2)
    fwd, inv = frame_coordinate_change(st, d)
    pushed = pushforward_multivector(V, fwd, inv, ch)
    rep.add(f"field invariant under d = {tuple(str(x) for x in la.vec(d))}", pushed == V2,
            witness=f"{pushed} vs {V2}")
    # the hamiltonian in the new frame has the standard form again
    rep.add("transformed hamiltonian is h_u'", h2 == newton_hamiltonian(st, _potential_after(st, potential, d)),
            witness=str(h2))
    return rep


def _potential_after(st: NewtonSpacetime, potential, d):
    if potential is None:
        return None
    ch = st.phase_chart()
    phi = (potential if isinstance(potential, Poly) else Poly.const(st.chart(), potential)).on(ch)
    _, inv = frame_coordinate_change(st, d)
    return phi.substitute(inv, ch).on(st.chart())


def coordinate_display_bracket(st: NewtonSpacetime, X: Sequence[Poly], xi: Poly, Y: Sequence[Poly],
                               eta: Poly) -> Poly:
    """p_i X^j d_jY^i - p_i Y^j d_jX^i + p_i d_0Y^i - p_i d_0X^i - X^i d_i eta - d_0 eta + Y^i d_i xi + d_0 xi.

    X, Y are spatial components of sections with X^0 = 1, written on x-coordinates."""
    ch = st.phase_chart()
    xs = st.chart()
    ps = [Poly.var(ch, p) for p in st.momentum_names()]
    X = [x.on(ch) for x in X]
    Y = [y.on(ch) for y in Y]
    xi, eta = xi.on(ch), eta.on(ch)
    k = st.space_dim
    out = Poly.zero(ch)
    for i in range(k):
        for j in range(k):
            out = out + ps[i] * X[j] * Y[i].diff(xs[j + 1]) - ps[i] * Y[j] * X[i].diff(xs[j + 1])
        out = out + ps[i] * Y[i].diff(xs[0]) - ps[i] * X[i].diff(xs[0])
        out = out - X[i] * eta.diff(xs[i + 1]) + Y[i] * xi.diff(xs[i + 1])
    return out - eta.diff(xs[0]) + xi.diff(xs[0])


def coordinate_bracket_check(st: NewtonSpacetime, X, xi, Y, eta) -> tuple[Poly, Poly]:
    """Our bracket of the sections of (1, X, xi), (1, Y, eta) and the coordinate display.

    In physical momenta our section of (1, X, xi) is xi - <p, X>, the
    negative of the display's <p, X> - xi, so the brackets agree up to sign."""
    br = from_affgebroid(newton_affgebroid(st))
    ch0 = st.chart()
    one = Poly.const(ch0, 1)
    a = (one,) + tuple(Poly(ch0, x.terms) if x.chart == ch0 else x.on(ch0) for x in X) + (xi.on(ch0),)
    b = (one,) + tuple(y.on(ch0) for y in Y) + (eta.on(ch0),)
    flip = _momentum_flip(st)
    ch = st.phase_chart()
    sa = br.section_sharp(a).substitute(flip, ch)
    sb = br.section_sharp(b).substitute(flip, ch)
    ours = aff_bracket(newton_structure(st), sa, sb)
    theirs = -coordinate_display_bracket(st, X, xi, Y, eta)
    return ours, theirs


# ---------------------------------------------------------------------------
# time-dependent hamiltonians


def timedep_chart(n: int = 1) -> tuple:
    qs = ("q",) if n == 1 else tuple(f"q{i}" for i in range(1, n + 1))
    ps = ("p",) if n == 1 else tuple(f"p{i}" for i in range(1, n + 1))
    return qs + ps + ("t",)


def timedep_dynamics(H: Poly) -> PolyTensor:
    """Field generated by the section sigma_H through the aff-Poisson structure.

    The AV-bundle is T*(Q x R) over T*Q x R with fiber coordinate s = -p_t,
    so that F_sigma_H = H + p_t."""
    S = timedep_structure(H.chart)
    return hamiltonian_field(S, H)


def timedep_cotangent_route(H: Poly) -> PolyTensor:
    """Hamiltonian field of F = H + p_t on T*(Q x R), projected to T*Q x R."""
    base = H.chart
    n = (len(base) - 1) // 2
    full = base + ("p_t",)
    F = H.on(full) + Poly.var(full, "p_t")
    pairs = list(zip(base[:n], base[n:2 * n])) + [("t", "p_t")]
    comps = {}
    for q, p in pairs:
        # Poisson bivector d/dp ^ d/dq: X_F = dF/dp d/dq - dF/dq d/dp
        comps[q] = comps.get(q, Poly.zero(full)) + F.diff(p)
        comps[p] = comps.get(p, Poly.zero(full)) - F.diff(q)
    proj = {}
    for name, c in comps.items():
        if name == "p_t":
            continue
        if c.depends_on("p_t"):
            raise MechanicsError("projected field depends on p_t")
        proj[name] = c.on(base)
    return PolyTensor.vector_field(base, proj)


def timedep_direct(H: Poly) -> PolyTensor:
    """X_{H_t} + d/dt with X_H = dH/dp d/dq - dH/dq d/dp."""
    base = H.chart
    n = (len(base) - 1) // 2
    comps = {"t": Poly.const(base, 1)}
    for q, p in zip(base[:n], base[n:2 * n]):
        comps[q] = H.diff(p)
        comps[p] = -H.diff(q)
    return PolyTensor.vector_field(base, comps)


# ---------------------------------------------------------------------------
# charged particle


@dataclass(frozen=True)
class ChargedSetup:
    charge: Fraction
    potential: AffOneForm
    mass: Fraction
    metric: tuple | None = None  # space-time metric for the lagrangian, numeric use only

    def __post_init__(self):
        object.__setattr__(self, "charge", la.frac(self.charge))
        object.__setattr__(self, "mass", la.frac(self.mass))

    @property
    def bundle(self) -> AVChart:
        return self.potential.bundle


def lambda_e(e, s, r):
    """Fiber coordinate of lambda_e(z, r) in Z_e: s_e = -e s - r.

    The R-action on Z lowers s (X_Z = -d/ds) and the orbits of
    (s, r) -> (s - t, r + t e) are the level sets of r + e s."""
    return -la.frac(e) * s - r


@dataclass
class ChargedPhaseModel:
    setup: ChargedSetup
    bundle: AVChart  # Z_e in the trivialization induced from Z
    chart: tuple
    omega: PolyTensor
    potential_e: AffOneForm
    trivial: bool

    def in_reduced_level(self, covector: Sequence) -> bool:
        """Membership of a covector (p_x.., p_s) on Z in K_e = {<p, X_Z> = -e}."""
        p_s = la.frac(covector[-1])
        return -p_s == -self.setup.charge


def charged_phase_model(cs: ChargedSetup) -> ChargedPhaseModel:
    b = cs.bundle
    e = cs.charge
    alpha_e = AffOneForm(b, tuple(c * (-e) for c in cs.potential.coeffs))
    return ChargedPhaseModel(cs, b, b.phase_chart(), phase_symplectic(b), alpha_e, e == 0)


def charged_reduction_check(cs: ChargedSetup) -> CheckReport:
    """The reduced form on K_e agrees with omega, and lambda_e intertwines the actions."""
    rep = CheckReport(f"charged particle e={cs.charge}")
    model = charged_phase_model(cs)
    b = cs.bundle
    e = cs.charge
    # T*Z in coordinates (x.., s, p_x.., p_s); K_e is p_s = e
    xs, ps = b.base_coords, b.momentum_names()
    full = xs + (b.fiber_coord,) + ps + ("p_s",)
    wZ = PolyTensor.zero(full, FORM, 2)
    for x, p in zip(xs + (b.fiber_coord,), ps + ("p_s",)):
        wZ = wZ + wedge(PolyTensor.d(full, p), PolyTensor.d(full, x))
    on_level = {v: Poly.var(model.chart + (b.fiber_coord,), v) for v in xs + ps + (b.fiber_coord,)}
    lvl_chart = model.chart + (b.fiber_coord,)
    on_level["p_s"] = Poly.const(lvl_chart, e)
    restricted = pullback_form(wZ, on_level, lvl_chart)
    proj = pullback_form(model.omega, {v: Poly.var(lvl_chart, v) for v in model.chart}, lvl_chart)
    rep.add("omega_Z restricted to K_e is the pullback of omega", restricted == proj,
            witness=f"{restricted} vs {proj}")
    # sections: d(lambda_e^* sigma) lies in K_e and X_Z(lambda_e^* sigma) = -e
    sig = Poly.var(xs, xs[0]) ** 2 + Poly.const(xs, 1)
    ch = b.chart
    F = sig.on(ch) - lambda_e(e, b.s, 0)  # F_sigma composed with z -> lambda_e(z, 0)
    rep.add("X_Z(lambda_e^* sigma) = -e", apply_vector(b.fundamental_field(), F) == Poly.const(ch, -e),
            witness=str(apply_vector(b.fundamental_field(), F)))
    cov = [F.diff(x) for x in xs] + [F.diff(b.fiber_coord)]
    rep.add("d(lambda_e^* sigma) lies in K_e", model.in_reduced_level([c.constant_term() if c.is_constant() else 0
                                                                        for c in cov]))
    if e != 0:
        # Phi_e(z - r/e) = Phi_e(z) + r, where adding r in Z_e lowers s_e by r
        for s0, r0 in ((Fraction(0), Fraction(1)), (Fraction(3, 2), Fraction(-2, 7))):
            lhs = lambda_e(e, s0 + r0 / e, 0)
            rhs = lambda_e(e, s0, 0) - r0
            rep.add(f"Phi_e scaling at s={s0}, r={r0}", lhs == rhs, witness=f"{lhs} vs {rhs}")
    return rep


def gauge_phase_check(cs: ChargedSetup, f: Poly) -> CheckReport:
    """alpha -> alpha + df shifts momenta by df and preserves omega."""
    rep = CheckReport("gauge change on the phase bundle")
    b = cs.bundle
    gc = GaugeChange(b, f)
    model = charged_phase_model(cs)
    m = gc.phase_map()
    pulled = pullback_form(model.omega, m, model.chart)
    rep.add("omega preserved", pulled == model.omega, witness=str(pulled))
    shifted = gc.one_form(cs.potential)
    diff = shifted - cs.potential
    grad = PolyTensor(b.base_coords, FORM, 1, {(i,): g for i, g in enumerate(f.on(b.base_coords).gradient())
                                                if not g.is_zero()})
    rep.add("potential shifts by df", diff == grad, witness=str(diff))
    ch = model.chart
    ok = all(m[p] - Poly.var(ch, p) == f.on(b.base_coords).diff(x).on(ch)
             for x, p in zip(b.base_coords, b.momentum_names()))
    rep.add("momenta shift by df", ok)
    return rep


def charged_lagrangian(cs: ChargedSetup, x: Sequence[float], v: Sequence[float]) -> float:
    """L_e(v) = <alpha_e, v> + m sqrt(g(v, v)) on g(v, v) > 0."""
    if cs.metric is None:
        raise MechanicsError("the lagrangian needs a space-time metric")
    g = [[float(c) for c in row] for row in cs.metric]
    gvv = sum(g[i][j] * v[i] * v[j] for i in range(len(v)) for j in range(len(v)))
    if not gvv > 0:
        raise MechanicsError(f"velocity outside the domain g(v,v) > 0 (g(v,v) = {gvv})")
    model = charged_phase_model(cs)
    alpha = [c.compile_float()(x) for c in model.potential_e.coeffs]
    return sum(a * vi for a, vi in zip(alpha, v)) + float(cs.mass) * math.sqrt(gvv)


def lagrangian_gauge_defect(cs: ChargedSetup, f: Poly, x: Sequence[float], v: Sequence[float]) -> float:
    """L_e after alpha -> alpha + df, minus L_e, plus e df(v); zero up to rounding."""
    shifted = ChargedSetup(cs.charge, GaugeChange(cs.bundle, f).one_form(cs.potential), cs.mass, cs.metric)
    df = [c.compile_float()(x) for c in cs.bundle.base_poly(f).gradient()]
    return charged_lagrangian(shifted, x, v) - charged_lagrangian(cs, x, v) + float(cs.charge) * sum(
        a * b for a, b in zip(df, v))


# ---------------------------------------------------------------------------
# numeric integration


@dataclass(frozen=True)
class PhaseState:
    chart: tuple
    coords: tuple

    def __post_init__(self):
        cs = tuple(float(c) for c in self.coords)
        if len(cs) != len(self.chart):
            raise MechanicsError("state length does not match its chart")
        if not all(math.isfinite(c) for c in cs):
            raise MechanicsError("non-finite state")
        object.__setattr__(self, "chart", tuple(self.chart))
        object.__setattr__(self, "coords", cs)


@dataclass
class Trajectory:
    chart: tuple
    dt: float
    states: list = field(default_factory=list)

    def times(self) -> list:
        return [i * self.dt for i in range(len(self.states))]

    @property
    def final(self) -> tuple:
        return self.states[-1]

    def write_csv(self, path_or_file) -> None:
        own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
        fh = open(path_or_file, "w", newline="") if own else path_or_file
        try:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("t",) + self.chart)
            for t, st in zip(self.times(), self.states):
                w.writerow([repr(t)] + [repr(c) for c in st])
        finally:
            if own:
                fh.close()


def compile_field(V: PolyTensor) -> Callable[[Sequence[float]], list]:
    if V.kind != MULTIVECTOR or V.degree != 1:
        raise MechanicsError("integration needs a vector field")
    fs = [V.component((i,)).compile_float() for i in range(len(V.chart))]

    def f(x):
        return [c(x) for c in fs]

    return f


def integrate(field, x0: PhaseState, dt: float, steps: int) -> Trajectory:
    """Classical fixed-step fourth order Runge-Kutta."""
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 1:
        raise MechanicsError(f"steps must be a positive integer, got {steps!r}")
    dt = float(dt)
    if not (math.isfinite(dt) and dt > 0):
        raise MechanicsError(f"dt must be positive and finite, got {dt!r}")
    if isinstance(field, PolyTensor):
        if field.chart != x0.chart:
            raise MechanicsError(f"field chart {field.chart} differs from state chart {x0.chart}")
        f = compile_field(field)
    else:
        f = field
    y = list(x0.coords)
    traj = Trajectory(x0.chart, dt, [tuple(y)])
    n = len(y)
    for step in range(steps):
        try:
            k1 = f(y)
            k2 = f([y[i] + dt / 2 * k1[i] for i in range(n)])
            k3 = f([y[i] + dt / 2 * k2[i] for i in range(n)])
            k4 = f([y[i] + dt * k3[i] for i in range(n)])
            y = [y[i] + dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) for i in range(n)]
        except OverflowError:
            y = [math.inf]
        if not all(math.isfinite(c) for c in y):
            raise MechanicsError(f"non-finite state at step {step + 1}")
        traj.states.append(tuple(y))
    return traj


def free_particle_closed_form(st: NewtonSpacetime, x0: Sequence, p: Sequence, t: float) -> list:
    """x(t) = x0 + (g^-1 p/m + u) t, p constant, in adapted coordinates."""
    ginv = st.g_inverse()
    m = float(st.mass)
    vel = [1.0] + [sum(float(ginv[i][j]) * float(p[j]) for j in range(len(p))) / m for i in range(len(p))]
    return [float(a) + v * t for a, v in zip(x0, vel)] + [float(c) for c in p]


def relative_error(a: Sequence[float], b: Sequence[float]) -> float:
    num = math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))
    den = math.sqrt(sum(y * y for y in b)) or 1.0
    return num / den


__all__ = [n for n in dir() if not n.startswith("_")]
