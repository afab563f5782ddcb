"""Verification suites, one function per acceptance criterion.

Each returns a CheckReport.  ``avgeo check --suite NAME`` runs the
criteria of a module; the acceptance tests call the same functions.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import combinations, product

from . import affspace as A
from . import algebroids as G
from . import avbrackets as B
from . import avbundle as Z
from . import mechanics as M
from .checks import CheckReport
from .exactpoly import MULTIVECTOR, Poly, PolyTensor, monomials, schouten_nijenhuis, wedge

SEED = 20240607


def random_poly(rng: random.Random, chart, degree: int = 3, density: float = 0.6) -> Poly:
    out = Poly.zero(chart)
    for m in monomials(chart, degree):
        if rng.random() < density:
            out = out + m * Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return out


# ---------------------------------------------------------------------------
# affspace


def duality_suite(seed: int = SEED) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("duality")
    for dim in range(1, 5):
        a = A.random_affine(rng, dim, special=True, label="A")
        for mode, tag in (("vector", "(A^dag)^ddag"), ("special", "(A^#)^#")):
            w = A.double_dual_witness(a, mode)
            rep.add(f"{tag} ~ A, dim {dim}", w.check(), witness=w.summary())
    pairs = [(A.random_affine(rng, rng.randint(1, 2), special=True, label="A1"),
              A.random_affine(rng, rng.randint(1, 2), special=True, label="A2")) for _ in range(2)]
    for name in A.THEOREMS:
        ok, bad = True, None
        for a, b in pairs:
            ops = (a,) if name in ("specialization_dual", "specialization_hull") else (a, b)
            try:
                A.verify_duality_theorem(name, *ops)
            except A.AffSpaceError as exc:
                ok, bad = False, str(exc)
                break
        rep.add(f"theorem {name}", ok, witness=bad)
    return rep


def dimension_suite(seed: int = SEED) -> CheckReport:
    rep = CheckReport("dimension formulas")
    rng = random.Random(seed)
    for k in (1, 2, 3):
        for dims in product((1, 2), repeat=k):
            ops = [A.random_affine(rng, d, special=True, label=f"A{i}") for i, d in enumerate(dims)]
            at = A.a_tensor(*ops).space.dim if k > 1 else ops[0].dim
            expect = 1
            for d in dims:
                expect *= d + 1
            rep.add(f"dim a-tensor{dims} = {expect - 1}", at == expect - 1, witness=at, value=at)
            if k == 1:
                st = ops[0].dim
            else:
                sp = ops[0]
                for o in ops[1:]:
                    sp = A.sa_tensor(sp, o).space
                st = sp.dim
            prod_d = 1
            for d in dims:
                prod_d *= d
            rep.add(f"dim sa-tensor{dims} = {prod_d}", st == prod_d, witness=st, value=st)
    return rep


# ---------------------------------------------------------------------------
# avbundle


def av_identities_suite(seed: int = SEED, instances: int = 50) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("AV-bundle identities")
    bad = {"jbdu": None, "pairing": None, "point": None, "affine": None}
    for i in range(instances):
        b = Z.AVChart(("x", "y")[: 1 + i % 2])
        base = b.base_coords
        s1, s2 = Z.section(b, random_poly(rng, base)), Z.section(b, random_poly(rng, base))
        lhs = Z.vertical_jacobi(b, Z.f_map(s1), Z.f_map(s2))
        if lhs != b.lift(s1 - s2) and bad["jbdu"] is None:
            bad["jbdu"] = f"{s1}, {s2}: {lhs}"
        al, be, c, h = (random_poly(rng, base) for _ in range(4))
        phi = Z.affine_function(b, al, be)
        pr = Z.hull_pairing(b, phi, c, h)
        br = Z.vertical_jacobi(b, phi, Z.hull_function(b, c, h))
        if b.lift(pr) != br and bad["pairing"] is None:
            bad["pairing"] = f"phi={phi}, u=({c},{h}): {pr} vs {br}"
        at_point = phi.substitute({b.fiber_coord: b.lift(s1.value), **{x: Poly.var(b.chart, x) for x in base}},
                                  b.chart)
        if b.lift(Z.hull_pairing(b, phi, 1, s1.value)) != at_point and bad["point"] is None:
            bad["point"] = f"phi={phi}, sigma={s1}"
        al2, be2 = random_poly(rng, base), random_poly(rng, base)
        v = Z.vertical_jacobi(b, phi, Z.affine_function(b, al2, be2))
        if v != b.lift(al * be2 - al2 * be) and bad["affine"] is None:
            bad["affine"] = f"{phi}, {al2}s+{be2}: {v}"
    rep.add(f"{{F_sigma, F_sigma'}} = sigma - sigma' ({instances} instances)", bad["jbdu"] is None, bad["jbdu"])
    rep.add("hull pairing equals {phi, F_u}", bad["pairing"] is None, bad["pairing"])
    rep.add("pairing with a point evaluates phi on the section", bad["point"] is None, bad["point"])
    rep.add("{a s + b, a' s + b'} = a b' - a' b", bad["affine"] is None, bad["affine"])
    return rep


def contact_suite(seed: int = SEED, pairs: int = 50) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("phase and contact")
    for n in (1, 2, 3):
        b = Z.AVChart(tuple(f"x{i}" for i in range(1, n + 1)))
        d_theta = Z.affine_differential(Z.liouville(b))
        rep.add(f"d theta = omega, base dim {n}", d_theta == Z.phase_symplectic(b), witness=d_theta)
    bad = None
    for _ in range(10):
        b = Z.AVChart(("x", "y"))
        a = Z.AffOneForm(b, tuple(random_poly(rng, b.base_coords) for _ in range(2)))
        dfct = Z.curvature_defect(a)
        if not dfct.is_zero():
            bad = f"alpha={a.coeffs}: {dfct}"
            break
    rep.add("d F_alpha = zeta^* d alpha", bad is None, witness=bad)
    b = Z.AVChart(("x", "y"))
    cs = Z.contact_structure(b)
    LL = schouten_nijenhuis(cs.Lambda, cs.Lambda)
    d = LL + wedge(cs.Gamma, cs.Lambda) * 2
    rep.add("[[Lambda, Lambda]] = -2 Gamma ^ Lambda", d.is_zero(), witness=d)
    GL = schouten_nijenhuis(cs.Gamma, cs.Lambda)
    rep.add("[[Gamma, Lambda]] = 0", GL.is_zero(), witness=GL)
    ch = cs.chart
    gens = [Poly.var(ch, x) for x in ch] + [Poly.var(ch, ch[0]) * Poly.var(ch, ch[-1])]
    bad = None
    for f, g, h in combinations(gens, 3):
        j = cs.bracket(f, cs.bracket(g, h)) + cs.bracket(g, cs.bracket(h, f)) + cs.bracket(h, cs.bracket(f, g))
        if not j.is_zero():
            bad = f"{f}, {g}, {h}: {j}"
            break
    rep.add("contact bracket satisfies Jacobi", bad is None, witness=bad)
    bad = None
    for _ in range(pairs):
        f, g = random_poly(rng, ch, 2, 0.3), random_poly(rng, ch, 2, 0.3)
        if Z.cjb(b, f, g) != cs.bracket(f, g):
            bad = f"{f}, {g}"
            break
    rep.add(f"termwise contact bracket equals the tensor bracket ({pairs} pairs)", bad is None, witness=bad)
    return rep


# ---------------------------------------------------------------------------
# algebroids


def _random_rz(rng, chart, deg=2) -> G.RZSection:
    X = PolyTensor(chart, MULTIVECTOR, 1, {(i,): random_poly(rng, chart, deg, 0.4) for i in range(len(chart))})
    return G.RZSection.make(chart, X, *(random_poly(rng, chart, deg, 0.4) for _ in range(3)))


def algebroid_suite(seed: int = SEED) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("RZ algebroid")
    b = Z.AVChart(("x", "y"))
    ch = b.base_coords
    basis = []
    for m in monomials(ch, 1):
        for x in ch:
            basis.append(G.RZSection.make(ch, PolyTensor.partial(ch, x) * m))
        basis += [G.RZSection.make(ch, alpha=m), G.RZSection.make(ch, beta=m), G.RZSection.make(ch, gamma=m)]
    bad = None
    for R, S in combinations(basis, 2):
        if G.rz_bracket(R, S) != G.commutator_oracle(b, R, S):
            bad = f"{R}, {S}"
            break
    rep.add(f"bracket equals operator commutator on {len(basis)} basis sections", bad is None, witness=bad)
    bad = None
    for _ in range(20):
        R, S, T = (_random_rz(rng, ch) for _ in range(3))
        J = G.rz_jacobiator(R, S, T)
        if not J.is_zero():
            bad = f"{R}, {S}, {T}: {J}"
            break
    rep.add("Jacobi identity on 20 random triples", bad is None, witness=bad)
    bad = None
    for _ in range(20):
        R = _random_rz(rng, ch)
        lhs = G.rz_bracket(R, G.x_rz(ch))
        if lhs != G.x_rz(ch) * G.phi0(R):
            bad = f"{R}: {lhs}"
            break
    rep.add("[R, X_RZ] = phi0(R) X_RZ", bad is None, witness=bad)
    x, y = Poly.var(ch, "x"), Poly.var(ch, "y")
    dx, dy = PolyTensor.partial(ch, "x"), PolyTensor.partial(ch, "y")
    gens = {
        G.TTILDE: [G.RZSection.make(ch, dx * y, 0, x), G.RZSection.make(ch, dy, 0, x * y), G.x_rz(ch)],
        G.LBREVE: [G.RZSection.make(ch, dx, y, 1), G.RZSection.make(ch, dy * x, x * x, y)],
        G.LTILDE: [G.RZSection.make(ch, dx, y, 1, y), G.RZSection.make(ch, dy * x, x, 0, x), G.x_rz(ch)],
        G.TBAR: [G.RZSection.make(ch, dx, -1, y), G.RZSection.make(ch, dy * y, -1, x)],
        G.LBAR: [G.RZSection.make(ch, dx, y, 0, y + 1), G.RZSection.make(ch, dy, x, 1, x + 1)],
        G.ZDAG: [G.RZSection.make(ch, None, x, y), G.RZSection.make(ch, None, y * y, 1)],
    }
    for tag, gs in gens.items():
        c = G.closure_check(tag, gs)
        rep.add(f"membership closed under brackets: {tag}", c.passed,
                witness="; ".join(f"{f.id}: {f.witness}" for f in c.failures()))
    return rep


# ---------------------------------------------------------------------------
# avbrackets


def correspondence_suite() -> CheckReport:
    rep = CheckReport("affgebroid correspondence")
    specs = [G.canonical_z_affgebroid(("x",)), G.ttilde_affine(("x",)),
             M.newton_affgebroid(M.standard_spacetime(mass=1, space_dim=1))]
    for spec in specs:
        br = B.from_affgebroid(spec)
        rep.extend(B.c3_report(br), prefix=f"{spec.name}: ")
    newton = M.newton_affgebroid(M.standard_spacetime(mass=1, space_dim=1))
    nb = B.from_affgebroid(newton)
    rep.add("newton: w0 central and structure tagged poisson", G.is_central(newton) and nb.sharp.kind == B.POISSON,
            witness=nb.sharp.kind)
    ctrl = G.canonical_z_affgebroid(("x",))
    cb = B.from_affgebroid(ctrl)
    rep.add("non-central control tagged jacobi", not G.is_central(ctrl) and cb.sharp.kind == B.JACOBI,
            witness=cb.sharp.kind)
    return rep


def canonical_examples() -> dict:
    b = Z.AVChart(("q", "p"))
    ch = b.base_coords
    symp = B.AffStructure.make(b, wedge(PolyTensor.partial(ch, "q"), PolyTensor.partial(ch, "p")))
    c = Z.AVChart(("x", "p"))
    cc = c.base_coords
    contact = B.AffStructure.make(c, wedge(PolyTensor.partial(cc, "p"), PolyTensor.partial(cc, "x")),
                                  PolyTensor.partial(cc, "p") * Poly.var(cc, "p"), f0=-1)
    e = Z.AVChart(("x", "y"))
    ex6 = B.AffStructure.make(e, f0=-1, kind=B.JACOBI)
    return {"symplectic": symp, "contact": contact, "pure first-order jacobi": ex6}


def canonical_suite() -> CheckReport:
    rep = CheckReport("canonical structures")
    for name, S in canonical_examples().items():
        rep.extend(B.canonicality_check(S), prefix=f"{name}: ")
        rep.extend(B.squared_zero_report(S), prefix=f"{name}: ")
    b = Z.AVChart(("q", "p"))
    for kind in (B.POISSON, B.JACOBI):
        ctrl = B.non_canonical_control(b, kind)
        z = B.squared_zero_report(ctrl)
        for c in z.checks:
            rep.add(f"control ({kind}) violates {c.id}", not c.ok, witness="control passed unexpectedly")
    rep.extend(B.lie_square_identity(B.non_canonical_control(b)), prefix="control: ")
    return rep


# ---------------------------------------------------------------------------
# mechanics


def mechanics_suite(seed: int = SEED) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport("mechanics")
    diag = ((1, 0, 0), (0, 2, 0), (0, 0, 3))
    for gname, g in (("I", None), ("diag(1,2,3)", diag)):
        for m in (1, 2):
            st = M.standard_spacetime(g, m)
            xs = st.chart()
            phi = Poly.zero(xs)
            for i in range(1, 4):
                phi = phi + Poly.var(xs, xs[i]) ** 2 * Fraction(1, 2)
            phi = phi + Poly.var(xs, "x0") * Poly.var(xs, "x1")
            V = M.newton_dynamics(st, M.newton_hamiltonian(st, phi))
            E = M.newton_expected(st, phi)
            rep.add(f"equations of motion, g={gname}, m={m}", V == E, witness=f"{V} vs {E}")
    st = M.standard_spacetime(diag, 2)
    xs = st.chart()
    phi = random_poly(rng, xs, 2, 0.4)
    for _ in range(5):
        d = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(3)]
        rep.extend(M.frame_independence(st, phi, d))
    ch = M.timedep_chart(1)
    bad = None
    for i in range(10):
        H = random_poly(rng, ch, 3, 0.5)
        a, c, d = M.timedep_dynamics(H), M.timedep_cotangent_route(H), M.timedep_direct(H)
        if not (a == c == d):
            bad = f"H={H}: {a} | {c} | {d}"
            break
    rep.add("time-dependent field: aff-Poisson route equals X_H + d/dt (10 hamiltonians)", bad is None,
            witness=bad)
    st = M.standard_spacetime(mass=2)
    V = M.newton_dynamics(st, M.newton_hamiltonian(st))
    x0, p = [0.25, 1.0, -2.0, 0.5], [1.5, -0.5, 2.0]
    tr = M.integrate(V, M.PhaseState(st.phase_chart(), x0 + p), 1e-3, 1000)
    err = M.relative_error(tr.final, M.free_particle_closed_form(st, x0, p, 1.0))
    rep.add("RK4 free particle, dt=1e-3, t=1: relative error < 1e-10", err < 1e-10, witness=f"{err:.3e}",
            value=f"{err:.1e}")
    return rep


CRITERIA = {
    1: ("duality", duality_suite),
    2: ("dimension formulas", dimension_suite),
    3: ("AV-bundle identities", av_identities_suite),
    4: ("phase and contact", contact_suite),
    5: ("algebroid", algebroid_suite),
    6: ("affgebroid correspondence", correspondence_suite),
    7: ("canonical structures", canonical_suite),
    8: ("mechanics", mechanics_suite),
}

SUITES = {
    "affspace": (1, 2),
    "avbundle": (3, 4),
    "algebroids": (5,),
    "avbrackets": (6, 7),
    "mechanics": (8,),
}


def run_criterion(n: int) -> CheckReport:
    name, fn = CRITERIA[n]
    t = time.perf_counter()
    rep = fn()
    ms = (time.perf_counter() - t) * 1000
    for c in rep.checks:
        c.ms = ms / max(1, len(rep.checks))
    return rep


def run_suite(name: str) -> CheckReport:
    if name == "all":
        nums = sorted(CRITERIA)
    elif name in SUITES:
        nums = SUITES[name]
    else:
        raise KeyError(f"unknown suite {name!r}; choose all or one of {', '.join(SUITES)}")
    out = CheckReport(name)
    for n in nums:
        out.extend(run_criterion(n), prefix=f"[{n}] ")
    return out


__all__ = ["CRITERIA", "SUITES", "run_criterion", "run_suite", "random_poly"]
