import csv
import io
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from avgeo import mechanics as M
from avgeo.avbundle import AVChart, AffOneForm
from avgeo.exactpoly import Poly, PolyTensor, pushforward_multivector

from .strategies import polys, rationals

settings.register_profile("mechanics", deadline=None, max_examples=25)
settings.load_profile("mechanics")

DIAG = ((1, 0, 0), (0, 2, 0), (0, 0, 3))
ST = M.standard_spacetime(DIAG, 2)
XS = ST.chart()

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=4)
spatial = st.tuples(small_q, small_q, small_q)
frames = spatial.map(lambda d: (Fraction(1),) + d)
potentials = polys(XS, max_deg=2, max_terms=3)
spacetimes = st.builds(M.standard_spacetime,
                       st.sampled_from([None, DIAG, ((2, 1, 0), (1, 2, 0), (0, 0, 1))]),
                       st.sampled_from([1, 2, Fraction(1, 3)]))


@given(spacetimes, potentials)
def test_equations_of_motion(stime, phi):
    V = M.newton_dynamics(stime, M.newton_hamiltonian(stime, phi))
    assert V == M.newton_expected(stime, phi)


@given(potentials)
def test_wrong_hamiltonian_sign_is_detected(phi):
    h = M.newton_hamiltonian(ST, phi)
    assert M.newton_dynamics(ST, -h) != M.newton_expected(ST, phi)


@given(potentials, spatial)
def test_frame_independence(phi, d):
    rep = M.frame_independence(ST, phi, d)
    assert rep.passed, rep.failures()


def test_scalar_transformation_breaks_frame_independence():
    # treating h as an ordinary function instead of a section value
    phi = Poly.var(XS, "x1") ** 2
    d = (1, 0, 0)
    h = M.newton_hamiltonian(ST, phi)
    ch = ST.phase_chart()
    fwd, inv = M.frame_coordinate_change(ST, d)
    naive = h.substitute(inv, ch)
    pushed = pushforward_multivector(M.newton_dynamics(ST, h), fwd, inv, ch)
    assert pushed != M.newton_dynamics(ST, naive)
    assert pushed == M.newton_dynamics(ST, M.transform_hamiltonian(ST, h, d))


@given(frames, frames, frames, spatial, small_q)
def test_momentum_frame_changes_compose(u, u2, u3, p, s):
    fm = M.FramedMomentum(u, p, s)
    assert M.frame_change(ST, M.frame_change(ST, fm, u2), u3) == M.frame_change(ST, fm, u3)
    assert M.frame_change(ST, fm, u) == fm
    assert M.momenta_equivalent(ST, fm, M.frame_change(ST, fm, u2))


@given(frames, frames, frames, spatial, small_q, small_q)
def test_pairing_is_frame_independent(u, u2, v, p, s, r):
    fm = M.FramedMomentum(u, p, s)
    lhs = M.momentum_pairing(ST, fm, v, r)
    rhs = M.momentum_pairing(ST, M.frame_change(ST, fm, u2), v, M.velocity_point_change(ST, u, u2, v, r))
    assert lhs == rhs


def test_frame_change_example():
    stime = M.standard_spacetime(mass=1, space_dim=1)
    fm = M.FramedMomentum((1, 0), (2,), 0)
    out = M.frame_change(stime, fm, (1, -1))  # d = u - u' = e1
    assert out.p == (3,)
    assert out.s == Fraction(-5, 2)


@pytest.mark.parametrize("u2", [(1, 1, 0, 0), (1, Fraction(1, 2), -1, Fraction(3, 4))])
def test_bracket_independent_of_representative(u2):
    assert M.newton_well_defined(ST, u2).passed


def test_newton_affgebroid_report():
    rep = M.newton_report(ST)
    assert rep.passed, rep.failures()


@given(st.lists(polys(XS, max_deg=2, max_terms=2), min_size=8, max_size=8))
def test_bracket_against_coordinate_display(ps):
    ours, theirs = M.coordinate_bracket_check(ST, ps[0:3], ps[3], ps[4:7], ps[7])
    assert ours == theirs


@pytest.mark.parametrize("n", [1, 2])
def test_timedep_routes_agree(n):
    ch = M.timedep_chart(n)

    @given(polys(ch, max_deg=3, max_terms=4))
    def inner(H):
        a = M.timedep_dynamics(H)
        assert a == M.timedep_cotangent_route(H)
        assert a == M.timedep_direct(H)
    inner()


def test_timedep_harmonic_oscillator():
    ch = M.timedep_chart(1)
    q, p, t = (Poly.var(ch, v) for v in ch)
    V = M.timedep_dynamics((p * p + q * q * t) * Fraction(1, 2))
    expected = PolyTensor.vector_field(ch, {"q": p, "p": -q * t, "t": Poly.const(ch, 1)})
    assert V == expected


def test_invalid_spacetimes():
    with pytest.raises(M.MechanicsError):
        M.standard_spacetime(((1, 0), (0, -1)), space_dim=2)
    with pytest.raises(M.MechanicsError):
        M.standard_spacetime(((1, 2), (0, 1)), space_dim=2)
    with pytest.raises(M.MechanicsError):
        M.standard_spacetime(mass=0)
    with pytest.raises(M.MechanicsError):
        M.frame_change(ST, M.FramedMomentum((2, 0, 0, 0), (0, 0, 0), 0), (1, 0, 0, 0))


def test_potential_must_not_depend_on_momenta():
    with pytest.raises(ValueError):
        M.newton_expected(ST, Poly.var(ST.phase_chart(), "p1"))


def test_symbolic_parameter_in_potential():
    chart = XS + ("k",)
    k = Poly.var(chart, "k")
    phi = sum((Poly.var(chart, x) ** 2 for x in XS[1:]), Poly.zero(chart)) * k * Fraction(1, 2)
    V = M.newton_dynamics(ST, M.newton_hamiltonian(ST, phi))
    assert V == M.newton_expected(ST, phi)
    assert "k" in V.chart


# charged particle

B = AVChart(("x0", "x1", "x2", "x3"))
BC = B.base_coords
MINK = ((1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0), (0, 0, 0, -1))


def _setup(e=3):
    v = lambda n: Poly.var(BC, n)  # noqa: E731
    A = AffOneForm(B, (v("x1"), Poly.zero(BC), v("x0") * v("x2"), Poly.const(BC, 2)))
    return M.ChargedSetup(Fraction(e), A, Fraction(2), MINK)


@pytest.mark.parametrize("e", [0, 3, Fraction(-1, 2)])
def test_charged_reduction(e):
    rep = M.charged_reduction_check(_setup(e))
    assert rep.passed, rep.failures()


@given(polys(BC, max_deg=2, max_terms=3))
def test_gauge_change_on_phase_bundle(f):
    assert M.gauge_phase_check(_setup(), f).passed


@given(polys(BC, max_deg=2, max_terms=3), st.tuples(*[st.floats(-2, 2)] * 4))
def test_lagrangian_gauge_shift(f, x):
    v = [2.0, 0.5, 0.2, 0.1]
    assert abs(M.lagrangian_gauge_defect(_setup(), f, x, v)) < 1e-9 * (1 + sum(map(abs, x))) ** 4


@given(rationals, rationals, rationals)
def test_lambda_e_orbits(e, s, t):
    # (s, r) -> (s - t, r + t e) preserves s_e
    assert M.lambda_e(e, s - t, t * e) == M.lambda_e(e, s, 0)


@pytest.mark.parametrize("v", [[1, 1, 0, 0], [0, 1, 0, 0], [1, 2, 0, 0]])
def test_lagrangian_domain(v):
    with pytest.raises(M.MechanicsError, match="domain"):
        M.charged_lagrangian(_setup(), [0, 0, 0, 0], v)


def test_lagrangian_needs_metric():
    cs = M.ChargedSetup(1, _setup().potential, 1)
    with pytest.raises(M.MechanicsError):
        M.charged_lagrangian(cs, [0, 0, 0, 0], [1, 0, 0, 0])


# integration

def test_free_particle_against_closed_form():
    stime = M.standard_spacetime(DIAG, 2)
    V = M.newton_dynamics(stime, M.newton_hamiltonian(stime))
    x0, p = [0.25, 1.0, -2.0, 0.5], [1.5, -0.5, 2.0]
    tr = M.integrate(V, M.PhaseState(stime.phase_chart(), x0 + p), 1e-3, 1000)
    assert M.relative_error(tr.final, M.free_particle_closed_form(stime, x0, p, 1.0)) < 1e-10


def test_harmonic_oscillator_energy():
    stime = M.standard_spacetime(space_dim=1)
    phi = Poly.var(stime.chart(), "x1") ** 2 * Fraction(1, 2)
    V = M.newton_dynamics(stime, M.newton_hamiltonian(stime, phi))
    tr = M.integrate(V, M.PhaseState(stime.phase_chart(), (0, 1, 0)), 1e-2, 628)
    t, x, p = tr.final
    assert abs(x - math.cos(t)) < 1e-6 and abs(p + math.sin(t)) < 1e-6


def test_csv_layout():
    stime = M.standard_spacetime(space_dim=1)
    V = M.newton_dynamics(stime, M.newton_hamiltonian(stime))
    tr = M.integrate(V, M.PhaseState(stime.phase_chart(), (0, 0, 1)), 0.5, 2)
    buf = io.StringIO()
    tr.write_csv(buf)
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert rows[0] == ["t", "x0", "x1", "p1"]
    assert [float(c) for c in rows[-1]] == [1.0, 1.0, 1.0, 1.0]
    assert len(rows) == 4


@pytest.mark.parametrize("dt,steps", [(0, 10), (-1e-3, 10), (float("nan"), 1), (1e-3, 0), (1e-3, 2.5), (1e-3, True)])
def test_integrator_rejects_bad_parameters(dt, steps):
    stime = M.standard_spacetime(space_dim=1)
    V = M.newton_dynamics(stime, M.newton_hamiltonian(stime))
    with pytest.raises(M.MechanicsError):
        M.integrate(V, M.PhaseState(stime.phase_chart(), (0, 0, 1)), dt, steps)


def test_integrator_rejects_chart_mismatch_and_blow_up():
    stime = M.standard_spacetime(space_dim=1)
    V = M.newton_dynamics(stime, M.newton_hamiltonian(stime))
    with pytest.raises(M.MechanicsError):
        M.integrate(V, M.PhaseState(("a", "b", "c"), (0, 0, 1)), 1e-3, 1)
    with pytest.raises(M.MechanicsError):
        M.PhaseState(("a",), (0, 1))
    with pytest.raises(M.MechanicsError):
        M.integrate(lambda y: [y[0] ** 2], M.PhaseState(("a",), (1e200,)), 1.0, 5)
