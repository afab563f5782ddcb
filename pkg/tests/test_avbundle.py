import pytest
from hypothesis import given, settings

from avgeo import avbundle as Z
from avgeo.exactpoly import Poly, PolyTensor, pullback_form, schouten_nijenhuis, wedge

from .strategies import polys

settings.register_profile("avbundle", deadline=None, max_examples=40)
settings.load_profile("avbundle")

B = Z.AVChart(("x", "y"))
BASE = B.base_coords
base_polys = polys(BASE, max_deg=3)


@given(base_polys, base_polys)
def test_vertical_bracket_of_sections(a, b):
    s1, s2 = Z.section(B, a), Z.section(B, b)
    assert Z.vertical_jacobi(B, Z.f_map(s1), Z.f_map(s2)) == B.lift(s1 - s2)


@given(base_polys, base_polys, base_polys, base_polys)
def test_affine_function_bracket(a, b, a2, b2):
    phi, psi = Z.affine_function(B, a, b), Z.affine_function(B, a2, b2)
    assert Z.vertical_jacobi(B, phi, psi) == B.lift(a * b2 - a2 * b)
    assert Z.vertical_jacobi(B, psi, phi) == -Z.vertical_jacobi(B, phi, psi)


@given(base_polys, base_polys, base_polys, base_polys, base_polys, base_polys)
def test_vertical_bracket_jacobi(a, b, c, d, e, f):
    u, v, w = (Z.affine_function(B, p, q) for p, q in ((a, b), (c, d), (e, f)))
    br = lambda p, q: Z.vertical_jacobi(B, p, q)  # noqa: E731
    assert (br(u, br(v, w)) + br(v, br(w, u)) + br(w, br(u, v))).is_zero()


@given(base_polys)
def test_section_function_round_trip(a):
    sig = Z.section(B, a)
    assert Z.section_of(B, Z.f_map(sig)) == sig
    assert Z.split_affine(B, Z.f_map(sig)) == (Poly.const(BASE, -1), a)


def test_section_of_rejects_wrong_normalization():
    with pytest.raises(Z.BundleError):
        Z.section_of(B, B.s * 2)


def test_split_affine_rejects_quadratic_fiber_dependence():
    with pytest.raises(Z.BundleError):
        Z.split_affine(B, B.s * B.s)


def test_base_poly_rejects_fiber_dependence():
    with pytest.raises(Z.BundleError):
        B.base_poly(B.s + 1)


def test_chart_validation():
    with pytest.raises(Z.BundleError):
        Z.AVChart(("x", "s"), "s")
    with pytest.raises(Z.BundleError):
        Z.AVChart(("x", "x"))


@given(base_polys, base_polys)
def test_gauge_change_is_consistent_on_sections_and_functions(a, g):
    sig = Z.section(B, a)
    gc = Z.GaugeChange(B, g)
    assert gc.function(Z.f_map(sig)) == Z.f_map(gc.section(sig))
    assert gc.compose(gc.inverse()).g.is_zero()
    assert Z.affine_differential(gc.section(sig)) == gc.one_form(Z.affine_differential(sig))


@given(base_polys, base_polys, base_polys)
def test_pairing_with_points(a, b, sig):
    phi = Z.affine_function(B, a, b)
    at = phi.substitute({"s": B.lift(sig)}, B.chart)
    assert B.lift(Z.hull_pairing(B, phi, 1, sig)) == at
    assert B.lift(Z.hull_pairing(B, phi, 0, sig)) == B.lift(a * sig)


@given(base_polys, base_polys)
def test_curvature_identity(a, b):
    alpha = Z.AffOneForm(B, (a, b))
    assert Z.curvature_defect(alpha).is_zero()


def test_affine_differential_of_a_form_is_closed_for_exact_sections():
    sig = Z.section(B, Poly.var(BASE, "x") ** 2 * Poly.var(BASE, "y"))
    assert Z.affine_differential(Z.affine_differential(sig)).is_zero()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_liouville_differential_is_symplectic(n):
    b = Z.AVChart(tuple(f"x{i}" for i in range(1, n + 1)))
    assert Z.affine_differential(Z.liouville(b)) == Z.phase_symplectic(b)
    assert Z.adjoint_symplectic(b) == -Z.phase_symplectic(b)


@given(base_polys)
def test_symplectic_form_is_gauge_invariant(g):
    gc = Z.GaugeChange(B, g)
    om = Z.phase_symplectic(B)
    assert pullback_form(om, gc.phase_map(), B.phase_chart()) == om


@given(base_polys)
def test_contact_structure_is_gauge_invariant(g):
    gc = Z.GaugeChange(B, g)
    cs = Z.contact_structure(B)
    assert Z.gauge_contact_form(cs.eta, gc) == cs.eta
    assert Z.gauge_contact_tensor(cs.Lambda, gc) == cs.Lambda
    assert Z.gauge_contact_tensor(cs.Gamma, gc) == cs.Gamma


def test_contact_pair_is_jacobi():
    cs = Z.contact_structure(B)
    L, G = cs.Lambda, cs.Gamma
    assert (schouten_nijenhuis(L, L) + wedge(G, L) * 2).is_zero()
    assert schouten_nijenhuis(G, L).is_zero()


@given(polys(B.contact_chart(), max_deg=2, max_terms=3), polys(B.contact_chart(), max_deg=2, max_terms=3))
def test_termwise_contact_bracket(f, g):
    cs = Z.contact_structure(B)
    assert Z.cjb(B, f, g) == cs.bracket(f, g)


@given(polys(B.contact_chart(), max_deg=1, max_terms=3), polys(B.contact_chart(), max_deg=1, max_terms=3),
       polys(B.contact_chart(), max_deg=1, max_terms=3))
def test_contact_bracket_jacobi(f, g, h):
    br = Z.contact_structure(B).bracket
    assert (br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))).is_zero()


def test_contact_chart_order():
    assert B.phase_chart() == ("x", "y", "p_x", "p_y")
    assert B.contact_chart() == ("x", "y", "p_x", "p_y", "s")


def test_fundamental_field_lowers_s():
    assert B.fundamental_field() == -PolyTensor.partial(B.chart, "s")
