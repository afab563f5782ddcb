import pytest
from hypothesis import given, settings, strategies as st

from avgeo import algebroids as A
from avgeo.avbundle import AVChart, f_map, section
from avgeo.exactpoly import Poly

from .strategies import polys, vector_fields

settings.register_profile("algebroids", deadline=None, max_examples=30)
settings.load_profile("algebroids")

B = AVChart(("x", "y"))
BASE = B.base_coords


def rz(alpha=None, gamma=None):
    """RZ sections with optional pinned alpha / gamma."""
    comp = polys(BASE, max_deg=2, max_terms=3)
    return st.builds(
        lambda X, a, b, g: A.RZSection.make(BASE, X, a if alpha is None else alpha,
                                            b, g if gamma is None else gamma),
        vector_fields(BASE, max_deg=2), comp, comp, comp)


@given(rz(), rz())
def test_bracket_matches_operator_commutator(R, S):
    assert A.rz_bracket(R, S) == A.commutator_oracle(B, R, S)


@given(rz(), rz(), rz())
def test_bracket_jacobi(R, S, T):
    assert A.rz_jacobiator(R, S, T).is_zero()


@given(rz(), rz())
def test_bracket_skew(R, S):
    assert (A.rz_bracket(R, S) + A.rz_bracket(S, R)).is_zero()


@given(rz(), polys(BASE, max_deg=2))
def test_operator_round_trip(R, f):
    assert A.operator_from_action(B, lambda F: A.operator_apply(B, R, F)) == R


def test_operator_from_action_rejects_second_order():
    with pytest.raises(A.MembershipError):
        A.operator_from_action(B, lambda F: F.diff("s").diff("s") + F.diff("x").diff("s"))


def test_distinguished_sections():
    assert A.subbundle_membership(A.x_rz(BASE)) >= {A.TTILDE, A.LBREVE, A.ZDAG}
    assert A.subbundle_membership(A.i_rz(BASE)) == frozenset({A.LBAR})
    assert A.rz_bracket(A.x_rz(BASE), A.i_rz(BASE)).is_zero()


@pytest.mark.parametrize("tag,alpha,gamma", [
    (A.TTILDE, 0, 0), (A.TBAR, -1, 0), (A.LBREVE, None, 0),
])
def test_closure_fixed_gamma(tag, alpha, gamma):
    @given(st.lists(rz(alpha, gamma), min_size=2, max_size=3))
    def inner(gens):
        assert A.closure_check(tag, gens).passed
    inner()


@given(st.lists(polys(BASE, max_deg=2, max_terms=3), min_size=2, max_size=3),
       st.lists(st.tuples(vector_fields(BASE), polys(BASE, max_deg=2, max_terms=3)), min_size=3, max_size=3))
def test_closure_ltilde_and_lbar(alphas, rest):
    ltil = [A.RZSection.make(BASE, X, a, b, a) for a, (X, b) in zip(alphas, rest)]
    lbar = [A.RZSection.make(BASE, X, a, b, a + 1) for a, (X, b) in zip(alphas, rest)]
    assert A.closure_check(A.LTILDE, ltil).passed
    assert A.closure_check(A.LBAR, lbar).passed


def test_closure_flags_non_members():
    rep = A.closure_check(A.TBAR, [A.x_rz(BASE), A.i_rz(BASE)])
    assert not rep.passed


@given(rz(alpha=-1, gamma=0), polys(BASE, max_deg=2))
def test_affine_action_on_sections(R, sig):
    sig = section(B, sig)
    out = A.act_on_section(R, sig, A.TBAR)
    assert out.value == A.act_coordinates(R, sig)


@given(rz(gamma=0, alpha=0), polys(BASE, max_deg=2))
def test_vector_action_on_sections(R, sig):
    sig = section(B, sig)
    assert A.act_on_section(R, sig, A.TTILDE) == A.act_coordinates(R, sig)


def test_action_requires_membership():
    with pytest.raises(A.MembershipError):
        A.act_on_section(A.i_rz(BASE), section(B, Poly.var(BASE, "x")), A.TTILDE)
    with pytest.raises(A.MembershipError):
        A.act_on_section(A.x_rz(BASE), section(B, Poly.var(BASE, "x")), A.ZDAG)


@given(polys(B.chart, max_deg=1, max_terms=3), polys(BASE, max_deg=2))
def test_hamiltonian_operator_is_in_ltilde(phi, g):
    a, b = phi.diff("s").on(BASE), (phi - B.s * B.lift(phi.diff("s").on(BASE))).on(BASE)
    phi = B.lift(a) * B.s + B.lift(b)
    D = A.hamiltonian_operator(B, phi)
    assert A.LTILDE in A.subbundle_membership(D)
    assert A.ZDAG in A.subbundle_membership(A.zdag_section(B, phi))
    F = f_map(section(B, g))
    assert A.operator_apply(B, D, F) == A.operator_apply(B, A.zdag_section(B, phi), F) + B.lift(a) * F


@pytest.mark.parametrize("make", [
    A.canonical_z_affgebroid, A.tbar_affgebroid, A.lbar_affgebroid, A.ttilde_affine,
])
def test_examples_are_affgebroids(make):
    rep = A.affgebroid_axioms(make(BASE))
    assert rep.passed, rep.failures()


def test_perturbed_structure_fails_jacobi():
    rep = A.affgebroid_axioms(A.perturbed_affgebroid(BASE))
    assert not rep.passed
    assert any("jacobi" in c.id.lower() for c in rep.failures())


@pytest.mark.parametrize("make", [A.tbar_affgebroid, A.lbar_affgebroid, A.ttilde_affine])
def test_hull_agrees_with_rz(make):
    assert A.hull_matches_rz(make(BASE)).passed


def test_hull_subbundles():
    assert A.hull_in_subbundle(A.tbar_affgebroid(BASE), A.TBAR)
    assert A.hull_in_subbundle(A.lbar_affgebroid(BASE), A.LBAR)


def test_centrality_of_special_point():
    from avgeo.mechanics import newton_affgebroid, standard_spacetime
    # [v0, b] = c_b v0 on the canonical example, so it is not central there
    assert not A.is_central(A.canonical_z_affgebroid(BASE))
    assert A.is_central(newton_affgebroid(standard_spacetime(space_dim=1)))


def test_chart_mismatch():
    with pytest.raises(ValueError):
        A.rz_bracket(A.x_rz(BASE), A.x_rz(("u",)))
