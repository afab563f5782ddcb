import pytest
from hypothesis import given, settings, strategies as st

from avgeo import algebroids as A
from avgeo import avbrackets as B
from avgeo.avbundle import AVChart, section
from avgeo.exactpoly import Poly, PolyTensor, schouten_nijenhuis, wedge
from avgeo.suites import canonical_examples

from .strategies import multivectors, polys, vector_fields

settings.register_profile("avbrackets", deadline=None, max_examples=30)
settings.load_profile("avbrackets")

Z = AVChart(("x", "y", "z"))
BASE = Z.base_coords

small = polys(BASE, max_deg=2, max_terms=3)
poisson_data = st.builds(lambda L, X: B.AffStructure.make(Z, L, X),
                         multivectors(2, BASE, max_deg=1), vector_fields(BASE, max_deg=1))
jacobi_data = st.builds(lambda L, X, G, f: B.AffStructure.make(Z, L, X, G, f, kind=B.JACOBI),
                        multivectors(2, BASE, max_deg=1), vector_fields(BASE, max_deg=1),
                        vector_fields(BASE, max_deg=1), polys(BASE, max_deg=1, max_terms=2))
structures = st.one_of(poisson_data, jacobi_data)


@given(structures, small, small)
def test_bracket_is_skew(S, a, b):
    assert B.aff_bracket(S, a, b) == -B.aff_bracket(S, b, a)


@given(structures, small, small)
def test_bracket_via_invariant_tensors(S, a, b):
    pair = B.to_invariant_tensors(S)
    lhs = Z.lift(B.aff_bracket(S, a, b))
    assert B.tensor_bracket(pair, section(Z, a), section(Z, b)) == lhs


@given(structures, small, small)
def test_bracket_via_multisection(S, a, b):
    assert B.multisection_bracket(B.multisection(S), a, b) == B.aff_bracket(S, a, b)


@given(structures)
def test_invariant_tensor_round_trip(S):
    pair = B.to_invariant_tensors(S)
    assert all(d.is_zero() for d in B.invariance_defects(pair))
    assert B.from_invariant_tensors(pair, S.kind) == S


def test_non_invariant_pair_rejected():
    pair = B.to_invariant_tensors(B.AffStructure.make(Z))
    bad = B.InvariantTensorPair(Z, pair.Pi, PolyTensor.partial(Z.chart, "x") * Z.s)
    with pytest.raises(B.StructureError):
        B.from_invariant_tensors(bad)


@given(structures, small, small)
def test_vector_part_is_linear(S, a, f):
    g = B.bracket_vector_part(S, a, f)
    assert B.bracket_vector_part(S, a, f * 2) == g * 2


@given(poisson_data, small, small)
def test_hamiltonian_field_generates_bracket(S, a, b):
    X = B.hamiltonian_field(S, a)
    from avgeo.exactpoly import apply_vector
    assert apply_vector(X, b - a) == B.aff_bracket(S, a, b)


def test_hamiltonian_field_needs_poisson():
    S = B.AffStructure.make(Z, f0=1)
    with pytest.raises(B.StructureError):
        B.hamiltonian_field(S, Poly.var(BASE, "x"))


def test_structure_validation():
    with pytest.raises(B.StructureError):
        B.AffStructure.make(Z, f0=1, kind=B.POISSON)
    with pytest.raises(B.StructureError):
        B.AffStructure.make(Z, kind="symplectic")
    with pytest.raises(B.StructureError):
        B.AffStructure.make(Z, Lambda0=PolyTensor.partial(BASE, "x"))
    assert B.AffStructure.make(Z, f0=1).kind == B.JACOBI


@pytest.mark.parametrize("name", sorted(canonical_examples()))
def test_examples_are_canonical(name):
    S = canonical_examples()[name]
    assert B.is_canonical(S)
    assert B.canonicality_check(S).passed
    assert B.squared_zero_report(S).passed


def _component_conditions(S):
    c = [c for c in B.canonicality_check(S).checks if "multisection" not in c.id]
    return all(x.ok for x in c)


@given(st.one_of(structures, st.sampled_from(sorted(canonical_examples().values(), key=str))))
def test_multisection_criterion_matches_components(S):
    assert B.self_bracket(B.multisection(S)).is_zero() == _component_conditions(S)


@pytest.mark.parametrize("kind", [B.POISSON, B.JACOBI])
def test_control_is_rejected(kind):
    ctrl = B.non_canonical_control(AVChart(("q", "p")), kind)
    assert not B.is_canonical(ctrl)
    assert not B.canonicality_check(ctrl).passed
    assert not B.squared_zero_report(ctrl).passed


def test_control_still_obeys_lie_square_identity():
    assert B.lie_square_identity(B.non_canonical_control(AVChart(("q", "p")))).passed


def test_poisson_condition_on_components():
    # aff-Poisson canonical iff Lambda0 Poisson and X0 a Poisson field
    b = AVChart(("q", "p"))
    L = wedge(PolyTensor.partial(b.base_coords, "q"), PolyTensor.partial(b.base_coords, "p"))
    X = PolyTensor.partial(b.base_coords, "q") * Poly.var(b.base_coords, "p")
    assert schouten_nijenhuis(X, L).is_zero()
    assert B.is_canonical(B.AffStructure.make(b, L, X))


@pytest.mark.parametrize("make", [A.canonical_z_affgebroid, A.tbar_affgebroid, A.lbar_affgebroid, A.ttilde_affine])
def test_affgebroid_correspondences(make):
    rep = B.c3_report(B.from_affgebroid(make(("x", "y"))))
    assert rep.passed, rep.failures()


def test_timedep_structure_components():
    S = B.timedep_structure(("q", "p", "t"))
    assert S.kind == B.POISSON
    assert S.X0 == PolyTensor.partial(S.base, "t")
    assert B.is_canonical(S)
    q, p = (Poly.var(S.base, v) for v in ("q", "p"))
    assert S.vertical_bracket(p, q) == Poly.const(S.base, 1)
