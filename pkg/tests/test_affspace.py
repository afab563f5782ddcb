import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avgeo import affspace as A
from avgeo import linalg as la

settings.register_profile("affspace", deadline=None, max_examples=40)
settings.load_profile("affspace")

seeds = st.integers(0, 10 ** 6)
dims = st.integers(1, 3)
rationals = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 3))


def rand_special(seed, dim):
    return A.random_affine(random.Random(seed), dim, special=True, label="A")


@given(seeds, st.integers(1, 4), st.sampled_from(["vector", "special"]))
def test_double_dual_is_canonical(seed, dim, mode):
    a = rand_special(seed, dim)
    w = A.double_dual_witness(a, mode)
    assert w.composites_are_identity() and w.preserves_structure() and w.check()


@given(seeds, dims, dims, st.sampled_from(sorted(A.THEOREMS)))
def test_duality_theorems(seed, d1, d2, name):
    rng = random.Random(seed)
    a = A.random_affine(rng, d1, special=True, label="A1")
    b = A.random_affine(rng, d2, special=True, label="A2")
    ops = (a,) if name in ("specialization_dual", "specialization_hull") else (a, b)
    assert A.verify_duality_theorem(name, *ops).check()


@given(seeds, dims)
def test_tampered_witness_is_rejected(seed, dim):
    w = A.double_dual_witness(rand_special(seed, dim), "special")
    bad = A.IsoWitness(A.AffMorphism.of(w.forward.source, w.forward.target,
                                        [[2 * x for x in r] for r in w.forward.rows()]), w.backward)
    assert not bad.check()


@given(seeds, st.lists(st.integers(1, 2), min_size=1, max_size=3))
def test_affine_tensor_dimension(seed, ds):
    rng = random.Random(seed)
    ops = [A.random_affine(rng, d, special=True) for d in ds]
    expect = 1
    for d in ds:
        expect *= d + 1
    assert A.a_tensor(*ops).space.dim == expect - 1


@given(seeds, dims, dims)
def test_special_tensor_dimension(seed, d1, d2):
    rng = random.Random(seed)
    a, b = (A.random_affine(rng, d, special=True) for d in (d1, d2))
    assert A.sa_tensor(a, b).space.dim == d1 * d2


@given(seeds, dims, dims)
def test_product_and_boxtimes_dimensions(seed, d1, d2):
    rng = random.Random(seed)
    a, b = (A.random_affine(rng, d, special=True) for d in (d1, d2))
    assert A.a_times(a, b).space.dim == d1 + d2
    assert A.boxtimes(a, b).space.dim == d1 + d2 - 1
    assert A.specialization(a).space.dim == d1 + 1


@given(seeds, dims, dims, rationals)
def test_boxtimes_identifies_translations(seed, d1, d2, t):
    rng = random.Random(seed)
    a, b = (A.random_affine(rng, d, special=True) for d in (d1, d2))
    c = A.boxtimes(a, b)
    p, q = a.base_point(), b.base_point()
    moved1 = la.add(p, la.scale(t, a.v0))
    moved2 = la.add(q, la.scale(t, b.v0))
    assert A.boxtimes_class(c, moved1, q) == A.boxtimes_class(c, p, moved2)


def test_dual_kinds():
    a = A.affine_space(2)
    assert A.vector_dual(a).kind == A.SPECIAL_VECTOR and A.vector_dual(a).dim == 3
    v = A.special_vector_space(3)
    assert A.affine_dual(v).kind == A.AFFINE and A.affine_dual(v).dim == 2
    s = A.special_affine_space(2)
    d = A.special_dual(s)
    assert d.kind == A.SPECIAL_AFFINE and d.one == s.v0 and d.v0 == s.one


def test_special_pairing():
    s = A.special_affine_space(1)  # hull K^2, one = e2, v0 = e1
    assert A.special_pairing(s, (3, 1), (1, 5)) == 8
    with pytest.raises(A.AffSpaceError):
        A.special_pairing(s, (3, 2), (1, 5))


def test_combine():
    a = A.affine_space(1)
    p, q = (0, 1), (4, 1)
    assert A.combine(a, [p, q], [Fraction(1, 4), Fraction(3, 4)]) == (3, 1)
    assert A.combine(a, [p, q], [1, -1]) == (-4, 0)  # a vector of the model space
    with pytest.raises(A.AffSpaceError):
        A.combine(a, [p, q], [1, 1])
    with pytest.raises(A.AffSpaceError):
        A.combine(a, [(0, 2)], [1])


@pytest.mark.parametrize("kwargs", [
    dict(hull_dim=0, kind=A.AFFINE),
    dict(hull_dim=2, kind=A.AFFINE),
    dict(hull_dim=2, kind=A.AFFINE, one=(0, 0)),
    dict(hull_dim=2, kind=A.AFFINE, one=(1, 0, 0)),
    dict(hull_dim=2, kind=A.SPECIAL_AFFINE, one=(1, 0), v0=(1, 0)),
    dict(hull_dim=2, kind=A.SPECIAL_VECTOR, one=(1, 0), v0=(0, 1)),
    dict(hull_dim=2, kind="bogus"),
])
def test_invalid_spaces(kwargs):
    with pytest.raises(A.AffSpaceError):
        A.HullSpace(**kwargs)


def test_constructions_check_operand_kinds():
    with pytest.raises(A.AffSpaceError):
        A.boxtimes(A.affine_space(1), A.special_affine_space(1))
    with pytest.raises(A.AffSpaceError):
        A.categorial_construct("nope", [A.affine_space(1)])
    with pytest.raises(A.AffSpaceError):
        A.verify_duality_theorem("nope", A.affine_space(1))


def test_morphism_composition():
    a = A.affine_space(1)
    m = A.AffMorphism.of(a, a, [[2, 1], [0, 1]])
    assert m.is_affine_map()
    assert m.compose(m).apply((1, 1)) == (7, 1)
    assert not A.AffMorphism.of(a, a, [[1, 0], [0, 2]]).is_affine_map()
