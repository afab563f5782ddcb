from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from avgeo.exactpoly import (FORM, MULTIVECTOR, ChartMismatch, Poly, PolyTensor, evaluate_form,
                             exterior_derivative, interior, lie_derivative, pair, pullback_form,
                             pushforward_multivector, schouten_nijenhuis, wedge)
from avgeo.expr import ParseError, parse_expression, parse_poly, parse_tensor

from .strategies import CHART, forms, multivectors, polys, rationals, to_sympy, vector_fields

settings.register_profile("avgeo", deadline=None, max_examples=60)
settings.load_profile("avgeo")

X, Y, Z = (Poly.var(CHART, v) for v in CHART)


def dd(v):
    return PolyTensor.partial(CHART, v)


def d(v):
    return PolyTensor.d(CHART, v)


# ---------------------------------------------------------------------------
# polynomials against sympy


@given(polys(), polys())
def test_ring_operations_match_sympy(f, g):
    assert to_sympy(f + g) == sympy.expand(to_sympy(f) + to_sympy(g))
    assert to_sympy(f * g) == sympy.expand(to_sympy(f) * to_sympy(g))
    assert to_sympy(f - g) == sympy.expand(to_sympy(f) - to_sympy(g))


@given(polys())
def test_derivative_matches_sympy(f):
    for v in CHART:
        assert to_sympy(f.diff(v)) == sympy.expand(sympy.diff(to_sympy(f), sympy.Symbol(v)))


@given(polys(max_deg=2), polys(max_deg=1), polys(max_deg=1))
def test_substitution_matches_sympy(f, a, b):
    got = f.substitute({"x": a, "y": b})
    sx, sy = sympy.symbols("x y")
    want = sympy.expand(to_sympy(f).subs({sx: to_sympy(a), sy: to_sympy(b)}, simultaneous=True))
    assert to_sympy(got) == want


@given(polys(), polys(), polys())
def test_ring_laws(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)


@given(polys(), st.lists(rationals, min_size=3, max_size=3))
def test_evaluate_is_a_ring_map(f, pt):
    g = f * f + f
    assert g.evaluate(pt) == f.evaluate(pt) ** 2 + f.evaluate(pt)


def test_chart_mismatch_raises():
    with pytest.raises(ChartMismatch):
        Poly.var(("x",), "x") + Poly.var(("y",), "y")


def test_exponents_must_fit_chart():
    with pytest.raises(ValueError):
        Poly(("x",), {(1, 2): 1})


def test_str_round_trips_through_parser():
    f = Fraction(3, 2) * X ** 2 * Y - Z + 7
    assert parse_poly(str(f), CHART) == f


# ---------------------------------------------------------------------------
# exterior calculus


@given(forms(1))
def test_d_squared_zero_on_one_forms(w):
    assert exterior_derivative(exterior_derivative(w)).is_zero()


@given(polys())
def test_d_squared_zero_on_functions(f):
    df = exterior_derivative(PolyTensor.scalar(f, FORM))
    assert exterior_derivative(df).is_zero()


@given(forms(1), forms(1))
def test_wedge_of_one_forms_anticommutes(a, b):
    assert wedge(a, b) == -wedge(b, a)


@given(forms(1), forms(1))
def test_leibniz_rule(a, b):
    lhs = exterior_derivative(wedge(a, b))
    rhs = wedge(exterior_derivative(a), b) - wedge(a, exterior_derivative(b))
    assert lhs == rhs


def test_pairing_and_interior_conventions():
    XY = wedge(dd("x"), dd("y"))
    assert pair(XY, [d("x"), d("y")]) == Poly.const(CHART, 1)
    assert pair(XY, [d("y"), d("x")]) == Poly.const(CHART, -1)
    w = wedge(d("x"), d("y"))
    assert evaluate_form(w, [dd("x"), dd("y")]) == Poly.const(CHART, 1)
    assert interior(XY, w).scalar_part() == Poly.const(CHART, 1)
    # i_X (dx^dy) = dy for X = d/dx
    assert interior(dd("x"), w) == d("y")


@given(vector_fields(), forms(2))
def test_cartan_formula(v, w):
    """L_X w = i_X dw + d i_X w."""
    lhs = lie_derivative(v, w)
    rhs = interior(v, exterior_derivative(w)) + exterior_derivative(interior(v, w))
    assert lhs == rhs


# ---------------------------------------------------------------------------
# Schouten-Nijenhuis bracket


def _sympy_lie_bracket(a: PolyTensor, b: PolyTensor):
    syms = sympy.symbols(CHART)
    A = [to_sympy(a.component((i,))) for i in range(3)]
    B = [to_sympy(b.component((i,))) for i in range(3)]
    return [sympy.expand(sum(A[j] * sympy.diff(B[i], syms[j]) - B[j] * sympy.diff(A[i], syms[j])
                             for j in range(3))) for i in range(3)]


@given(vector_fields(), vector_fields())
def test_schouten_of_vector_fields_is_lie_bracket(a, b):
    got = schouten_nijenhuis(a, b)
    assert [to_sympy(got.component((i,))) for i in range(3)] == _sympy_lie_bracket(a, b)


@given(vector_fields(max_deg=1), vector_fields(max_deg=1), vector_fields(max_deg=1))
def test_jacobi_for_vector_fields(a, b, c):
    s = schouten_nijenhuis
    assert (s(a, s(b, c)) + s(b, s(c, a)) + s(c, s(a, b))).is_zero()


@given(multivectors(2), multivectors(2))
def test_bivector_bracket_symmetry(p, q):
    # [[P, Q]] = -(-1)^{(p-1)(q-1)} [[Q, P]] with p = q = 2
    assert schouten_nijenhuis(p, q) == schouten_nijenhuis(q, p)


@given(vector_fields(), multivectors(2))
def test_vector_bracket_is_lie_derivative(v, p):
    assert schouten_nijenhuis(v, p) == lie_derivative(v, p)


@given(multivectors(2, max_deg=1), polys(max_deg=2), polys(max_deg=2), polys(max_deg=2))
def test_jacobiator_of_bivector(p, f, g, h):
    """Jacobiator of {f,g} = P(df,dg) equals 1/2 [[P,P]](df,dg,dh)."""
    def br(a, b):
        return pair(p, [exterior_derivative(PolyTensor.scalar(a, FORM)), exterior_derivative(PolyTensor.scalar(b, FORM))])
    jac = br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))
    dfs = [exterior_derivative(PolyTensor.scalar(u, FORM)) for u in (f, g, h)]
    PP = schouten_nijenhuis(p, p)
    assert jac * 2 == pair(PP, dfs)


def test_schouten_sign_pinned_on_example():
    P = wedge(dd("x"), dd("y")) + wedge(dd("y"), dd("z")) * X
    Q = dd("z") * Y * Fraction(3, 2)
    assert schouten_nijenhuis(P, Q) == wedge(dd("x"), dd("z")) * Fraction(3, 2)


# ---------------------------------------------------------------------------
# transport


@given(forms(2, max_deg=1))
def test_pullback_along_identity(w):
    ident = {v: Poly.var(CHART, v) for v in CHART}
    assert pullback_form(w, ident, CHART) == w


@given(multivectors(2, max_deg=1), polys(("x", "y"), max_deg=2))
def test_pushforward_round_trip(p, g):
    # shear z -> z + g(x, y) and back
    gz = g.on(CHART)
    fwd = {"x": X, "y": Y, "z": Z + gz}
    inv = {"x": X, "y": Y, "z": Z - gz}
    there = pushforward_multivector(p, fwd, inv, CHART)
    assert pushforward_multivector(there, inv, fwd, CHART) == p


@given(multivectors(2, max_deg=1), multivectors(2, max_deg=1))
def test_pushforward_preserves_schouten(p, q):
    fwd = {"x": X + Y * Y, "y": Y, "z": Z + X}
    inv = {"x": X - Y * Y, "y": Y, "z": Z - (X - Y * Y)}
    push = lambda t: pushforward_multivector(t, fwd, inv, CHART)  # noqa: E731
    assert push(schouten_nijenhuis(p, q)) == schouten_nijenhuis(push(p), push(q))


# ---------------------------------------------------------------------------
# literals


def test_parse_literals():
    assert parse_poly("3/2*x^2*y - z", CHART) == Fraction(3, 2) * X ** 2 * Y - Z
    assert parse_tensor("d/dx^d/dy", CHART) == wedge(dd("x"), dd("y"))
    assert parse_tensor("dx^dy", CHART) == wedge(d("x"), d("y"))
    assert parse_tensor("x*d/dy + d/dx", CHART) == dd("y") * X + dd("x")
    assert parse_expression("(x + y)^2", CHART) == (X + Y) ** 2


@pytest.mark.parametrize("text,col", [("x + * y", 5), ("x + q", 5), ("(x + y", 7), ("d/dq", 1), ("x $ y", 3)])
def test_parse_errors_carry_columns(text, col):
    with pytest.raises(ParseError) as ei:
        parse_expression(text, CHART)
    assert ei.value.column == col and ei.value.line == 1


def test_mixed_wedge_rejected():
    with pytest.raises(ParseError):
        parse_expression("dx^d/dy", CHART)
