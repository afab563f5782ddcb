"""Hypothesis strategies for polynomial data."""

from fractions import Fraction
from itertools import combinations

import sympy
from hypothesis import strategies as st

from avgeo.exactpoly import FORM, MULTIVECTOR, Poly, PolyTensor

CHART = ("x", "y", "z")

rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def polys(chart=CHART, max_deg=3, max_terms=4):
    n = len(chart)
    exps = st.tuples(*[st.integers(0, max_deg) for _ in range(n)]).filter(lambda e: sum(e) <= max_deg)
    return st.dictionaries(exps, rationals, max_size=max_terms).map(lambda d: Poly(chart, d))


def tensors(kind, degree, chart=CHART, max_deg=2):
    idx = list(combinations(range(len(chart)), degree))
    return st.dictionaries(st.sampled_from(idx), polys(chart, max_deg, 3), max_size=len(idx)).map(
        lambda d: PolyTensor(chart, kind, degree, d))


def vector_fields(chart=CHART, max_deg=2):
    return tensors(MULTIVECTOR, 1, chart, max_deg)


def multivectors(degree, chart=CHART, max_deg=2):
    return tensors(MULTIVECTOR, degree, chart, max_deg)


def forms(degree, chart=CHART, max_deg=2):
    return tensors(FORM, degree, chart, max_deg)


def to_sympy(p: Poly):
    syms = sympy.symbols(p.chart)
    out = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            term *= s ** k
        out += term
    return sympy.expand(out)
