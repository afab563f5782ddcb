"""Calculus on Lie algebroids given by a global frame.

A ``FrameAlgebroid`` is a vector bundle over a chart with a basis of
sections ``e_0 .. e_{r-1}``, anchors ``rho(e_i)`` (coordinate vector
fields) and structure functions ``[e_i, e_j] = sum_k c_ij^k e_k``.
Multisections and forms are ``PolyTensor`` objects whose frame is the
tuple of basis names.

The Schouten bracket here is computed from the anchor and the structure
functions by the Leibniz rules.  It does not use the odd-variable
formula of ``exactpoly``; on the tangent algebroid the two agree, which
the test-suite checks.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Sequence

from .exactpoly import (
    FORM,
    MULTIVECTOR,
    DegreeError,
    Poly,
    PolyTensor,
    apply_vector,
    as_poly,
    contract_one_form,
    interior,
    merge_sign,
    sort_sign,
    wedge,
)


class FrameAlgebroid:
    def __init__(self, chart, frame: Sequence[str], anchors: Sequence[PolyTensor],
                 structure: Mapping[tuple, Mapping[int, object]] | None = None, name: str = ""):
        self.chart = tuple(chart)
        self.frame = tuple(frame)
        self.name = name
        if len(anchors) != len(self.frame):
            raise ValueError("one anchor per basis section is required")
        self.anchors = []
        for a in anchors:
            if a.kind != MULTIVECTOR or a.degree != 1 or a.chart != self.chart or a.frame != self.chart:
                raise ValueError("anchors must be coordinate vector fields on the base chart")
            self.anchors.append(a)
        self.structure: dict[tuple, dict[int, Poly]] = {}
        for (i, j), row in (structure or {}).items():
            if i == j:
                continue
            sign = 1 if i < j else -1
            key = (min(i, j), max(i, j))
            cur = self.structure.setdefault(key, {})
            for k, c in row.items():
                c = as_poly(c, self.chart) * sign
                cur[k] = cur[k] + c if k in cur else c
        self._basis_cache: dict[tuple, PolyTensor] = {}

    @classmethod
    def tangent(cls, chart) -> "FrameAlgebroid":
        chart = tuple(chart)
        return cls(chart, chart, [PolyTensor.partial(chart, v) for v in chart], {}, name="TM")

    @property
    def rank(self) -> int:
        return len(self.frame)

    # tensors in this frame
    def zero(self, kind: str, degree: int) -> PolyTensor:
        return PolyTensor(self.chart, kind, degree, {}, self.frame)

    def scalar(self, f, kind: str = MULTIVECTOR) -> PolyTensor:
        return PolyTensor(self.chart, kind, 0, {(): as_poly(f, self.chart)}, self.frame)

    def section(self, comps: Mapping[int, object]) -> PolyTensor:
        return PolyTensor(self.chart, MULTIVECTOR, 1, {(k,): v for k, v in comps.items()}, self.frame)

    def basis(self, idx: Sequence[int], coeff=1, kind: str = MULTIVECTOR) -> PolyTensor:
        return PolyTensor(self.chart, kind, len(idx), {tuple(idx): coeff}, self.frame)

    def coerce(self, t, kind: str = MULTIVECTOR) -> PolyTensor:
        if isinstance(t, PolyTensor):
            if t.frame != self.frame or t.chart != self.chart:
                raise ValueError(f"tensor does not live on {self.name or 'this algebroid'}")
            return t
        return self.scalar(t, kind)

    # anchor
    def anchor_of(self, x: PolyTensor) -> PolyTensor:
        x = self.coerce(x)
        if x.degree != 1:
            raise DegreeError("anchor of a non-section")
        out = PolyTensor.zero(self.chart, MULTIVECTOR, 1)
        for (i,), c in x.comps.items():
            out = out + self.anchors[i] * c
        return out

    def rho(self, i: int, f: Poly) -> Poly:
        return apply_vector(self.anchors[i], f)

    def structure_section(self, i: int, j: int) -> PolyTensor:
        if i == j:
            return self.zero(MULTIVECTOR, 1)
        row = self.structure.get((min(i, j), max(i, j)), {})
        sec = self.section(row)
        return sec if i < j else -sec

    # Schouten bracket
    def _bracket_with_function(self, idx: tuple, g: Poly) -> PolyTensor:
        """[[e_I, g]] = sum_k (-1)^{p-1-k} rho_{i_k}(g) e_{I minus i_k}."""
        p = len(idx)
        out = self.zero(MULTIVECTOR, p - 1)
        comps = {}
        for k, i in enumerate(idx):
            v = self.rho(i, g)
            if v.is_zero():
                continue
            if (p - 1 - k) % 2:
                v = -v
            rest = idx[:k] + idx[k + 1:]
            comps[rest] = comps[rest] + v if rest in comps else v
        return PolyTensor(self.chart, MULTIVECTOR, p - 1, comps, self.frame) if comps else out

    def _lie_basis(self, i: int, J: tuple) -> PolyTensor:
        """[[e_i, e_J]] as a degree-0 derivation."""
        out = self.zero(MULTIVECTOR, len(J))
        for k, j in enumerate(J):
            br = self.structure_section(i, j)
            if br.is_zero():
                continue
            left = self.basis(J[:k])
            right = self.basis(J[k + 1:])
            out = out + wedge(wedge(left, br), right)
        return out

    def basis_bracket(self, I: tuple, J: tuple) -> PolyTensor:
        key = (I, J)
        hit = self._basis_cache.get(key)
        if hit is not None:
            return hit
        p, q = len(I), len(J)
        if p == 0 or q == 0:
            res = self.zero(MULTIVECTOR, max(p + q - 1, 0))
        elif p == 1:
            res = self._lie_basis(I[0], J)
        else:
            # [[e_J, e_i ^ e_I']] = [[e_J, e_i]] ^ e_I' + (-1)^{q-1} e_i ^ [[e_J, e_I']]
            i, rest = I[0], I[1:]
            t1 = wedge(-self._lie_basis(i, J), self.basis(rest))
            t2 = wedge(self.basis((i,)), self.basis_bracket_rev(J, rest))
            if (q - 1) % 2:
                t2 = -t2
            jb = t1 + t2
            res = jb if ((p - 1) * (q - 1)) % 2 else -jb
        self._basis_cache[key] = res
        return res

    def basis_bracket_rev(self, J: tuple, I: tuple) -> PolyTensor:
        """[[e_J, e_I]] from [[e_I, e_J]] by graded skew symmetry."""
        res = self.basis_bracket(I, J)
        p, q = len(I), len(J)
        return res if ((p - 1) * (q - 1)) % 2 else -res

    def schouten(self, P, Q) -> PolyTensor:
        P = self.coerce(P)
        Q = self.coerce(Q)
        if P.kind != MULTIVECTOR or Q.kind != MULTIVECTOR:
            raise TypeError("Schouten bracket of non-multivectors")
        p, q = P.degree, Q.degree
        deg = p + q - 1
        if deg < 0:
            return self.zero(MULTIVECTOR, 0)
        out = self.zero(MULTIVECTOR, deg)
        sgn = -1 if ((p - 1) * (q - 1)) % 2 == 0 else 1
        for I, f in P.comps.items():
            eI = self.basis(I)
            for J, g in Q.comps.items():
                eJ = self.basis(J)
                term = self.basis_bracket(I, J) * (f * g)
                if p >= 1:
                    term = term + wedge(self._bracket_with_function(I, g), eJ) * f
                if q >= 1:
                    term = term + wedge(self._bracket_with_function(J, f), eI) * (g * sgn)
                out = out + term
        return out

    def bracket(self, X, Y) -> PolyTensor:
        return self.schouten(X, Y)

    # forms
    def evaluate_form(self, w: PolyTensor, idx: Sequence[int]) -> Poly:
        sign, s = sort_sign(tuple(idx))
        if sign == 0:
            return Poly.zero(self.chart)
        c = w.comps.get(s)
        if c is None:
            return Poly.zero(self.chart)
        return c if sign > 0 else -c

    def d(self, w) -> PolyTensor:
        """Chevalley-Eilenberg differential."""
        w = self.coerce(w, FORM)
        if w.kind != FORM:
            raise TypeError("differential of a non-form")
        k = w.degree
        r = self.rank
        if k + 1 > r:
            return self.zero(FORM, k + 1)
        from itertools import combinations
        comps = {}
        for I in combinations(range(r), k + 1):
            total = Poly.zero(self.chart)
            for l, il in enumerate(I):
                rest = I[:l] + I[l + 1:]
                v = self.rho(il, self.evaluate_form(w, rest))
                total = total + (v if l % 2 == 0 else -v)
            for l in range(k + 1):
                for m in range(l + 1, k + 1):
                    br = self.structure.get((I[l], I[m]))
                    if not br:
                        continue
                    rest = I[:l] + I[l + 1:m] + I[m + 1:]
                    acc = Poly.zero(self.chart)
                    for kk, c in br.items():
                        acc = acc + c * self.evaluate_form(w, (kk,) + rest)
                    total = total + (acc if (l + m) % 2 == 0 else -acc)
            if not total.is_zero():
                comps[I] = total
        return PolyTensor(self.chart, FORM, k + 1, comps, self.frame)

    def interior(self, P, w) -> PolyTensor:
        return interior(self.coerce(P), self.coerce(w, FORM))

    def lie(self, Y, w) -> PolyTensor:
        """Lie differential L_Y = i_Y d - (-1)^{|Y|} d i_Y on forms."""
        Y = self.coerce(Y)
        w = self.coerce(w, FORM)
        y = Y.degree
        dw = self.d(w)
        t1 = interior(Y, dw) if y <= dw.degree else None
        t2 = self.d(interior(Y, w)) if y <= w.degree else None
        deg = w.degree - y + 1
        if deg < 0:
            return self.zero(FORM, 0)
        out = self.zero(FORM, deg)
        if t1 is not None:
            out = out + t1
        if t2 is not None:
            out = out + (t2 if y % 2 else -t2)
        return out

    # Jacobi algebroid layer
    def contract(self, phi: PolyTensor, P) -> PolyTensor:
        P = self.coerce(P)
        if P.degree == 0:
            raise DegreeError("cannot contract a 1-form into a function")
        return contract_one_form(phi, P)

    def schouten_jacobi(self, P, Q, phi: PolyTensor) -> PolyTensor:
        """[[P,Q]]^phi = [[P,Q]] + (p-1) P^i_phi Q - (-1)^{p-1} (q-1) i_phi P ^ Q."""
        P = self.coerce(P)
        Q = self.coerce(Q)
        p, q = P.degree, Q.degree
        out = self.schouten(P, Q)
        if q >= 1 and p != 1:
            out = out + wedge(P, self.contract(phi, Q)) * (p - 1)
        if p >= 1 and q != 1:
            t = wedge(self.contract(phi, P), Q) * (q - 1)
            out = out - t if (p - 1) % 2 == 0 else out + t
        return out

    def is_cocycle(self, phi: PolyTensor) -> bool:
        return self.d(phi).is_zero()

    def jacobi_identity_defect(self, sections: Sequence[PolyTensor]) -> list[PolyTensor]:
        """Jacobiator of all triples of the given sections (zero when Lie)."""
        out = []
        n = len(sections)
        for a in range(n):
            for b in range(a + 1, n):
                for c in range(b + 1, n):
                    X, Y, Z = sections[a], sections[b], sections[c]
                    j = (self.bracket(X, self.bracket(Y, Z)) + self.bracket(Y, self.bracket(Z, X))
                         + self.bracket(Z, self.bracket(X, Y)))
                    out.append(j)
        return out

    def anchor_defect(self) -> list[PolyTensor]:
        """rho([e_i,e_j]) - [rho e_i, rho e_j] on basis pairs."""
        from .exactpoly import schouten_nijenhuis
        out = []
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                lhs = self.anchor_of(self.structure_section(i, j))
                rhs = schouten_nijenhuis(self.anchors[i], self.anchors[j])
                out.append(lhs - rhs)
        return out

    def is_lie_algebroid(self) -> bool:
        basis = [self.basis((i,)) for i in range(self.rank)]
        return (all(t.is_zero() for t in self.anchor_defect())
                and all(t.is_zero() for t in self.jacobi_identity_defect(basis)))
