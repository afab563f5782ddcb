"""Affine, special and bispecial spaces represented on their vector hulls.

An affine space A of dimension n is stored as its hull K^{n+1} together
with the covector ``one`` (the constant function 1_A); points are the
hull vectors w with one(w) = 1 and the model space is the kernel of one.
A special affine space also carries ``v0`` in that kernel.  Vector-type
spaces (special, cospecial, bispecial) use the same record with
``one`` playing the role of the distinguished covector phi0.

Constructions return the new space together with a ``Realization``: a
description of its hull as a subquotient of the direct sum of the
operand hulls.  Canonical isomorphisms are checked by building the maps
prescribed by the definitions on these realizations and multiplying the
matrices exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from . import linalg as la
from .linalg import Vector, frac, vec

AFFINE = "affine"
SPECIAL_AFFINE = "special_affine"
VECTOR = "vector"
SPECIAL_VECTOR = "special_vector"
COSPECIAL_VECTOR = "cospecial_vector"
BISPECIAL_VECTOR = "bispecial_vector"

AFFINE_KINDS = (AFFINE, SPECIAL_AFFINE)
VECTOR_KINDS = (VECTOR, SPECIAL_VECTOR, COSPECIAL_VECTOR, BISPECIAL_VECTOR)


class AffSpaceError(ValueError):
    pass


@dataclass(frozen=True)
class HullSpace:
    hull_dim: int
    kind: str
    one: Vector | None = None
    v0: Vector | None = None
    label: str = ""

    def __post_init__(self):
        if self.hull_dim < 1:
            raise AffSpaceError("hull dimension must be positive")
        needs_one = self.kind in (AFFINE, SPECIAL_AFFINE, COSPECIAL_VECTOR, BISPECIAL_VECTOR)
        needs_v0 = self.kind in (SPECIAL_AFFINE, SPECIAL_VECTOR, BISPECIAL_VECTOR)
        if self.kind not in AFFINE_KINDS + VECTOR_KINDS:
            raise AffSpaceError(f"unknown kind {self.kind!r}")
        for name, val, need in (("one", self.one, needs_one), ("v0", self.v0, needs_v0)):
            if need and val is None:
                raise AffSpaceError(f"{self.kind} space needs {name}")
            if not need and val is not None:
                raise AffSpaceError(f"{self.kind} space does not carry {name}")
            if val is not None:
                if len(val) != self.hull_dim:
                    raise AffSpaceError(f"{name} has wrong length")
                if la.is_zero_vec(val):
                    raise AffSpaceError(f"{name} must be non-zero")
        if self.one is not None and self.v0 is not None and la.dot(self.one, self.v0) != 0:
            raise AffSpaceError("distinguished vector must lie in the kernel of the distinguished covector")

    @property
    def dim(self) -> int:
        return self.hull_dim - 1 if self.kind in AFFINE_KINDS else self.hull_dim

    @property
    def phi0(self) -> Vector | None:
        return self.one

    def is_affine(self) -> bool:
        return self.kind in AFFINE_KINDS

    def contains_point(self, w: Sequence) -> bool:
        return self.is_affine() and la.dot(self.one, w) == 1

    def is_model_vector(self, w: Sequence) -> bool:
        return self.is_affine() and la.dot(self.one, w) == 0

    def base_point(self) -> Vector:
        """Canonical point: first unit vector not killed by one, rescaled."""
        if not self.is_affine():
            raise AffSpaceError("vector-type spaces have no points")
        j = next(i for i, c in enumerate(self.one) if c != 0)
        return la.scale(Fraction(1) / self.one[j], la.unit(self.hull_dim, j))

    def model_basis(self) -> list[Vector]:
        if self.one is None:
            return [la.unit(self.hull_dim, j) for j in range(self.hull_dim)]
        return la.nullspace([list(self.one)], self.hull_dim)

    def affine_basis(self) -> list[Vector]:
        """dim+1 affinely independent points spanning the hull."""
        p = self.base_point()
        return [p] + [la.add(p, v) for v in self.model_basis()]


def affine_space(dim: int, label: str = "") -> HullSpace:
    n = dim + 1
    return HullSpace(n, AFFINE, one=la.unit(n, n - 1), label=label)


def special_affine_space(dim: int, v0: Sequence | None = None, one: Sequence | None = None,
                         label: str = "") -> HullSpace:
    n = dim + 1
    one = vec(one) if one is not None else la.unit(n, n - 1)
    v0 = vec(v0) if v0 is not None else la.unit(n, 0)
    return HullSpace(n, SPECIAL_AFFINE, one=one, v0=v0, label=label)


def special_vector_space(dim: int, v0: Sequence | None = None, label: str = "") -> HullSpace:
    v0 = vec(v0) if v0 is not None else la.unit(dim, dim - 1)
    return HullSpace(dim, SPECIAL_VECTOR, v0=v0, label=label)


def cospecial_vector_space(dim: int, phi0: Sequence | None = None, label: str = "") -> HullSpace:
    phi0 = vec(phi0) if phi0 is not None else la.unit(dim, dim - 1)
    return HullSpace(dim, COSPECIAL_VECTOR, one=phi0, label=label)


def bispecial_vector_space(dim: int, v0: Sequence, phi0: Sequence, label: str = "") -> HullSpace:
    return HullSpace(dim, BISPECIAL_VECTOR, one=vec(phi0), v0=vec(v0), label=label)


def unit_space() -> HullSpace:
    """I = (K, 1) as a special affine space on its hull K^2."""
    return HullSpace(2, SPECIAL_AFFINE, one=vec([0, 1]), v0=vec([1, 0]), label="I")


def point_space() -> HullSpace:
    return HullSpace(1, AFFINE, one=vec([1]), label="{*}")


def combine(space: HullSpace, points: Sequence[Sequence], weights: Sequence) -> Vector:
    if len(points) != len(weights):
        raise AffSpaceError("one weight per point is required")
    if not points:
        raise AffSpaceError("no points to combine")
    ws = [frac(w) for w in weights]
    for p in points:
        if not space.contains_point(p):
            raise AffSpaceError("point does not lie on the affine hyperplane")
    total = sum(ws, Fraction(0))
    if total not in (0, 1):
        raise AffSpaceError(f"weights sum to {total}, expected 0 or 1")
    out = tuple(Fraction(0) for _ in range(space.hull_dim))
    for p, w in zip(points, ws):
        out = la.add(out, la.scale(w, p))
    return out


# ---------------------------------------------------------------------------
# morphisms and witnesses


@dataclass(frozen=True)
class AffMorphism:
    source: HullSpace
    target: HullSpace
    matrix: tuple  # rows: target coordinates

    @classmethod
    def of(cls, source, target, m) -> "AffMorphism":
        return cls(source, target, tuple(tuple(r) for r in m))

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.matrix]

    def apply(self, w: Sequence) -> Vector:
        return la.matvec(self.rows(), w)

    def pulls_back_one(self) -> bool:
        """one_target o M = one_source (maps the level-1 set to the level-1 set)."""
        if self.source.one is None or self.target.one is None:
            return False
        pulled = la.matvec(la.transpose(self.rows(), self.source.hull_dim), self.target.one)
        return pulled == tuple(self.source.one)

    def maps_v0(self) -> bool:
        if self.source.v0 is None or self.target.v0 is None:
            return False
        return self.apply(self.source.v0) == tuple(self.target.v0)

    def is_affine_map(self) -> bool:
        return self.pulls_back_one()

    def is_special(self) -> bool:
        ok = True
        if self.source.v0 is not None or self.target.v0 is not None:
            ok = ok and self.maps_v0()
        if self.source.one is not None or self.target.one is not None:
            ok = ok and self.pulls_back_one()
        return ok

    def compose(self, other: "AffMorphism") -> "AffMorphism":
        """self o other."""
        return AffMorphism.of(other.source, self.target, la.matmul(self.rows(), other.rows()))


@dataclass(frozen=True)
class IsoWitness:
    forward: AffMorphism
    backward: AffMorphism
    name: str = ""
    notes: tuple = ()

    def composites_are_identity(self) -> bool:
        fb = la.matmul(self.forward.rows(), self.backward.rows())
        bf = la.matmul(self.backward.rows(), self.forward.rows())
        return (len(fb) == self.forward.target.hull_dim and la.is_identity(fb)
                and len(bf) == self.forward.source.hull_dim and la.is_identity(bf))

    def preserves_structure(self) -> bool:
        for m in (self.forward, self.backward):
            if m.source.one is not None and not m.pulls_back_one():
                return False
            if m.source.v0 is not None and not m.maps_v0():
                return False
        return True

    def check(self) -> bool:
        return (self.forward.source.kind == self.forward.target.kind
                and self.composites_are_identity() and self.preserves_structure())

    def summary(self) -> dict:
        return {
            "theorem": self.name,
            "source_hull_dim": self.forward.source.hull_dim,
            "target_hull_dim": self.forward.target.hull_dim,
            "dim": self.forward.source.dim,
            "composites_identity": self.composites_are_identity(),
            "structure_preserved": self.preserves_structure(),
        }


# ---------------------------------------------------------------------------
# realizations as subquotients of an ambient coordinate space


@dataclass(frozen=True)
class Realization:
    """Hull = S / Q inside K^N with coordinate map L and lift E (L E = I)."""

    ambient: int
    sub: tuple
    quot: tuple
    L: tuple
    E: tuple

    @classmethod
    def build(cls, ambient: int, sub: Sequence[Sequence] | None = None,
              quot: Sequence[Sequence] = ()) -> "Realization":
        if sub is None:
            sub = [la.unit(ambient, j) for j in range(ambient)]
        sub = la.span_basis([vec(v) for v in sub]) if sub else []
        quot = la.span_basis([vec(v) for v in quot]) if quot else []
        for q in quot:
            if sub and la.solve(la.columns(sub), q) is None:
                raise AffSpaceError("quotient vector outside the subspace")
        # complement of Q in S, then complement of S in K^N
        cand = list(quot) + list(sub)
        idx = la.independent_subset(cand)
        comp = [cand[i] for i in idx if i >= len(quot)]
        outer = la.complete_basis(list(quot) + comp, ambient)[len(quot) + len(comp):]
        B = la.columns(list(comp) + list(quot) + list(outer)) if ambient else []
        Binv = la.inverse(B)
        n = len(comp)
        L = tuple(tuple(r) for r in Binv[:n])
        E = tuple(tuple(c) for c in comp)  # stored as list of columns
        return cls(ambient, tuple(sub), tuple(quot), L, E)

    @property
    def dim(self) -> int:
        return len(self.E)

    def lift(self, c: Sequence) -> Vector:
        out = tuple(Fraction(0) for _ in range(self.ambient))
        for ci, col in zip(c, self.E):
            if ci:
                out = la.add(out, la.scale(ci, col))
        return out

    def lift_matrix(self) -> list[list[Fraction]]:
        return la.columns(self.E) if self.E else [[] for _ in range(self.ambient)]

    def contains(self, v: Sequence) -> bool:
        if not self.sub:
            return la.is_zero_vec(v)
        return la.solve(la.columns(self.sub), v) is not None

    def coords(self, v: Sequence) -> Vector:
        if not self.contains(v):
            raise AffSpaceError("vector is not in the realized subspace")
        return la.matvec([list(r) for r in self.L], v)

    def coord_matrix(self) -> list[list[Fraction]]:
        return [list(r) for r in self.L]

    def dual(self) -> "Realization":
        """Dual hull as Ann(Q)/Ann(S) in the dual ambient, dual-basis coordinates."""
        sub = la.annihilator(self.quot, self.ambient)
        quot = la.annihilator(self.sub, self.ambient) if self.sub else [la.unit(self.ambient, j) for j in range(self.ambient)]
        L = tuple(tuple(c) for c in self.E)  # coords(g) = (g(E_i))_i
        E = tuple(tuple(r) for r in self.L)  # lift(c) = L^T c, columns are rows of L
        return Realization(self.ambient, tuple(sub), tuple(quot), L, E)


@dataclass(frozen=True)
class Construction:
    space: HullSpace
    realization: Realization
    maps: dict = field(default_factory=dict)
    operands: tuple = ()


def _identity_realization(n: int) -> Realization:
    return Realization.build(n)


def _block(parts: Sequence[Sequence], sizes: Sequence[int]) -> Vector:
    out = []
    for p, n in zip(parts, sizes):
        out.extend(p if p is not None else [Fraction(0)] * n)
    return tuple(frac(x) for x in out)


def _inj(sizes: Sequence[int], k: int) -> list[list[Fraction]]:
    """Matrix of the k-th block injection K^{n_k} -> K^{sum n}."""
    N = sum(sizes)
    off = sum(sizes[:k])
    m = la.zeros(N, sizes[k])
    for j in range(sizes[k]):
        m[off + j][j] = Fraction(1)
    return m


def _proj(sizes: Sequence[int], k: int) -> list[list[Fraction]]:
    return la.transpose(_inj(sizes, k), sizes[k])


def _require(space: HullSpace, kinds: Sequence[str], what: str):
    if space.kind not in kinds:
        raise AffSpaceError(f"{what} needs {' or '.join(kinds)} operands, got {space.kind}")


def _finish(kind: str, real: Realization, one_amb, v0_amb, label: str, maps=None, operands=()) -> Construction:
    one = None
    if one_amb is not None:
        one = la.matvec(la.transpose(real.lift_matrix(), real.dim), one_amb)
    v0 = real.coords(v0_amb) if v0_amb is not None else None
    space = HullSpace(real.dim, kind, one=one, v0=v0, label=label)
    return Construction(space, real, maps or {}, tuple(operands))


def _embedding(real: Realization, src: HullSpace, target: HullSpace, sizes, k) -> AffMorphism:
    m = la.matmul(real.coord_matrix(), _inj(sizes, k))
    return AffMorphism.of(src, target, m)


def _projection(real: Realization, target_op: HullSpace, space: HullSpace, sizes, k) -> AffMorphism:
    m = la.matmul(_proj(sizes, k), real.lift_matrix())
    return AffMorphism.of(space, target_op, m)


def _product_like(a: HullSpace, b: HullSpace, kind: str, label: str, equalize_one: bool,
                  v0_pair: bool) -> Construction:
    sizes = [a.hull_dim, b.hull_dim]
    N = sum(sizes)
    if equalize_one:
        sub = la.nullspace([list(_block([a.one, la.scale(-1, b.one)], sizes))], N)
    else:
        sub = None
    real = Realization.build(N, sub)
    one_amb = _block([a.one, None], sizes) if equalize_one else None
    v0_amb = _block([a.v0, b.v0], sizes) if v0_pair else None
    c = _finish(kind, real, one_amb, v0_amb, label, operands=(a, b))
    c.maps["projections"] = [_projection(real, op, c.space, sizes, k) for k, op in enumerate((a, b))]
    return c


def _sum_like(a: HullSpace, b: HullSpace, kind: str, label: str, identify_v0: bool,
              one_pair: bool, v0_sign: int = -1) -> Construction:
    sizes = [a.hull_dim, b.hull_dim]
    N = sum(sizes)
    quot = [_block([a.v0, la.scale(v0_sign, b.v0)], sizes)] if identify_v0 else []
    real = Realization.build(N, None, quot)
    one_amb = _block([a.one, b.one], sizes) if one_pair else None
    v0_amb = _block([a.v0, None], sizes) if identify_v0 else None
    c = _finish(kind, real, one_amb, v0_amb, label, operands=(a, b))
    c.maps["embeddings"] = [_embedding(real, op, c.space, sizes, k) for k, op in enumerate((a, b))]
    return c


def sv_times(a: HullSpace, b: HullSpace) -> Construction:
    _require(a, (SPECIAL_VECTOR,), "sv_times")
    _require(b, (SPECIAL_VECTOR,), "sv_times")
    return _product_like(a, b, SPECIAL_VECTOR, f"{a.label}x{b.label}", False, True)


def sv_oplus(a: HullSpace, b: HullSpace) -> Construction:
    _require(a, (SPECIAL_VECTOR,), "sv_oplus")
    _require(b, (SPECIAL_VECTOR,), "sv_oplus")
    return _sum_like(a, b, SPECIAL_VECTOR, f"{a.label}+{b.label}", True, False)


def cv_times(a: HullSpace, b: HullSpace) -> Construction:
    _require(a, (COSPECIAL_VECTOR,), "cv_times")
    _require(b, (COSPECIAL_VECTOR,), "cv_times")
    return _product_like(a, b, COSPECIAL_VECTOR, f"{a.label}x{b.label}", True, False)


def cv_oplus(a: HullSpace, b: HullSpace) -> Construction:
    _require(a, (COSPECIAL_VECTOR,), "cv_oplus")
    _require(b, (COSPECIAL_VECTOR,), "cv_oplus")
    return _sum_like(a, b, COSPECIAL_VECTOR, f"{a.label}+{b.label}", False, True)


def a_times(a: HullSpace, b: HullSpace) -> Construction:
    _require(a, AFFINE_KINDS, "a_times")
    _require(b, AFFINE_KINDS, "a_times")
    return _product_like(_plain(a), _plain(b), AFFINE, f"{a.label}x{b.label}", True, False)


def a_oplus(a: HullSpace, b: HullSpace) -> Construction:
    _require(a, AFFINE_KINDS, "a_oplus")
    _require(b, AFFINE_KINDS, "a_oplus")
    return _sum_like(_plain(a), _plain(b), AFFINE, f"{a.label}+{b.label}", False, True)


def sa_times(a: HullSpace, b: HullSpace) -> Construction:
    _require(a, (SPECIAL_AFFINE,), "sa_times")
    _require(b, (SPECIAL_AFFINE,), "sa_times")
    return _product_like(a, b, SPECIAL_AFFINE, f"{a.label}x{b.label}", True, True)


def sa_oplus(a: HullSpace, b: HullSpace) -> Construction:
    _require(a, (SPECIAL_AFFINE,), "sa_oplus")
    _require(b, (SPECIAL_AFFINE,), "sa_oplus")
    return _sum_like(a, b, SPECIAL_AFFINE, f"{a.label}+{b.label}", True, True)


def boxtimes(a: HullSpace, b: HullSpace) -> Construction:
    """(A1 x A2) / <(v1, -v2)> with distinguished vector the class of (v1, 0)."""
    _require(a, (SPECIAL_AFFINE,), "boxtimes")
    _require(b, (SPECIAL_AFFINE,), "boxtimes")
    sizes = [a.hull_dim, b.hull_dim]
    N = sum(sizes)
    sub = la.nullspace([list(_block([a.one, la.scale(-1, b.one)], sizes))], N)
    quot = [_block([a.v0, la.scale(-1, b.v0)], sizes)]
    real = Realization.build(N, sub, quot)
    c = _finish(SPECIAL_AFFINE, real, _block([a.one, None], sizes), _block([a.v0, None], sizes),
                f"{a.label}[x]{b.label}", operands=(a, b))
    return c


def boxtimes_class(c: Construction, p1: Sequence, p2: Sequence) -> Vector:
    """Coordinates of the class of the pair (p1, p2)."""
    a, b = c.operands
    return c.realization.coords(_block([vec(p1), vec(p2)], [a.hull_dim, b.hull_dim]))


def _kron(u: Sequence, v: Sequence) -> Vector:
    return tuple(frac(x) * frac(y) for x in u for y in v)


def a_tensor(*spaces: HullSpace) -> Construction:
    if len(spaces) < 1:
        raise AffSpaceError("a_tensor needs operands")
    for s in spaces:
        _require(s, AFFINE_KINDS, "a_tensor")
    one = (Fraction(1),)
    n = 1
    for s in spaces:
        one = _kron(one, s.one)
        n *= s.hull_dim
    real = Realization.build(n)
    return _finish(AFFINE, real, one, None, "(x)".join(s.label for s in spaces), operands=tuple(spaces))


def sa_tensor(a: HullSpace, b: HullSpace) -> Construction:
    """Quotient of the affine tensor product identifying a1 (x) v2 with v1 (x) a2."""
    _require(a, (SPECIAL_AFFINE,), "sa_tensor")
    _require(b, (SPECIAL_AFFINE,), "sa_tensor")
    n = a.hull_dim * b.hull_dim
    pa, pb = a.base_point(), b.base_point()
    quot = [_kron(u, b.v0) for u in a.model_basis()]
    quot += [_kron(a.v0, u) for u in b.model_basis()]
    quot.append(la.sub(_kron(pa, b.v0), _kron(a.v0, pb)))
    real = Realization.build(n, None, quot)
    return _finish(SPECIAL_AFFINE, real, _kron(a.one, b.one), _kron(pa, b.v0),
                   f"{a.label}(x)sa{b.label}", operands=(a, b))


def wedge_affine(a: HullSpace, k: int) -> Construction:
    """The affine wedge power, identified with the exterior power of the hull."""
    _require(a, AFFINE_KINDS, "wedge_affine")
    if k < 2:
        raise AffSpaceError("wedge_affine needs k >= 2")
    n = len(list(combinations(range(a.hull_dim), k)))
    if n == 0:
        raise AffSpaceError("exterior power vanishes")
    real = Realization.build(n)
    space = HullSpace(n, VECTOR, label=f"wedge^{k}{a.label}")
    return Construction(space, real, {}, (a,))


def specialization(a: HullSpace) -> Construction:
    """S_A = (A x I, (0, 1)) as a special affine space."""
    _require(a, AFFINE_KINDS, "specialization")
    return sa_times_plain_unit(_plain(a))


def sa_times_plain_unit(a: HullSpace) -> Construction:
    i = unit_space()
    sizes = [a.hull_dim, i.hull_dim]
    N = sum(sizes)
    sub = la.nullspace([list(_block([a.one, la.scale(-1, i.one)], sizes))], N)
    real = Realization.build(N, sub)
    c = _finish(SPECIAL_AFFINE, real, _block([a.one, None], sizes), _block([None, i.v0], sizes),
                f"S({a.label})", operands=(a, i))
    c.maps["projections"] = [_projection(real, op, c.space, sizes, k) for k, op in enumerate((a, i))]
    return c


def _plain(a: HullSpace) -> HullSpace:
    if a.kind == AFFINE:
        return a
    return HullSpace(a.hull_dim, AFFINE, one=a.one, label=a.label)


def as_special_affine(v: HullSpace) -> HullSpace:
    """A special vector space (V, v0) viewed as a special affine space (hull V + K)."""
    _require(v, (SPECIAL_VECTOR,), "as_special_affine")
    n = v.hull_dim + 1
    return HullSpace(n, SPECIAL_AFFINE, one=la.unit(n, n - 1), v0=tuple(v.v0) + (Fraction(0),),
                     label=v.label)


CONSTRUCTIONS = {
    "a_times": a_times, "a_oplus": a_oplus, "sv_times": sv_times, "sv_oplus": sv_oplus,
    "cv_times": cv_times, "cv_oplus": cv_oplus, "sa_times": sa_times, "sa_oplus": sa_oplus,
    "boxtimes": boxtimes, "sa_tensor": sa_tensor,
}


def categorial_construct(kind: str, operands: Sequence[HullSpace], k: int | None = None) -> Construction:
    if kind == "a_tensor":
        return a_tensor(*operands)
    if kind == "wedge_affine":
        if len(operands) != 1:
            raise AffSpaceError("wedge_affine takes one operand")
        return wedge_affine(operands[0], k or 2)
    if kind == "specialization":
        if len(operands) != 1:
            raise AffSpaceError("specialization takes one operand")
        return specialization(operands[0])
    fn = CONSTRUCTIONS.get(kind)
    if fn is None:
        raise AffSpaceError(f"unknown construction {kind!r}")
    if len(operands) < 2:
        raise AffSpaceError(f"{kind} needs at least two operands")
    c = fn(operands[0], operands[1])
    for extra in operands[2:]:
        c = fn(c.space, extra)
    return c


# ---------------------------------------------------------------------------
# dualities


def vector_dual(a: HullSpace) -> HullSpace:
    """A^dagger = Aff(A, K) = hull dual, distinguished vector 1_A."""
    _require(a, AFFINE_KINDS + (COSPECIAL_VECTOR,), "vector_dual")
    return HullSpace(a.hull_dim, SPECIAL_VECTOR, v0=tuple(a.one), label=f"{a.label}^dag")


def affine_dual(v: HullSpace) -> HullSpace:
    """V^ddagger: covectors taking the value 1 on v0, as an affine space."""
    _require(v, (SPECIAL_VECTOR,), "affine_dual")
    return HullSpace(v.hull_dim, AFFINE, one=tuple(v.v0), label=f"{v.label}^ddag")


def special_dual(a: HullSpace) -> HullSpace:
    """A^# = special affine maps A -> I; swaps the distinguished vector and covector."""
    _require(a, (SPECIAL_AFFINE, BISPECIAL_VECTOR), "special_dual")
    return HullSpace(a.hull_dim, a.kind, one=tuple(a.v0), v0=tuple(a.one), label=f"{a.label}^#")


def special_pairing(a: HullSpace, point: Sequence, functional: Sequence) -> Fraction:
    """<a, phi>_sa = phi(a) for a point of A and a point of A^#."""
    if not a.contains_point(point):
        raise AffSpaceError("point not in A")
    if la.dot(a.v0, functional) != 1:
        raise AffSpaceError("functional is not a point of A^#")
    return la.dot(point, functional)


def evaluation_map(a: HullSpace, dd: HullSpace) -> AffMorphism:
    """Hull map w -> (psi -> psi(w)) into the double dual, written in the dual-dual basis."""
    n = a.hull_dim
    dual_basis = [la.unit(n, j) for j in range(n)]
    cols = [[la.dot(psi, la.unit(n, i)) for psi in dual_basis] for i in range(n)]
    return AffMorphism.of(a, dd, la.transpose(cols))


def double_dual_witness(a: HullSpace, mode: str) -> IsoWitness:
    """(A^dag)^ddag ~ A (mode 'vector') or (A^#)^# ~ A (mode 'special')."""
    if mode == "vector":
        dd = affine_dual(vector_dual(_plain(a)))
        src = _plain(a)
    elif mode == "special":
        dd = special_dual(special_dual(a))
        src = a
    else:
        raise AffSpaceError(f"unknown duality mode {mode!r}")
    fwd = evaluation_map(src, dd)
    bwd = AffMorphism.of(dd, src, la.inverse(fwd.rows()))
    return IsoWitness(fwd, bwd, name=f"double_dual_{mode}")


# ---------------------------------------------------------------------------
# canonical isomorphism theorems


def _witness(name: str, src: HullSpace, tgt: HullSpace, fwd, bwd) -> IsoWitness:
    return IsoWitness(AffMorphism.of(src, tgt, fwd), AffMorphism.of(tgt, src, bwd), name=name)


def _free_hull(points: Sequence[Sequence], label: str) -> HullSpace:
    """Hull of the affine space spanned by affinely independent points."""
    m = len(points)
    return HullSpace(m, AFFINE, one=tuple(Fraction(1) for _ in range(m)), label=label)


def _points_matrix(points) -> list[list[Fraction]]:
    return la.columns(points)


def _identity_map(src_real: Realization, tgt_real: Realization) -> list[list[Fraction]]:
    """Matrix of the ambient identity between two realizations of one subquotient."""
    return la.matmul(tgt_real.coord_matrix(), src_real.lift_matrix())


def _check_same_subquotient(r1: Realization, r2: Realization):
    for v in r1.sub:
        if not r2.contains(v):
            raise AffSpaceError("realizations do not share the subspace")
    for v in r2.sub:
        if not r1.contains(v):
            raise AffSpaceError("realizations do not share the subspace")
    q1 = la.rank(list(map(list, r1.quot))) if r1.quot else 0
    both = list(map(list, r1.quot + r2.quot))
    if both and not (la.rank(both) == q1 == (la.rank(list(map(list, r2.quot))) if r2.quot else 0)):
        raise AffSpaceError("realizations do not share the quotient")


def _product_points(a: HullSpace, b: HullSpace) -> list[Vector]:
    pa, pb = a.affine_basis(), b.affine_basis()
    pts = [pa[i] + pb[0] for i in range(len(pa))] + [pa[0] + pb[k] for k in range(1, len(pb))]
    return [tuple(p) for p in pts]


def _sum_points(a: HullSpace, b: HullSpace) -> list[Vector]:
    za = tuple(Fraction(0) for _ in range(a.hull_dim))
    zb = tuple(Fraction(0) for _ in range(b.hull_dim))
    return [tuple(p) + zb for p in a.affine_basis()] + [za + tuple(q) for q in b.affine_basis()]


def iso_hull_product(a: HullSpace, b: HullSpace) -> IsoWitness:
    """hull(A1 x A2) ~ hull(A1) x_cv hull(A2)."""
    a, b = _plain(a), _plain(b)
    pts = _product_points(a, b)
    lhs = _free_hull(pts, f"hull({a.label}x{b.label})")
    rhs = cv_times(_cospecial(a), _cospecial(b))
    fwd = la.columns([rhs.realization.coords(p) for p in pts])
    # a vector of the kernel is a unique combination of the basis points
    P = _points_matrix(pts)
    bwd_cols = []
    for j in range(rhs.space.hull_dim):
        w = rhs.realization.lift(la.unit(rhs.space.hull_dim, j))
        bwd_cols.append(la.solve(P, w))
    return _witness("hull_product", lhs, _as_affine(rhs.space), fwd, la.columns(bwd_cols))


def iso_hull_sum(a: HullSpace, b: HullSpace) -> IsoWitness:
    """hull(A1 + A2) ~ hull(A1) +_cv hull(A2)."""
    a, b = _plain(a), _plain(b)
    pts = _sum_points(a, b)
    lhs = _free_hull(pts, f"hull({a.label}+{b.label})")
    rhs = cv_oplus(_cospecial(a), _cospecial(b))
    fwd = la.columns([rhs.realization.coords(p) for p in pts])
    P = _points_matrix(pts)
    bwd_cols = [la.solve(P, rhs.realization.lift(la.unit(rhs.space.hull_dim, j)))
                for j in range(rhs.space.hull_dim)]
    return _witness("hull_sum", lhs, _as_affine(rhs.space), fwd, la.columns(bwd_cols))


def iso_dual_product(a: HullSpace, b: HullSpace) -> IsoWitness:
    """(A1 x A2)^dag ~ A1^dag +_sv A2^dag via [(psi1, psi2)] -> psi1(a1) + psi2(a2)."""
    a, b = _plain(a), _plain(b)
    pts = _product_points(a, b)
    lhs = vector_dual(_free_hull(pts, "hull"))
    rhs = sv_oplus(vector_dual(a), vector_dual(b))
    # forward: values of psi1(a_j) + psi2(b_j) at the basis points of the product
    P = _points_matrix(pts)
    fwd = la.matmul(la.transpose(P), rhs.realization.lift_matrix())
    # backward: f -> psi1(a) = f(a, b0), psi2(b) = f(a0, b) - f(a0, b0)
    pa, pb = a.affine_basis(), b.affine_basis()
    na = len(pa)
    bwd_cols = []
    for j in range(lhs.hull_dim):
        f = la.unit(lhs.hull_dim, j)

        def value(pt, f=f):
            coeffs = la.solve(P, pt)
            return la.dot(coeffs, f)

        psi1 = la.solve(la.transpose(la.columns(pa)), [value(tuple(p) + tuple(pb[0])) for p in pa])
        f00 = value(tuple(pa[0]) + tuple(pb[0]))
        psi2 = la.solve(la.transpose(la.columns(pb)), [value(tuple(pa[0]) + tuple(q)) - f00 for q in pb])
        bwd_cols.append(rhs.realization.coords(tuple(psi1) + tuple(psi2)))
    del na
    return _witness("dual_product", rhs.space, lhs, fwd, la.columns(bwd_cols))


def iso_dual_sum(a: HullSpace, b: HullSpace) -> IsoWitness:
    """(A1 + A2)^dag ~ A1^dag x_sv A2^dag via f -> (f|A1, f|A2)."""
    a, b = _plain(a), _plain(b)
    pts = _sum_points(a, b)
    lhs = vector_dual(_free_hull(pts, "hull"))
    rhs = sv_times(vector_dual(a), vector_dual(b))
    P = _points_matrix(pts)
    fwd = la.matmul(la.transpose(P), rhs.realization.lift_matrix())
    pa, pb = a.affine_basis(), b.affine_basis()
    bwd_cols = []
    for j in range(lhs.hull_dim):
        vals = la.unit(lhs.hull_dim, j)
        psi1 = la.solve(la.transpose(la.columns(pa)), vals[: len(pa)])
        psi2 = la.solve(la.transpose(la.columns(pb)), vals[len(pa):])
        bwd_cols.append(rhs.realization.coords(tuple(psi1) + tuple(psi2)))
    return _witness("dual_sum", rhs.space, lhs, fwd, la.columns(bwd_cols))


def _dual_side(c: Construction) -> tuple[HullSpace, Realization]:
    return special_dual(c.space), c.realization.dual()


def _ambient_identity_witness(name: str, lhs: HullSpace, lreal: Realization,
                              rhs: HullSpace, rreal: Realization) -> IsoWitness:
    _check_same_subquotient(lreal, rreal)
    fwd = _identity_map(rreal, lreal)
    bwd = _identity_map(lreal, rreal)
    return _witness(name, rhs, lhs, fwd, bwd)


def iso_special_dual_tensor(a: HullSpace, b: HullSpace) -> IsoWitness:
    """(A1 [x] A2)^# ~ A1^# [x] A2^#; [(psi1,psi2)] acts by psi1(a1) + psi2(a2)."""
    lhs, lreal = _dual_side(boxtimes(a, b))
    rc = boxtimes(special_dual(a), special_dual(b))
    return _ambient_identity_witness("special_dual_tensor", lhs, lreal, rc.space, rc.realization)


def iso_special_dual_product(a: HullSpace, b: HullSpace) -> IsoWitness:
    lhs, lreal = _dual_side(sa_times(a, b))
    rc = sa_oplus(special_dual(a), special_dual(b))
    return _ambient_identity_witness("special_dual_product", lhs, lreal, rc.space, rc.realization)


def iso_special_dual_sum(a: HullSpace, b: HullSpace) -> IsoWitness:
    lhs, lreal = _dual_side(sa_oplus(a, b))
    rc = sa_times(special_dual(a), special_dual(b))
    return _ambient_identity_witness("special_dual_sum", lhs, lreal, rc.space, rc.realization)


def iso_specialization_dual(a: HullSpace) -> IsoWitness:
    """S_A^# ~ A^dag (viewed as special affine) via psi -> (a -> psi(a, 0))."""
    a = _plain(a)
    n = a.hull_dim
    sc = specialization(a)
    lhs = special_dual(sc.space)
    lreal = sc.realization.dual()
    rhs = as_special_affine(vector_dual(a))
    # ambient dual of K^{n+2}: g = (g_w, g_r, g_c) -> (g_w + g_c * one, g_r)
    amb = la.zeros(n + 1, n + 2)
    for i in range(n):
        amb[i][i] = Fraction(1)
        amb[i][n + 1] = a.one[i]
    amb[n][n] = Fraction(1)
    fwd = la.matmul(amb, lreal.lift_matrix())
    # backward: (psi, t) -> g = (psi, t, 0)
    back_amb = la.zeros(n + 2, n + 1)
    for i in range(n):
        back_amb[i][i] = Fraction(1)
    back_amb[n][n] = Fraction(1)
    bwd = la.matmul(lreal.coord_matrix(), back_amb)
    return _witness("specialization_dual", lhs, rhs, fwd, bwd)


def iso_specialization_hull(a: HullSpace) -> IsoWitness:
    """hull(S_A) ~ S of the hull: (w, r, c) -> (w, r), inverse (w, r) -> (w, r, one(w))."""
    a = _plain(a)
    n = a.hull_dim
    sc = specialization(a)
    lhs = HullSpace(sc.space.hull_dim, SPECIAL_VECTOR, v0=sc.space.v0, label="hull(S_A)")
    rhs = HullSpace(n + 1, SPECIAL_VECTOR, v0=la.unit(n + 1, n), label="S(hull A)")
    amb = la.zeros(n + 1, n + 2)
    for i in range(n + 1):
        amb[i][i] = Fraction(1)
    fwd = la.matmul(amb, sc.realization.lift_matrix())
    back_amb = la.zeros(n + 2, n + 1)
    for i in range(n + 1):
        back_amb[i][i] = Fraction(1)
    for i in range(n):
        back_amb[n + 1][i] = a.one[i]
    bwd = la.matmul(sc.realization.coord_matrix(), back_amb)
    return _witness("specialization_hull", lhs, rhs, fwd, bwd)


def iso_specialization_sum(a: HullSpace, b: HullSpace) -> IsoWitness:
    """S_{A1 + A2} ~ S_{A1} +_sa S_{A2}, induced by the embeddings A_i -> A1 + A2."""
    a, b = _plain(a), _plain(b)
    na, nb = a.hull_dim, b.hull_dim
    s1, s2 = specialization(a), specialization(b)
    rc = sa_oplus(s1.space, s2.space)
    sum_space = a_oplus(a, b).space  # hull K^{na+nb}, one = (one_a, one_b)
    lc = specialization(sum_space)
    lhs = lc.space
    # ambient of rc: coords of hull(S1) + hull(S2); lift each part to (w_i, r, c)
    sizes = [s1.space.hull_dim, s2.space.hull_dim]
    cols = []
    for j in range(rc.space.hull_dim):
        x = rc.realization.lift(la.unit(rc.space.hull_dim, j))
        x1, x2 = x[: sizes[0]], x[sizes[0]:]
        w1 = s1.realization.lift(x1)
        w2 = s2.realization.lift(x2)
        img = (tuple(w1[:na]) + tuple(w2[:nb]),
               w1[na] + w2[nb], w1[na + 1] + w2[nb + 1])
        cols.append(lc.realization.coords(img[0] + (img[1], img[2])))
    fwd = la.columns(cols)
    bcols = []
    for j in range(lhs.hull_dim):
        y = lc.realization.lift(la.unit(lhs.hull_dim, j))
        w1, w2, r = y[:na], y[na:na + nb], y[na + nb]
        x1 = s1.realization.coords(tuple(w1) + (r, la.dot(a.one, w1)))
        x2 = s2.realization.coords(tuple(w2) + (Fraction(0), la.dot(b.one, w2)))
        bcols.append(rc.realization.coords(tuple(x1) + tuple(x2)))
    return _witness("specialization_sum", rc.space, lhs, fwd, la.columns(bcols))


def iso_specialization_product(a: HullSpace, b: HullSpace) -> IsoWitness:
    """S_{A1 x A2} ~ S_{A1} [x] S_{A2}: [(a1,r1),(a2,r2)] -> ((a1,a2), r1 + r2)."""
    a, b = _plain(a), _plain(b)
    na, nb = a.hull_dim, b.hull_dim
    s1, s2 = specialization(a), specialization(b)
    rc = boxtimes(s1.space, s2.space)
    prod = a_times(a, b)
    lc = specialization(prod.space)
    lhs = lc.space
    sizes = [s1.space.hull_dim, s2.space.hull_dim]
    cols = []
    for j in range(rc.space.hull_dim):
        x = rc.realization.lift(la.unit(rc.space.hull_dim, j))
        w1 = s1.realization.lift(x[: sizes[0]])
        w2 = s2.realization.lift(x[sizes[0]:])
        pair = prod.realization.coords(tuple(w1[:na]) + tuple(w2[:nb]))
        cols.append(lc.realization.coords(tuple(pair) + (w1[na] + w2[nb], w1[na + 1])))
    fwd = la.columns(cols)
    bcols = []
    for j in range(lhs.hull_dim):
        y = lc.realization.lift(la.unit(lhs.hull_dim, j))
        k = prod.space.hull_dim
        ww = prod.realization.lift(y[:k])
        r, c = y[k], y[k + 1]
        w1, w2 = ww[:na], ww[na:]
        x1 = s1.realization.coords(tuple(w1) + (r, c))
        x2 = s2.realization.coords(tuple(w2) + (Fraction(0), c))
        bcols.append(rc.realization.coords(tuple(x1) + tuple(x2)))
    return _witness("specialization_product", rc.space, lhs, fwd, la.columns(bcols))


def _cospecial(a: HullSpace) -> HullSpace:
    return HullSpace(a.hull_dim, COSPECIAL_VECTOR, one=a.one, label=a.label)


def _as_affine(c: HullSpace) -> HullSpace:
    return HullSpace(c.hull_dim, AFFINE, one=c.one, label=c.label)


THEOREMS = {
    "hull_product": iso_hull_product,
    "hull_sum": iso_hull_sum,
    "dual_product": iso_dual_product,
    "dual_sum": iso_dual_sum,
    "special_dual_tensor": iso_special_dual_tensor,
    "special_dual_product": iso_special_dual_product,
    "special_dual_sum": iso_special_dual_sum,
    "specialization_dual": iso_specialization_dual,
    "specialization_hull": iso_specialization_hull,
    "specialization_sum": iso_specialization_sum,
    "specialization_product": iso_specialization_product,
}


def verify_duality_theorem(name: str, *operands: HullSpace) -> IsoWitness:
    fn = THEOREMS.get(name)
    if fn is None:
        raise AffSpaceError(f"unknown theorem {name!r}")
    w = fn(*operands)
    if not w.check():
        raise AffSpaceError(f"theorem {name}: canonical map failed ({w.summary()})")
    return w


def random_affine(rng, dim: int, special: bool = False, label: str = "") -> HullSpace:
    """Random rational presentation: random non-zero covector and v0 in its kernel."""
    n = dim + 1
    while True:
        one = tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n))
        if not la.is_zero_vec(one):
            break
    if not special:
        return HullSpace(n, AFFINE, one=one, label=label)
    ker = la.nullspace([list(one)], n)
    while True:
        coeffs = [rng.randint(-2, 2) for _ in ker]
        v0 = tuple(Fraction(0) for _ in range(n))
        for c, k in zip(coeffs, ker):
            v0 = la.add(v0, la.scale(c, k))
        if not la.is_zero_vec(v0):
            return HullSpace(n, SPECIAL_AFFINE, one=one, v0=v0, label=label)


def random_affine_map(rng, a: HullSpace, b: HullSpace) -> AffMorphism:
    """Random hull map pulling one_b back to one_a (an affine map A -> B)."""
    # choose images of a's affine basis points inside B, extend linearly
    pts = a.affine_basis()
    imgs = []
    for _ in pts:
        p = b.base_point()
        for v in b.model_basis():
            p = la.add(p, la.scale(Fraction(rng.randint(-3, 3), rng.randint(1, 2)), v))
        imgs.append(p)
    P = la.columns(pts)
    M = la.matmul(la.columns(imgs), la.inverse(P))
    return AffMorphism.of(a, b, M)


__all__ = [name for name in dir() if not name.startswith("_")]
