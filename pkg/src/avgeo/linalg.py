"""Exact linear algebra over the rationals.

Matrices are lists of rows of ``Fraction``.  Vectors are tuples.  Row
reduction always picks the leftmost available pivot, so bases produced
here are canonical for a given input.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple
Matrix = list


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def vec(xs: Iterable) -> Vector:
    return tuple(frac(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return [list(vec(r)) for r in rows]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def shape(a: Matrix, ncols: int | None = None) -> tuple[int, int]:
    if not a:
        return 0, (ncols or 0)
    return len(a), len(a[0])


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    m, n = shape(a, ncols)
    return [[a[i][j] for i in range(m)] for j in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    m = len(a)
    k = len(b)
    n = len(b[0]) if b else 0
    if m and len(a[0]) != k:
        raise ValueError("shape mismatch in matmul")
    out = zeros(m, n)
    for i in range(m):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(n):
                    oi[j] += c * bt[j]
    return out


def matvec(a: Matrix, v: Sequence) -> Vector:
    return tuple(sum((r[j] * v[j] for j in range(len(v))), Fraction(0)) for r in a)


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise ValueError("length mismatch in dot")
    return sum((frac(a) * frac(b) for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Sequence) -> Vector:
    c = frac(c)
    return tuple(c * a for a in u)


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def is_zero_vec(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    r = [list(row) for row in a]
    m = len(r)
    n = len(r[0]) if r else 0
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        piv = next((i for i in range(row, m) if r[i][col] != 0), None)
        if piv is None:
            continue
        r[row], r[piv] = r[piv], r[row]
        p = r[row][col]
        r[row] = [x / p for x in r[row]]
        for i in range(m):
            if i != row and r[i][col] != 0:
                c = r[i][col]
                r[i] = [x - c * y for x, y in zip(r[i], r[row])]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1]) if a else 0


def nullspace(a: Matrix, ncols: int | None = None) -> list[Vector]:
    """Basis of {x : a x = 0}, one vector per free column, left to right."""
    n = len(a[0]) if a else (ncols or 0)
    if not a:
        return [unit(n, j) for j in range(n)]
    r, pivots = rref(a)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -r[i][f]
        basis.append(tuple(x))
    return basis


def independent_subset(vectors: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal independent subset, greedy from the left."""
    if not vectors:
        return []
    cols = transpose([list(v) for v in vectors])
    return rref(cols)[1]


def span_basis(vectors: Sequence[Sequence]) -> list[Vector]:
    return [tuple(vectors[i]) for i in independent_subset(vectors)]


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(a[i]) + list(identity(n)[i]) for i in range(n)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in r]


def solve(a: Matrix, b: Sequence) -> Vector | None:
    """One solution of a x = b (free variables zero), or None."""
    m = len(a)
    n = len(a[0]) if a else 0
    aug = [list(a[i]) + [frac(b[i])] for i in range(m)]
    r, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, pc in enumerate(pivots):
        x[pc] = r[i][n]
    return tuple(x)


def complete_basis(vectors: Sequence[Sequence], n: int) -> list[Vector]:
    """Extend independent ``vectors`` to a basis of K^n with unit vectors."""
    cand = [tuple(v) for v in vectors] + [unit(n, j) for j in range(n)]
    idx = independent_subset(cand)
    if idx[: len(vectors)] != list(range(len(vectors))):
        raise ValueError("input vectors are dependent")
    return [cand[i] for i in idx]


def columns(vectors: Sequence[Sequence]) -> Matrix:
    """Matrix whose columns are the given vectors."""
    return transpose([list(v) for v in vectors])


def is_identity(a: Matrix) -> bool:
    return all(a[i][j] == (1 if i == j else 0) for i in range(len(a)) for j in range(len(a[i])))


def annihilator(vectors: Sequence[Sequence], n: int) -> list[Vector]:
    """Basis of covectors vanishing on all ``vectors``."""
    if not vectors:
        return [unit(n, j) for j in range(n)]
    return nullspace([list(v) for v in vectors], n)
