"""Integer lattices and lattice subspaces: HNF, LLL, saturation, projections."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Tuple

from . import linalg as la

IntVec = Tuple[int, ...]


class DegenerateWarning(UserWarning):
    """Raised as a warning when an input is silently degenerate (e.g. dependent columns)."""


def _as_int_columns(cols) -> List[List[int]]:
    out = []
    for c in cols:
        row = []
        for x in c:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError("hnf needs integer entries")
                x = x.numerator
            elif not isinstance(x, int):
                raise ValueError("hnf needs integer entries")
            row.append(int(x))
        out.append(row)
    return out


def hnf_with_transform(cols, nrows: Optional[int] = None):
    """Column HNF of the matrix with the given columns.

    Returns (H, U, pivot_rows) where H is the list of nonzero HNF columns and
    U (a list of n columns) is unimodular with A U = [H | 0]. The trailing
    columns of U therefore span the integer kernel of A.
    """
    A = _as_int_columns(cols)
    n = len(A)
    if nrows is None:
        nrows = len(A[0]) if A else 0
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    r = 0
    pivots = []
    for i in range(nrows):
        if r == n:
            break
        while True:
            nz = [c for c in range(r, n) if A[c][i] != 0]
            if not nz:
                break
            best = min(nz, key=lambda c: abs(A[c][i]))
            A[r], A[best] = A[best], A[r]
            U[r], U[best] = U[best], U[r]
            done = True
            for c in range(r + 1, n):
                if A[c][i] != 0:
                    q = A[c][i] // A[r][i]
                    A[c] = [a - q * b for a, b in zip(A[c], A[r])]
                    U[c] = [a - q * b for a, b in zip(U[c], U[r])]
                    if A[c][i] != 0:
                        done = False
            if done:
                break
        if A[r][i] == 0:
            continue
        if A[r][i] < 0:
            A[r] = [-a for a in A[r]]
            U[r] = [-a for a in U[r]]
        p = A[r][i]
        for c in range(r):
            q = A[c][i] // p
            if q:
                A[c] = [a - q * b for a, b in zip(A[c], A[r])]
                U[c] = [a - q * b for a, b in zip(U[c], U[r])]
        pivots.append(i)
        r += 1
    H = [tuple(c) for c in A[:r]]
    return H, [tuple(c) for c in U], pivots


def hnf(cols) -> Tuple[IntVec, ...]:
    """Canonical column-HNF basis of the integer span of the given columns."""
    cols = list(cols)
    if not cols:
        return ()
    H, _, _ = hnf_with_transform(cols)
    return tuple(H)


def integer_kernel(rows, ncols: int) -> List[IntVec]:
    """Basis of {x in Z^n : A x = 0} for an integer matrix given by rows."""
    rows = [list(r) for r in rows]
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    cols = [tuple(r[j] for r in rows) for j in range(ncols)]
    H, U, _ = hnf_with_transform(cols, nrows=len(rows))
    return U[len(H):]


def lll_reduce(basis, delta: Fraction = Fraction(3, 4)) -> Tuple[IntVec, ...]:
    """LLL-reduce the integer lattice basis given by columns (exact arithmetic)."""
    b = [list(c) for c in _as_int_columns(basis)]
    n = len(b)
    if n == 0:
        return ()
    if la.rank(b) < n:
        raise ValueError("lll_reduce needs linearly independent columns")

    def gso():
        bstar, mu, norms = [], [[Fraction(0)] * n for _ in range(n)], []
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = la.dot(b[i], bstar[j]) / norms[j]
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
            norms.append(la.dot(v, v))
        return mu, norms

    mu, norms = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                for l in range(j + 1):
                    mu[k][l] -= q * (mu[j][l] if l < j else 1)
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, norms = gso()
            k = max(k - 1, 1)
    return tuple(tuple(c) for c in b)


def gram_det(basis) -> Fraction:
    """det(B^T B) for the columns of B; 0 (with a warning) for dependent columns."""
    cols = [la.vec(c) for c in basis]
    if not cols:
        return Fraction(1)
    G = [[la.dot(u, v) for v in cols] for u in cols]
    g = la.det(G)
    if g == 0:
        warnings.warn("gram_det: dependent columns", DegenerateWarning, stacklevel=2)
    return g


@dataclass(frozen=True)
class Subspace:
    """A lattice subspace stored by the canonical HNF basis of its integer points."""
    ambient_dim: int
    sat_basis: Tuple[IntVec, ...]

    @property
    def dim(self) -> int:
        return len(self.sat_basis)

    def contains(self, v) -> bool:
        if all(x == 0 for x in v):
            return True
        if self.dim == 0:
            return False
        return la.rank(list(self.sat_basis) + [tuple(v)]) == self.dim

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(c) for c in self.sat_basis)

    def key(self):
        return (self.ambient_dim, self.sat_basis)


def zero_subspace(d: int) -> Subspace:
    return Subspace(d, ())


def full_subspace(d: int) -> Subspace:
    return Subspace(d, hnf([tuple(int(i == j) for j in range(d)) for i in range(d)]))


def saturate(span, ambient_dim: Optional[int] = None) -> Subspace:
    """Canonical Subspace for the rational span of the given column vectors."""
    span = [la.vec(c) for c in span]
    if ambient_dim is None:
        if not span:
            raise ValueError("ambient dimension needed for an empty spanning set")
        ambient_dim = len(span[0])
    d = ambient_dim
    span = [c for c in span if any(span_x != 0 for span_x in c)]
    if not span:
        return zero_subspace(d)
    normals = la.nullspace(span, d)
    if not normals:
        return full_subspace(d)
    rows = [la.primitive(nv) for nv in normals]
    return Subspace(d, hnf(integer_kernel(rows, d)))


def orth_complement(L: Subspace) -> Subspace:
    d = L.ambient_dim
    if L.dim == 0:
        return full_subspace(d)
    return saturate(la.nullspace(list(L.sat_basis), d), d)


def intersect(L1: Subspace, L2: Subspace) -> Subspace:
    if L1.ambient_dim != L2.ambient_dim:
        raise ValueError("ambient dimensions differ")
    d = L1.ambient_dim
    normals = list(orth_complement(L1).sat_basis) + list(orth_complement(L2).sat_basis)
    if not normals:
        return full_subspace(d)
    return saturate(la.nullspace(normals, d), d)


@dataclass(frozen=True)
class Lattice:
    """A lattice in R^d given by rational basis columns."""
    ambient_dim: int
    basis: Tuple[Tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def denominator(self) -> int:
        return la.denominator_lcm(x for c in self.basis for x in c)

    @property
    def int_basis(self) -> Tuple[IntVec, ...]:
        D = self.denominator
        return tuple(tuple(int(x * D) for x in c) for c in self.basis)

    def coordinates(self, x) -> Optional[Tuple[Fraction, ...]]:
        """Coordinates of x in this basis, or None when x is outside the span."""
        rows = la.transpose(self.basis)
        c = la.solve(rows, la.vec(x))
        if c is None:
            return None
        if la.matvec(rows, c) != la.vec(x):
            return None
        return c

    def __contains__(self, x) -> bool:
        c = self.coordinates(x)
        return c is not None and all(ci.denominator == 1 for ci in c)


def project_lattice(L: Subspace) -> Lattice:
    """Basis of the orthogonal projection of Z^d onto L."""
    if L.dim == 0:
        raise ValueError("projection onto the zero subspace")
    d = L.ambient_dim
    S = [la.vec(c) for c in L.sat_basis]
    Ginv = la.inverse([[la.dot(u, v) for v in S] for u in S])
    # coordinates of pr(e_i) in the basis S are G^{-1} S^T e_i
    coords = [la.matvec(Ginv, [c[i] for c in S]) for i in range(d)]
    D = la.denominator_lcm(x for c in coords for x in c)
    H = hnf([tuple(int(x * D) for x in c) for c in coords])
    basis = []
    for h in H:
        y = [Fraction(x, D) for x in h]
        basis.append(tuple(sum((y[k] * S[k][i] for k in range(len(S))), Fraction(0))
                           for i in range(d)))
    return Lattice(d, tuple(basis))


def span_contains_integer(cols, v) -> bool:
    """Is the integer vector v in the integer span of cols?"""
    cols = [tuple(c) for c in cols]
    if all(x == 0 for x in v):
        return True
    if not cols:
        return False
    H = hnf(cols)
    c = la.solve(la.transpose(H), la.vec(v))
    if c is None or la.matvec(la.transpose(H), c) != la.vec(v):
        return False
    return all(x.denominator == 1 for x in c)


def content(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g
