"""Brute-force ground truth: lattice point counts, quasi-polynomial fits and E_L.

Nothing here touches generating functions, chambers or polynomial summation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, floor, gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg as la
from .lattice import Subspace
from .polytope import Simplex, hull_to_h, project_simplex
from .slices import fiber_volume_geometric, slice_problem

IntRow = Tuple[Tuple[int, ...], int]


def _int_row(a, b) -> IntRow:
    D = la.denominator_lcm(list(a) + [b])
    a = [int(x * D) for x in a]
    b = int(Fraction(b) * D)
    g = 0
    for x in a:
        g = gcd(g, x)
    g = gcd(g, abs(b)) if g else 0
    if g > 1:
        a = [x // g for x in a]
        b //= g
    return tuple(a), b


def _projection_levels(simplex: Simplex) -> List[List[IntRow]]:
    """levels[i] describes the projection onto the first i+1 coordinates (facets only)."""
    d = simplex.dim
    levels: List[List[IntRow]] = [[] for _ in range(d)]
    levels[d - 1] = sorted(set(_int_row(a, b) for a, b in simplex.facets()))
    for i in range(d - 1, 0, -1):
        rows = levels[i]
        pos = [r for r in rows if r[0][i] > 0]
        neg = [r for r in rows if r[0][i] < 0]
        cand = set(_int_row(a[:i], b) for a, b in rows if a[i] == 0)
        for (a1, b1), (a2, b2) in product(pos, neg):
            f1, f2 = -a2[i], a1[i]
            a = [f1 * x + f2 * y for x, y in zip(a1[:i], a2[:i])]
            if any(a):
                cand.add(_int_row(a, f1 * b1 + f2 * b2))
        # keep only facets of the projection, using the projected vertices
        verts = [v[:i] for v in simplex.vertices]
        keep = []
        for a, b in sorted(cand):
            tight = [v for v in verts if la.dot(a, v) == b]
            if len(tight) >= i and la.affine_rank(tight) == i - 1:
                keep.append((a, b))
        levels[i - 1] = keep
    return levels


def count_points(simplex: Simplex, n: int = 1) -> int:
    """|n * simplex ∩ Z^d| by exact enumeration of projections."""
    d = simplex.dim
    levels = _projection_levels(simplex)
    span = max(abs(x) for v in simplex.vertices for x in v) * n + 2
    amax = max(abs(x) for lev in levels for a, _ in lev for x in a)
    bmax = max(abs(b) for lev in levels for _, b in lev) * n
    dtype = np.int64 if (amax * span * d + bmax) < 2 ** 60 else object
    X = np.zeros((1, 0), dtype=dtype)
    for i in range(d):
        rows = levels[i]
        lo = None
        hi = None
        for a, b in rows:
            if a[i] == 0:
                continue
            s = np.full(X.shape[0], n * b, dtype=dtype)
            if i:
                s = s - X @ np.array(a[:i], dtype=dtype)
            if a[i] > 0:
                bound = s // a[i]
                hi = bound if hi is None else np.minimum(hi, bound)
            else:
                bound = -(s // (-a[i]))
                lo = bound if lo is None else np.maximum(lo, bound)
        cnt = np.maximum(hi - lo + 1, 0)
        if i == d - 1:
            return int(cnt.sum())
        keep = cnt > 0
        X, lo, cnt = X[keep], lo[keep], cnt[keep].astype(np.int64)
        total = int(cnt.sum())
        if total == 0:
            return 0
        idx = np.repeat(np.arange(X.shape[0]), cnt)
        starts = np.repeat(np.cumsum(cnt) - cnt, cnt)
        col = lo[idx] + (np.arange(total) - starts).astype(dtype)
        X = np.concatenate([X[idx], col.reshape(-1, 1)], axis=1)
    return 0


def count_points_naive(simplex: Simplex, n: int = 1) -> int:
    """Box enumeration with the H-description (only for tiny cases)."""
    d = simplex.dim
    rows = [(a, b * n) for a, b in simplex.facets()]
    box = [range(floor(min(v[i] for v in simplex.vertices) * n),
                 ceil(max(v[i] for v in simplex.vertices) * n) + 1) for i in range(d)]
    return sum(1 for z in product(*box) if all(la.dot(a, z) <= b for a, b in rows))


@dataclass
class FitResult:
    t: int
    values: Dict[int, List[Fraction]]  # residue n -> [e_0(n), ..., e_d(n)]

    def coefficient(self, i: int, n: int) -> Fraction:
        r = (n - 1) % self.t + 1
        return self.values[r][i]

    def evaluate(self, m: int) -> Fraction:
        r = (m - 1) % self.t + 1
        return sum((c * Fraction(m) ** i for i, c in enumerate(self.values[r])), Fraction(0))


def fit_quasipolynomial(simplex: Simplex, k: Optional[int] = None,
                        residues: Optional[Sequence[int]] = None) -> FitResult:
    """Interpolate counts at m = n, n+t, ..., n+dt for each residue n in 1..t.

    `k` is accepted for symmetry with the driver; all coefficients are fitted.
    """
    d = simplex.dim
    t = la.denominator_lcm(x for v in simplex.vertices for x in v)
    if residues is None:
        residues = range(1, t + 1)
    values = {}
    for r in sorted(set((n - 1) % t + 1 for n in residues)):
        ms = [r + s * t for s in range(d + 1)]
        counts = [count_points(simplex, m) for m in ms]
        A = [[Fraction(m) ** i for i in range(d + 1)] for m in ms]
        values[r] = list(la.solve(A, counts))
    return FitResult(t, values)


def el_bruteforce(simplex: Simplex, L: Subspace) -> Fraction:
    """Sum of normalized fiber volumes over the projected lattice points of the simplex."""
    if L.dim == 0:
        return simplex.volume()
    prob = slice_problem(simplex, L)
    Q = project_simplex(simplex, L)
    j = L.dim
    verts = Q.vertices
    box = [range(floor(min(v[i] for v in verts)), ceil(max(v[i] for v in verts)) + 1)
           for i in range(j)]
    H = hull_to_h(Q)
    total = Fraction(0)
    for m in product(*box):
        if H.contains(m):
            total += fiber_volume_geometric(prob, m)
    return total
