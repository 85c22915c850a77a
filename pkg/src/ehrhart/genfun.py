"""Short rational generating functions of lattice points in polytopes.

Closed polytopes go through Brion's theorem on vertex tangent cones, with
each cone split into signed unimodular cones in the dual space (so that
lower-dimensional pieces can be dropped). Relatively open polytopes use the
same cones with the interior lattice point of each unimodular cone.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import ceil, floor, gcd
from typing import Dict, List, Optional, Tuple

from . import linalg as la
from .lattice import hnf, hnf_with_transform
from .polytope import VPolytope, _edges, _facets_of_points, irredundant, pulling_triangulation

IntVec = Tuple[int, ...]
Dens = Tuple[Tuple[IntVec, int], ...]


@dataclass(frozen=True)
class SignedCone:
    apex: Tuple[Fraction, ...]
    generators: Tuple[IntVec, ...]
    sign: int = 1


@dataclass(frozen=True)
class Term:
    """coef * x^exponent / prod (1 - x^b)^g over (b, g) in dens."""
    coef: Fraction
    exponent: IntVec
    dens: Dens

    @property
    def multiplicity(self) -> int:
        return sum(g for _, g in self.dens)


def _merge_dens(pairs) -> Dens:
    acc: Dict[IntVec, int] = {}
    for b, g in pairs:
        acc[b] = acc.get(b, 0) + g
    return tuple(sorted(acc.items()))


@dataclass(frozen=True)
class ShortRationalFunction:
    dim: int
    terms: Tuple[Term, ...] = ()

    @staticmethod
    def build(dim: int, raw) -> "ShortRationalFunction":
        """Merge like terms of (coef, exponent, dens) triples and sort canonically."""
        acc: Dict[Tuple[IntVec, Dens], Fraction] = {}
        for coef, a, dens in raw:
            key = (tuple(a), _merge_dens(dens))
            acc[key] = acc.get(key, Fraction(0)) + Fraction(coef)
        terms = tuple(Term(c, a, dn) for (a, dn), c in sorted(acc.items()) if c != 0)
        return ShortRationalFunction(dim, terms)

    def __add__(self, other: "ShortRationalFunction") -> "ShortRationalFunction":
        raw = [(t.coef, t.exponent, t.dens) for t in self.terms + other.terms]
        return ShortRationalFunction.build(self.dim, raw)

    def to_json(self) -> str:
        data = {"dim": self.dim,
                "terms": [{"coef": str(t.coef),
                           "exponent": [str(x) for x in t.exponent],
                           "denominators": [{"b": [str(x) for x in b], "mult": str(g)}
                                            for b, g in t.dens]}
                          for t in self.terms]}
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(s: str) -> "ShortRationalFunction":
        data = json.loads(s)
        raw = [(Fraction(t["coef"]), tuple(int(x) for x in t["exponent"]),
                tuple((tuple(int(x) for x in dn["b"]), int(dn["mult"])) for dn in t["denominators"]))
               for t in data["terms"]]
        return ShortRationalFunction.build(int(data["dim"]), raw)


# ------------------------------------------------ signed decomposition


def _exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    assert r == 0
    return q


def _lll_fast(basis: List[List[int]]) -> List[List[int]]:
    """LLL with floating Gram-Schmidt; only integer column operations touch the basis."""
    b = [list(c) for c in basis]
    n = len(b)

    def gso():
        bstar, mu, norms = [], [[0.0] * n for _ in range(n)], []
        for i in range(n):
            v = [float(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = sum(x * y for x, y in zip(b[i], bstar[j])) / norms[j]
                v = [x - mu[i][j] * y for x, y in zip(v, bstar[j])]
            bstar.append(v)
            norms.append(sum(x * x for x in v))
        return mu, norms

    mu, norms = gso()
    k = 1
    steps = 0
    while k < n and steps < 10000:
        steps += 1
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                mu, norms = gso()
        if norms[k] >= (0.75 - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, norms = gso()
            k = max(k - 1, 1)
    return b


def _short_vector(U: List[IntVec], adj, D: int) -> IntVec:
    """Primitive integer w = U alpha with 0 < max|alpha_i| < 1.

    The alphas form the lattice generated by the columns of U^{-1}; we search
    small combinations of an LLL-reduced basis of N U^{-1} (N = |det U|).
    """
    n = len(U)
    N = abs(D)
    sgn = 1 if D > 0 else -1
    # columns of N U^{-1} = sgn * adj(U) where U has columns U[j]
    cols = [[sgn * adj[i][j] for i in range(n)] for j in range(n)]
    red = _lll_fast(cols) if n > 1 else cols
    best = None
    c = 1
    while best is None:
        for coeffs in product(range(-c, c + 1), repeat=n):
            if not any(coeffs):
                continue
            z = [sum(k * r[i] for k, r in zip(coeffs, red)) for i in range(n)]
            m = max(abs(x) for x in z)
            if m < N and (best is None or m < best[0]):
                best = (m, z)
        if c >= 3 and best is None:
            raise RuntimeError("no short vector found")
        c += 1
    z = best[1]
    w = [_exact_div(sum(U[j][i] * z[j] for j in range(n)), N) for i in range(n)]
    g = 0
    for x in w:
        g = gcd(g, x)
    return tuple(x // g for x in w)


@lru_cache(maxsize=None)
def _decompose(gens: Tuple[IntVec, ...]) -> Tuple[Tuple[int, Tuple[IntVec, ...]], ...]:
    """Signed unimodular cones whose indicators sum to cone(gens) modulo lower-dimensional cones."""
    U = list(gens)
    n = len(U)
    # matrix with the generators as columns
    M = [[U[j][i] for j in range(n)] for i in range(n)]
    adj, D = la.int_adjugate(M)
    if D == 0:
        raise ValueError("generators are linearly dependent")
    if abs(D) == 1:
        return ((1, gens),)
    w = _short_vector(U, adj, D)
    # D * alpha = adj w; only the signs matter
    alpha = [sum(adj[i][k] * w[k] for k in range(n)) * (1 if D > 0 else -1) for i in range(n)]
    if not any(a > 0 for a in alpha):
        w = tuple(-x for x in w)
        alpha = [-a for a in alpha]
    out = []
    for i in range(n):
        if alpha[i] == 0:
            continue
        s = 1 if alpha[i] > 0 else -1
        sub = tuple(w if j == i else U[j] for j in range(n))
        for s2, g2 in _decompose(sub):
            out.append((s * s2, g2))
    return tuple(out)


def unimodular_decompose(cone: SignedCone) -> List[SignedCone]:
    gens = tuple(la.primitive(g) for g in cone.generators)
    n = len(gens)
    if n == 0 or any(len(g) != n for g in gens):
        raise ValueError("need a full-dimensional simplicial cone")
    if la.rank(gens) < n:
        raise ValueError("cone is not simplicial")
    return [SignedCone(cone.apex, g, cone.sign * s) for s, g in _decompose(gens)]


@lru_cache(maxsize=None)
def _dual_unimodular(dual_gens: Tuple[IntVec, ...]) -> Tuple[Tuple[int, Tuple[IntVec, ...]], ...]:
    """Decompose a simplicial dual cone and return the primal unimodular generators."""
    out = []
    for s, g in _decompose(dual_gens):
        # primal of cone(g) is cone of columns of (G^T)^{-1}
        adj, D = la.int_adjugate([list(r) for r in g])  # rows of g are the columns of G^T
        prim = tuple(tuple(D * adj[i][j] for i in range(len(g))) for j in range(len(g)))
        out.append((s, prim, g))
    return tuple(out)


# ------------------------------------------------------ affine lattices


@dataclass(frozen=True)
class AffineLattice:
    base: IntVec
    directions: Tuple[IntVec, ...]


def affine_lattice_from_equations(rows, rhs, n: int) -> Optional[AffineLattice]:
    """Integer solutions of rows . y = rhs as base + integer span of directions."""
    rows = [la.vec(r) for r in rows]
    rhs = la.vec(rhs)
    if not rows:
        return AffineLattice(tuple([0] * n), hnf([tuple(int(i == j) for j in range(n)) for i in range(n)]))
    irows, ic = [], []
    for r, c in zip(rows, rhs):
        D = la.denominator_lcm(list(r) + [c])
        irows.append([int(x * D) for x in r])
        ic.append(int(c * D))
    cols = [tuple(r[j] for r in irows) for j in range(n)]
    H, U, piv = hnf_with_transform(cols, nrows=len(irows))
    # solve H z = c by forward substitution along the pivot rows
    z = []
    for k, p in enumerate(piv):
        s = ic[p] - sum(H[t][p] * z[t] for t in range(k))
        if s % H[k][p] != 0:
            return None
        z.append(s // H[k][p])
    for i in range(len(irows)):
        if sum(H[t][i] * z[t] for t in range(len(H))) != ic[i]:
            return None
    base = tuple(sum(U[t][i] * z[t] for t in range(len(H))) for i in range(n))
    kernel = U[len(H):]
    return AffineLattice(base, hnf(kernel) if kernel else ())


def affine_hull_lattice(points) -> Optional[AffineLattice]:
    """Lattice points of the affine hull of the given rational points, or None."""
    pts = [la.vec(p) for p in points]
    n = len(pts[0])
    p0 = pts[0]
    diffs = [la.sub(p, p0) for p in pts[1:]]
    if not diffs or la.rank(diffs) == 0:
        normals = la.nullspace([], n)
    else:
        normals = la.nullspace(diffs, n)
    rhs = [la.dot(v, p0) for v in normals]
    return affine_lattice_from_equations(normals, rhs, n)


# ----------------------------------------------------- brion's theorem


def _local_coords(aff: AffineLattice, pts):
    B = la.transpose(aff.directions)
    return [la.solve(B, la.sub(p, aff.base)) for p in pts]


def _cone_terms(local, rows, interior: bool):
    """(sign, exponent, generators) terms in local coordinates for a full-dimensional polytope."""
    r = len(local[0])
    out = []
    for vi, v in enumerate(local):
        T = [k for k, (a, b) in enumerate(rows) if la.dot(a, v) == b]
        inner = [tuple(-x for x in rows[k][0]) for k in T]
        if len(inner) == r:
            duals = [tuple(inner)]
        else:
            edges = [e for e in _edges(local, rows, r) if vi in e]
            gs = [la.sub(local[j if i == vi else i], v) for i, j in edges]
            tight = [frozenset(t for t, u in enumerate(inner) if la.dot(u, g) == 0) for g in gs]
            simp = pulling_triangulation(inner, tight, frozenset(range(len(inner))),
                                         lambda S: la.rank([inner[t] for t in S]) - 1)
            duals = [tuple(inner[t] for t in s) for s in simp]
        for dg in duals:
            for s, G, dual in _dual_unimodular(tuple(sorted(dg))):
                # coordinates of v in the basis G are the inner products with the dual basis
                coeff = [la.dot(u, v) for u in dual]
                if interior:
                    ks = [floor(c) + 1 for c in coeff]
                else:
                    ks = [ceil(c) for c in coeff]
                expo = tuple(sum(k * g[i] for k, g in zip(ks, G)) for i in range(r))
                out.append((s, expo, G))
    return out


def _genfun(P: VPolytope, interior: bool) -> ShortRationalFunction:
    n = P.ambient_dim
    verts = irredundant(P.vertices) if P.vertices else ()
    if not verts:
        return ShortRationalFunction(n)
    aff = affine_hull_lattice(verts)
    if aff is None:
        return ShortRationalFunction(n)
    r = len(aff.directions)
    if r == 0:
        return ShortRationalFunction.build(n, [(1, aff.base, ())])
    local = _local_coords(aff, verts)
    rows = _facets_of_points(list(local), r)
    raw = []
    for s, e, G in _cone_terms(local, rows, interior):
        expo = tuple(aff.base[i] + sum(e[k] * aff.directions[k][i] for k in range(r))
                     for i in range(n))
        dens = []
        for g in G:
            dens.append((tuple(sum(g[k] * aff.directions[k][i] for k in range(r)) for i in range(n)), 1))
        raw.append((s, expo, dens))
    return ShortRationalFunction.build(n, raw)


def genfun_closed(P: VPolytope) -> ShortRationalFunction:
    """SRF of the lattice points of the closed polytope P."""
    return _genfun(P, interior=False)


def genfun_open(P: VPolytope) -> ShortRationalFunction:
    """SRF of the lattice points in the relative interior of P."""
    return _genfun(P, interior=True)
