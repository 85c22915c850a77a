"""Rational polytopes in small dimension: simplices, H/V conversion, volumes,
hyperplane-arrangement chambers and their open faces.

Everything is brute force over vertex/facet subsets, which is fine because
the ambient dimension of every polytope handled here is small.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import linalg as la
from .lattice import Subspace, project_lattice, saturate, zero_subspace

log = logging.getLogger(__name__)

Point = Tuple[Fraction, ...]


class NotFullDimensional(ValueError):
    pass


@dataclass(frozen=True)
class Simplex:
    vertices: Tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(la.vec(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        d = len(verts) - 1
        if d < 1 or any(len(v) != d for v in verts):
            raise ValueError("a simplex in R^d needs d+1 points with d coordinates")
        if la.det(self.edge_matrix()) == 0:
            raise NotFullDimensional("simplex not full-dimensional")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def edge_matrix(self):
        v0 = self.vertices[0]
        return [la.sub(v, v0) for v in self.vertices[1:]]

    def volume(self) -> Fraction:
        return abs(la.det(self.edge_matrix())) / factorial(self.dim)

    def dilate(self, m) -> "Simplex":
        return Simplex(tuple(la.scale(Fraction(m), v) for v in self.vertices))

    def facets(self) -> List[Tuple[Tuple[int, ...], Fraction]]:
        """Outer facet inequalities a.x <= b with primitive integer a; facet i misses vertex i."""
        out = []
        for i in range(self.dim + 1):
            pts = [v for j, v in enumerate(self.vertices) if j != i]
            a = la.primitive(la.nullspace([la.sub(p, pts[0]) for p in pts[1:]], self.dim)[0]
                             if len(pts) > 1 else (1,))
            b = la.dot(a, pts[0])
            if la.dot(a, self.vertices[i]) > b:
                a, b = tuple(-x for x in a), -b
            out.append((a, b))
        return out


@dataclass(frozen=True)
class Face:
    vertex_subset: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.vertex_subset) - 1


@dataclass(frozen=True)
class HPolytope:
    """{x : A x <= b}; rows are primitive integer normals."""
    A: Tuple[Tuple[int, ...], ...]
    b: Tuple[Fraction, ...]
    ambient_dim: int

    def contains(self, x) -> bool:
        return all(la.dot(a, x) <= bi for a, bi in zip(self.A, self.b))


@dataclass(frozen=True)
class VPolytope:
    vertices: Tuple[Point, ...]
    ambient_dim: int

    @property
    def dim(self) -> int:
        return la.affine_rank(self.vertices)

    @property
    def empty(self) -> bool:
        return not self.vertices


@dataclass(frozen=True)
class Chamber:
    closure: VPolytope
    hrep: HPolytope
    sign_vector: Tuple[int, ...]


@dataclass(frozen=True)
class OpenFace:
    """Relative interior of the polytope `closure`; `owner` indexes a chamber containing it."""
    closure: VPolytope
    owner: int

    @property
    def dim(self) -> int:
        return self.closure.dim


@dataclass(frozen=True)
class Cone:
    apex: Point
    generators: Tuple[Tuple[int, ...], ...]


def normalize_row(a, b) -> Tuple[Tuple[int, ...], Fraction]:
    """Scale a.x <= b (a nonzero, positive factor) so that a is primitive integer."""
    p = la.primitive(a)
    i = next(k for k, x in enumerate(a) if x != 0)
    f = Fraction(p[i]) / Fraction(a[i])
    return p, Fraction(b) * f


# ---------------------------------------------------------------- faces


def faces(simplex: Simplex, j: int) -> List[Face]:
    if not 0 <= j <= simplex.dim:
        raise ValueError("face dimension out of range")
    return [Face(s) for s in combinations(range(simplex.dim + 1), j + 1)]


def lin_face(simplex: Simplex, face: Face) -> Subspace:
    if face.dim == 0:
        return zero_subspace(simplex.dim)
    v = [simplex.vertices[i] for i in face.vertex_subset]
    return saturate([la.sub(p, v[0]) for p in v[1:]], simplex.dim)


def lattice_coords_map(L: Subspace):
    """Return (Lambda, f) where f sends a point of R^d to Lambda-coordinates of its projection."""
    lam = project_lattice(L)
    U = lam.basis
    Ginv = la.inverse([[la.dot(u, v) for v in U] for u in U])

    def f(x):
        return la.matvec(Ginv, [la.dot(u, x) for u in U])
    return lam, f


def project_simplex(simplex: Simplex, L: Subspace) -> VPolytope:
    if L.dim == 0:
        raise ValueError("projection onto the zero subspace")
    _, f = lattice_coords_map(L)
    pts = [f(v) for v in simplex.vertices]
    return VPolytope(irredundant(pts), L.dim)


# ------------------------------------------------------- H/V conversion


def _dedupe(points) -> List[Point]:
    return sorted(set(la.vec(p) for p in points))


def _facets_of_points(pts: List[Point], n: int):
    """Facet rows (a, b) of the full-dimensional hull of pts in R^n."""
    rows = set()
    if n == 0:
        return []
    for sub in combinations(range(len(pts)), n):
        base = pts[sub[0]]
        diffs = [la.sub(pts[i], base) for i in sub[1:]]
        ns = la.nullspace(diffs, n) if diffs else la.nullspace([], n)
        if len(ns) != 1:
            continue
        a = la.primitive(ns[0])
        b = la.dot(a, base)
        vals = [la.dot(a, p) - b for p in pts]
        if all(v <= 0 for v in vals):
            rows.add((a, b))
        elif all(v >= 0 for v in vals):
            rows.add((tuple(-x for x in a), -b))
    return sorted(rows)


def _tight(points, rows) -> List[FrozenSet[int]]:
    return [frozenset(i for i, p in enumerate(points) if la.dot(a, p) == b) for a, b in rows]


def irredundant(points) -> Tuple[Point, ...]:
    """Vertices of the convex hull of points (in their affine hull)."""
    pts = _dedupe(points)
    if len(pts) <= 1:
        return tuple(pts)
    r = la.affine_rank(pts)
    n = len(pts[0])
    if r < n:
        # work in coordinates of the affine hull
        base = pts[0]
        B = [row for row in la.rref([la.sub(p, base) for p in pts[1:]])[0]]
        coords = [la.solve(la.transpose(B), la.sub(p, base)) for p in pts]
        keep = irredundant(coords)
        idx = {c: p for c, p in zip(coords, pts)}
        return tuple(sorted(idx[c] for c in keep))
    rows = _facets_of_points(pts, n)
    tight = _tight(pts, rows)
    out = []
    for i, p in enumerate(pts):
        normals = [rows[k][0] for k in range(len(rows)) if i in tight[k]]
        if normals and la.rank(normals) == n:
            out.append(p)
    return tuple(out)


def hull_to_h(V: VPolytope) -> HPolytope:
    pts = _dedupe(V.vertices)
    n = V.ambient_dim
    if not pts or la.affine_rank(pts) < n:
        raise NotFullDimensional("hull_to_h needs a full-dimensional point set")
    rows = _facets_of_points(pts, n)
    return HPolytope(tuple(a for a, _ in rows), tuple(b for _, b in rows), n)


def h_to_hull(H: HPolytope) -> VPolytope:
    n = H.ambient_dim
    rows = []
    for a, b in zip(H.A, H.b):
        if all(x == 0 for x in a):
            if b < 0:
                return VPolytope((), n)
            continue
        rows.append((a, b))
    if n == 0:
        ok = all(b >= 0 for b in H.b)
        return VPolytope(((),) if ok else (), 0)
    A = [a for a, _ in rows]
    if not A or la.rank(A) < n:
        raise ValueError("unbounded polyhedron")
    for sub in combinations(range(len(rows)), n - 1):
        ns = la.nullspace([A[i] for i in sub], n) if sub else la.nullspace([], n)
        if len(ns) != 1:
            continue
        y = ns[0]
        for s in (y, la.scale(-1, y)):
            if all(la.dot(a, s) <= 0 for a in A):
                raise ValueError("unbounded polyhedron")
    verts = set()
    for sub in combinations(range(len(rows)), n):
        M = [A[i] for i in sub]
        if la.det(M) == 0:
            continue
        x = la.solve(M, [rows[i][1] for i in sub])
        if all(la.dot(a, x) <= b for a, b in rows):
            verts.add(x)
    return VPolytope(tuple(sorted(verts)), n)


# ------------------------------------------------------------ volumes


def _facets_of_face(F: FrozenSet[int], tight, dim_of) -> List[FrozenSet[int]]:
    r = dim_of(F)
    out = set()
    for T in tight:
        G = F & T
        if G and G != F and dim_of(G) == r - 1:
            out.add(G)
    return sorted(out, key=lambda s: sorted(s))


def pulling_triangulation(points, tight, top: FrozenSet[int], dim_fn) -> List[Tuple[int, ...]]:
    """Pulling triangulation of the face `top` of a polytope (or cone).

    `tight` lists the vertex sets of the facets, `dim_fn` gives the dimension
    of a vertex subset. Returns the maximal simplices as index tuples.
    """
    memo: Dict[FrozenSet[int], List[Tuple[int, ...]]] = {}
    dims: Dict[FrozenSet[int], int] = {}

    def dim_of(S):
        if S not in dims:
            dims[S] = dim_fn(S)
        return dims[S]

    def tri(F):
        if F in memo:
            return memo[F]
        r = dim_of(F)
        if len(F) == r + 1:
            res = [tuple(sorted(F))]
        else:
            v = min(F)
            res = []
            for G in _facets_of_face(F, tight, dim_of):
                if v in G:
                    continue
                res.extend(tuple(sorted(s + (v,))) for s in tri(G))
        memo[F] = res
        return res

    return tri(top)


def _volume_triangulate(verts: List[Point], rows) -> Fraction:
    n = len(verts[0])
    tight = _tight(verts, rows)
    simplices = pulling_triangulation(
        verts, tight, frozenset(range(len(verts))),
        lambda S: la.affine_rank([verts[i] for i in S]))
    total = Fraction(0)
    for s in simplices:
        v0 = verts[s[0]]
        total += abs(la.det([la.sub(verts[i], v0) for i in s[1:]]))
    return total / factorial(n)


def _canon_system(rows) -> Optional[Tuple]:
    """Normalize, dedupe and sort a list of (a, b) rows; None if infeasible for sure."""
    best: Dict[Tuple[int, ...], Fraction] = {}
    for a, b in rows:
        if all(x == 0 for x in a):
            if b < 0:
                return None
            continue
        p, bb = normalize_row(a, b)
        if p not in best or bb < best[p]:
            best[p] = bb
    return tuple(sorted(best.items()))


def _lasserre(system, n: int, memo) -> Fraction:
    key = (n, system)
    if key in memo:
        return memo[key]
    if n == 1:
        lo, hi = None, None
        for (a,), b in system:
            x = Fraction(b) / a
            if a > 0:
                hi = x if hi is None else min(hi, x)
            else:
                lo = x if lo is None else max(lo, x)
        if lo is None or hi is None:
            raise ValueError("unbounded polyhedron")
        res = max(hi - lo, Fraction(0))
        memo[key] = res
        return res
    total = Fraction(0)
    for i, (a, b) in enumerate(system):
        k = max(range(n), key=lambda t: (abs(a[t]), -t))
        ak = a[k]
        # substitute x_k = (b - sum_{l != k} a_l x_l) / a_k into the other rows
        sub_rows = []
        for j, (c, e) in enumerate(system):
            if j == i:
                continue
            f = Fraction(c[k]) / ak
            newc = tuple(Fraction(c[l]) - f * a[l] for l in range(n) if l != k)
            sub_rows.append((newc, Fraction(e) - f * b))
        sys2 = _canon_system(sub_rows)
        if sys2 is None:
            continue
        face_vol = _lasserre(sys2, n - 1, memo)
        if face_vol:
            total += Fraction(b) / abs(ak) * face_vol
    res = total / n
    memo[key] = res
    return res


def lasserre_volume(H: HPolytope) -> Fraction:
    """Volume of {A x <= b} by Lasserre's facet recursion (variable elimination form)."""
    system = _canon_system(list(zip(H.A, H.b)))
    if system is None:
        return Fraction(0)
    if H.ambient_dim == 0:
        return Fraction(1)
    return _lasserre(system, H.ambient_dim, {})


def volume_lattice_coords(P, method: str = "auto") -> Fraction:
    """Lebesgue volume of a VPolytope or HPolytope given in lattice coordinates.

    Lower-dimensional (or empty) input gives 0. `method` is "auto",
    "triangulate" or "lasserre"; auto switches to Lasserre above dimension 8.
    """
    n = P.ambient_dim
    if method == "auto":
        method = "triangulate" if n <= 8 else "lasserre"
    if isinstance(P, HPolytope):
        if method == "lasserre":
            return lasserre_volume(P)
        V = h_to_hull(P)
        verts = list(V.vertices)
        if n == 0:
            return Fraction(1) if verts else Fraction(0)
        if la.affine_rank(verts) < n:
            log.debug("volume of a lower-dimensional polytope taken as 0")
            return Fraction(0)
        rows = list(zip(P.A, P.b))
        return _volume_triangulate(verts, rows)
    verts = _dedupe(P.vertices)
    if n == 0:
        return Fraction(1) if verts else Fraction(0)
    if la.affine_rank(verts) < n:
        log.debug("volume of a lower-dimensional polytope taken as 0")
        return Fraction(0)
    H = hull_to_h(P)
    if method == "lasserre":
        return lasserre_volume(H)
    return _volume_triangulate(verts, list(zip(H.A, H.b)))


# ------------------------------------------------------------ chambers


def _edges(verts: List[Point], rows, n: int) -> List[Tuple[int, int]]:
    tight_at = [[k for k, (a, b) in enumerate(rows) if la.dot(a, v) == b] for v in verts]
    out = []
    for i, j in combinations(range(len(verts)), 2):
        common = set(tight_at[i]) & set(tight_at[j])
        normals = [rows[k][0] for k in common]
        if (la.rank(normals) if normals else 0) == n - 1:
            out.append((i, j))
    return out


def _prune_rows(verts, rows, n):
    out = []
    for a, b in rows:
        T = [v for v in verts if la.dot(a, v) == b]
        if len(T) >= n and la.affine_rank(T) == n - 1:
            out.append((a, b))
    return sorted(set(out))


def normalize_hyperplane(normal, offset) -> Tuple[Tuple[int, ...], Fraction]:
    a, b = normalize_row(normal, offset)
    i = next(k for k, x in enumerate(a) if x != 0)
    if a[i] < 0:
        a, b = tuple(-x for x in a), -b
    return a, b


def _cut(verts, rows, n, h, c):
    s = [la.dot(h, v) - c for v in verts]
    if all(x >= 0 for x in s) or all(x <= 0 for x in s):
        return None
    new = []
    for i, j in _edges(verts, rows, n):
        if s[i] * s[j] < 0:
            t = s[i] / (s[i] - s[j])
            new.append(la.add(verts[i], la.scale(t, la.sub(verts[j], verts[i]))))
    neg = [v for v, x in zip(verts, s) if x <= 0] + new
    pos = [v for v, x in zip(verts, s) if x >= 0] + new
    hneg = (h, c)
    hpos = (tuple(-x for x in h), -c)
    return ((sorted(set(neg)), _prune_rows(neg, rows + [hneg], n)),
            (sorted(set(pos)), _prune_rows(pos, rows + [hpos], n)))


def chamber_decomposition(Q: VPolytope, hyperplanes) -> List[Chamber]:
    """Cut the full-dimensional polytope Q by the given hyperplanes normal.x = offset."""
    n = Q.ambient_dim
    H = hull_to_h(Q)
    hyps = sorted(set(normalize_hyperplane(a, b) for a, b in hyperplanes))
    cells = [(list(_dedupe(Q.vertices)), list(zip(H.A, H.b)))]
    for h, c in hyps:
        nxt = []
        for verts, rows in cells:
            res = _cut(verts, rows, n, h, c)
            if res is None:
                nxt.append((verts, rows))
            else:
                nxt.extend(res)
        cells = nxt
    chambers = []
    for verts, rows in cells:
        centroid = tuple(sum(v[i] for v in verts) / len(verts) for i in range(n))
        signs = []
        for h, c in hyps:
            x = la.dot(h, centroid) - c
            signs.append(1 if x > 0 else -1)
        chambers.append(Chamber(VPolytope(tuple(verts), n),
                                HPolytope(tuple(a for a, _ in rows), tuple(b for _, b in rows), n),
                                tuple(signs)))
    chambers.sort(key=lambda ch: ch.sign_vector)
    return chambers


def polytope_faces(verts: Sequence[Point], rows) -> List[FrozenSet[Point]]:
    """All nonempty faces (as vertex sets) of a full-dimensional polytope, itself included."""
    facets = [frozenset(v for v in verts if la.dot(a, v) == b) for a, b in rows]
    found = {frozenset(verts)}
    frontier = set(facets)
    while frontier:
        found |= frontier
        nxt = set()
        for F in frontier:
            for G in facets:
                I = F & G
                if I and I not in found:
                    nxt.add(I)
        frontier = nxt
    return sorted(found, key=lambda F: (-len(F), sorted(F)))


def open_face_decomposition(chambers: Sequence[Chamber]) -> List[OpenFace]:
    seen = set()
    out = []
    for idx, ch in enumerate(chambers):
        rows = list(zip(ch.hrep.A, ch.hrep.b))
        for F in polytope_faces(ch.closure.vertices, rows):
            if F in seen:
                continue
            seen.add(F)
            out.append(OpenFace(VPolytope(tuple(sorted(F)), ch.closure.ambient_dim), idx))
    return out


def tangent_cone(V: VPolytope, vertex) -> Cone:
    vertex = la.vec(vertex)
    verts = list(_dedupe(V.vertices))
    if vertex not in verts:
        raise ValueError("not a vertex")
    n = V.ambient_dim
    H = hull_to_h(V)
    rows = list(zip(H.A, H.b))
    i = verts.index(vertex)
    gens = set()
    for a, b in _edges(verts, rows, n):
        if i in (a, b):
            other = verts[b if a == i else a]
            gens.add(la.primitive(la.sub(other, vertex)))
    return Cone(vertex, tuple(sorted(gens)))
