"""The slice valuation E_L of a rational simplex.

For a lattice subspace L with projection Q of the simplex onto L, the
normalized fiber volume x -> vol(simplex ∩ (x + L^perp)) is a polynomial on
each chamber cut out by the hyperplanes A_G. E_L is the sum of that function
over the projected lattice, computed piece by piece on the open faces of the
chambers.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import List, Optional, Tuple

from . import linalg as la
from .lattice import Lattice, Subspace, orth_complement
from .polytope import (Chamber, HPolytope, OpenFace, Simplex, VPolytope, chamber_decomposition,
                       h_to_hull, irredundant, lattice_coords_map, normalize_hyperplane, normalize_row,
                       open_face_decomposition, volume_lattice_coords)
from .summation import Polynomial, sum_polynomial

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SliceProblem:
    simplex: Simplex
    L: Subspace
    lam: Lattice
    lperp_basis: Tuple[Tuple[int, ...], ...]
    vertex_coords: Tuple[Tuple[Fraction, ...], ...]

    @property
    def j(self) -> int:
        return self.L.dim

    @property
    def fiber_dim(self) -> int:
        return self.simplex.dim - self.L.dim


def slice_problem(simplex: Simplex, L: Subspace) -> SliceProblem:
    if L.dim == 0:
        raise ValueError("slice problems need dim L >= 1")
    lam, f = lattice_coords_map(L)
    W = orth_complement(L).sat_basis
    return SliceProblem(simplex, L, lam, W, tuple(f(v) for v in simplex.vertices))


def slicing_hyperplanes(simplex: Simplex, L: Subspace, prob: Optional[SliceProblem] = None):
    """Hyperplanes A_G (normal, offset) in Lambda-coordinates for the (j-1)-faces G."""
    prob = prob or slice_problem(simplex, L)
    j = prob.j
    out = set()
    for G in combinations(range(simplex.dim + 1), j):
        pts = [prob.vertex_coords[i] for i in G]
        diffs = [la.sub(p, pts[0]) for p in pts[1:]]
        if diffs and la.rank(diffs) < j - 1:
            continue  # aff(G) is parallel to L^perp
        normal = la.nullspace(diffs, j)[0] if diffs else (Fraction(1),)
        out.add(normalize_hyperplane(normal, la.dot(normal, pts[0])))
    return sorted(out)


def fiber_hpolytope(prob: SliceProblem, x) -> HPolytope:
    """The fiber over x as {w : a.(U x + W w) <= b} in coordinates of the L^perp lattice."""
    x = la.vec(x)
    z0 = tuple(sum((x[k] * prob.lam.basis[k][i] for k in range(prob.j)), Fraction(0))
               for i in range(prob.simplex.dim))
    W = prob.lperp_basis
    A, b = [], []
    for a, rhs in prob.simplex.facets():
        row = tuple(la.dot(a, w) for w in W)
        r = rhs - la.dot(a, z0)
        if all(c == 0 for c in row):
            if r < 0:
                # the whole fiber is infeasible; encode as 0 <= -1
                return HPolytope(((0,) * len(W),), (Fraction(-1),), len(W))
            continue
        p, q = normalize_row(row, r)
        A.append(p)
        b.append(q)
    return HPolytope(tuple(A), tuple(b), len(W))


def fiber_polytope(simplex: Simplex, L: Subspace, x) -> VPolytope:
    prob = slice_problem(simplex, L)
    return h_to_hull(fiber_hpolytope(prob, x))


def fiber_volume_geometric(prob: SliceProblem, x) -> Fraction:
    H = fiber_hpolytope(prob, x)
    if H.ambient_dim == 0:
        return Fraction(1) if all(b >= 0 for b in H.b) else Fraction(0)
    return volume_lattice_coords(H)


class FiberVolume:
    """Fast fiber volumes from a vertex-sum formula over the barycentric fiber.

    In barycentric coordinates the fiber over x is {lam >= 0 : M lam = (1, x)}
    with M = [1 ... 1; projected vertices]. At points where every vertex of
    that polytope is simple, its volume is a sum over feasible bases of a
    closed-form term; other points fall back to the geometric volume.
    """

    def __init__(self, prob: SliceProblem):
        self.prob = prob
        d, j = prob.simplex.dim, prob.j
        self.N = d - j
        cols = [(Fraction(1),) + tuple(v) for v in prob.vertex_coords]
        self.scale = abs(la.det([[Fraction(1)] + list(v) for v in prob.simplex.vertices]))
        self.bases = []
        for B in combinations(range(d + 1), j + 1):
            MB = [[cols[i][r] for i in B] for r in range(j + 1)]
            D = la.det(MB)
            if D == 0:
                continue
            inv = la.inverse(MB)
            ys = {i: la.matvec(inv, cols[i]) for i in range(d + 1) if i not in B}
            self.bases.append((B, inv, abs(D), ys))
        t = 1
        while True:
            c = [Fraction(t) ** i for i in range(d + 1)]
            ok = True
            data = []
            for B, inv, D, ys in self.bases:
                red = [c[i] - sum(c[B[k]] * ys[i][k] for k in range(j + 1)) for i in ys]
                if any(r == 0 for r in red):
                    ok = False
                    break
                prod = Fraction(1)
                for r in red:
                    prod *= -r
                data.append((B, inv, D, prod))
            if ok:
                break
            t += 1
        self.c = c
        self.data = data

    def fast(self, x) -> Optional[Fraction]:
        rhs = (Fraction(1),) + tuple(la.vec(x))
        total = Fraction(0)
        for B, inv, D, prod in self.data:
            lam = la.matvec(inv, rhs)
            if any(v < 0 for v in lam):
                continue
            if any(v == 0 for v in lam) and self.N > 0:
                return None  # degenerate vertex
            val = sum((self.c[B[k]] * lam[k] for k in range(len(B))), Fraction(0))
            total += val ** self.N / (D * prod)
        return self.scale * total / factorial(self.N)

    def __call__(self, x) -> Fraction:
        v = self.fast(x)
        if v is None:
            return fiber_volume_geometric(self.prob, x)
        return v


def _monomials(nvars: int, deg: int):
    out = []

    def rec(prefix, left, k):
        if k == nvars - 1:
            for e in range(left + 1):
                out.append(tuple(prefix + [e]))
            return
        for e in range(left + 1):
            rec(prefix + [e], left - e, k + 1)
    if nvars == 0:
        return [()]
    rec([], deg, 0)
    return [m for m in out if sum(m) <= deg]


def _grid(corners, deg: int):
    """Barycentric grid of the given degree on the simplex spanned by corners."""
    n = len(corners)
    if deg == 0:
        return [tuple(sum(c[i] for c in corners) / n for i in range(len(corners[0])))]
    pts = []
    for ks in _monomials(n, deg):
        if sum(ks) != deg:
            continue
        pts.append(tuple(sum((Fraction(k, deg) * c[i] for k, c in zip(ks, corners)), Fraction(0))
                         for i in range(len(corners[0]))))
    return pts


def chamber_phi(simplex: Simplex, L: Subspace, chamber: Chamber,
                volume: Optional[FiberVolume] = None, check: bool = True) -> Polynomial:
    """The fiber-volume polynomial on a chamber, by exact interpolation at interior nodes."""
    vol = volume or FiberVolume(slice_problem(simplex, L))
    j = L.dim
    N = simplex.dim - j
    verts = list(chamber.closure.vertices)
    centroid = tuple(sum(v[i] for v in verts) / len(verts) for i in range(j))
    corners = [verts[0]]
    for v in verts[1:]:
        if la.affine_rank(corners + [v]) == len(corners):
            corners.append(v)
        if len(corners) == j + 1:
            break
    shrunk = [la.add(centroid, la.scale(Fraction(1, 2), la.sub(v, centroid))) for v in corners]
    nodes = _grid(shrunk, N)
    monos = _monomials(j, N)
    A = [[_mono_eval(m, p) for m in monos] for p in nodes]
    rhs = [vol(p) for p in nodes]
    coef = la.solve(A, rhs)
    assert coef is not None and len(nodes) == len(monos)
    phi = Polynomial(j, dict(zip(monos, coef)))
    if check:
        probe = la.add(centroid, la.scale(Fraction(1, 5), la.sub(verts[-1], centroid)))
        if phi(probe) != vol(probe):
            raise ArithmeticError("fiber volume is not polynomial on the chamber")
    return phi


def _mono_eval(m, p) -> Fraction:
    v = Fraction(1)
    for e, x in zip(m, p):
        if e:
            v *= x ** e
    return v


@dataclass
class ChamberPiece:
    chamber: Chamber
    phi: Polynomial


@dataclass
class SlicePlan:
    """Geometry of E_L for one simplex, reusable for all its dilations."""
    simplex: Simplex
    L: Subspace
    pieces: List[ChamberPiece] = field(default_factory=list)
    open_faces: List[OpenFace] = field(default_factory=list)

    @staticmethod
    def build(simplex: Simplex, L: Subspace, check: bool = True) -> "SlicePlan":
        plan = SlicePlan(simplex, L)
        if L.dim == 0:
            return plan
        prob = slice_problem(simplex, L)
        vol = FiberVolume(prob)
        Q = VPolytope(irredundant(prob.vertex_coords), L.dim)
        chambers = chamber_decomposition(Q, slicing_hyperplanes(simplex, L, prob))
        plan.pieces = [ChamberPiece(ch, chamber_phi(simplex, L, ch, vol, check)) for ch in chambers]
        plan.open_faces = open_face_decomposition(chambers)
        return plan

    def value(self, m=1) -> Fraction:
        """E_L of the dilation m * simplex."""
        m = Fraction(m)
        d = self.simplex.dim
        if self.L.dim == 0:
            return self.simplex.volume() * m ** d
        N = d - self.L.dim
        total = Fraction(0)
        for face in self.open_faces:
            phi = self.pieces[face.owner].phi.homogeneous_rescale(m, N)
            scaled = VPolytope(tuple(la.scale(m, v) for v in face.closure.vertices),
                               face.closure.ambient_dim)
            total += sum_polynomial(phi, scaled, open=True)
        return total


def eval_EL(simplex: Simplex, L: Subspace) -> Fraction:
    if L.dim == 0:
        return simplex.volume()
    return SlicePlan.build(simplex, L).value(1)
