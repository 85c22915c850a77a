"""Top Ehrhart coefficients of a rational simplex.

nu(m) = sum over the subspace poset of mu(L) * E_L(m * simplex) is a
polynomial in m along each residue class m = n mod t, and its top k+1
coefficients are the wanted Ehrhart coefficients.
"""
from __future__ import annotations

import logging
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg as la
from .lattice import Subspace, intersect, orth_complement
from .polytope import Simplex, faces, lin_face
from .slices import SlicePlan

log = logging.getLogger(__name__)


def minimal_period(simplex: Simplex) -> int:
    return la.denominator_lcm(x for v in simplex.vertices for x in v)


@dataclass
class SubspacePoset:
    elements: List[Subspace]
    mu_pair: Dict[Tuple[int, int], int] = field(default_factory=dict)
    mu: Dict[int, int] = field(default_factory=dict)

    def indicator_sum(self, v) -> int:
        return sum(self.mu[i] for i, L in enumerate(self.elements) if L.contains(v))

    def in_union(self, v) -> bool:
        return any(L.contains(v) for L in self.elements)


def build_poset(simplex: Simplex, k: int) -> SubspacePoset:
    """Intersection closure of the complements of lin(F) over the (d-k)-faces F."""
    d = simplex.dim
    if not 0 <= k <= d:
        raise ValueError("k must lie in 0..d")
    gens = []
    for F in faces(simplex, d - k):
        L = orth_complement(lin_face(simplex, F))
        if L not in gens:
            gens.append(L)
    elems = list(gens)
    seen = set(elems)
    frontier = list(elems)
    while frontier:
        new = []
        for L in frontier:
            for G in gens:
                I = intersect(L, G)
                if I not in seen:
                    seen.add(I)
                    new.append(I)
        elems.extend(new)
        frontier = new
    elems.sort(key=lambda L: (L.dim, L.sat_basis))
    return SubspacePoset(elems)


def moebius_numbers(poset: SubspacePoset) -> SubspacePoset:
    E = poset.elements
    n = len(E)
    above = {i: [j for j in range(n) if E[i].issubspace(E[j])] for i in range(n)}
    order = sorted(range(n), key=lambda i: E[i].dim)
    pos = {i: r for r, i in enumerate(order)}
    mu_pair: Dict[Tuple[int, int], int] = {}
    for a in range(n):
        ups = sorted(above[a], key=lambda j: pos[j])
        for b in ups:
            if b == a:
                mu_pair[(a, b)] = 1
                continue
            s = 0
            for c in ups:
                if c != b and (a, c) in mu_pair and E[c].issubspace(E[b]):
                    s += mu_pair[(a, c)]
            mu_pair[(a, b)] = -s
    poset.mu_pair = mu_pair
    poset.mu = {a: sum(mu_pair[(a, b)] for b in above[a]) for a in range(n)}
    return poset


def probe_vectors(d: int, count: int = 100, seed: Optional[int] = None,
                  subspaces: Sequence[Subspace] = ()) -> List[Tuple[int, ...]]:
    """Deterministic integer probes (seed from EHRHART_SEED when not given).

    When subspaces are supplied, every other probe is a random integer point
    of one of them, so that the probes actually hit the union.
    """
    if seed is None:
        seed = int(os.environ.get("EHRHART_SEED", "20240601"))
    rng = random.Random(seed)
    out = [tuple([0] * d)]
    while len(out) < count:
        if subspaces and len(out) % 2:
            L = subspaces[rng.randrange(len(subspaces))]
            coeffs = [rng.randint(-3, 3) for _ in L.sat_basis]
            out.append(tuple(sum(c * b[i] for c, b in zip(coeffs, L.sat_basis)) for i in range(d)))
        else:
            out.append(tuple(rng.randint(-5, 5) for _ in range(d)))
    return out


def check_indicator_identity(poset: SubspacePoset, probes) -> bool:
    for v in probes:
        if poset.indicator_sum(v) != int(poset.in_union(v)):
            return False
    return True


def solve_vandermonde(nodes: Sequence, values: Sequence) -> List[Fraction]:
    """Coefficients g_0..g_d of the polynomial through (nodes[i], values[i])."""
    A = [[Fraction(m) ** i for i in range(len(nodes))] for m in nodes]
    c = la.solve(A, values)
    return list(c)


@dataclass
class QuasiCoefficientReport:
    d: int
    k: int
    n: int
    t: int
    coefficients: Dict[int, Fraction]  # i -> e_{d-i}(simplex; n)
    nu: List[Fraction]  # nu_0..nu_d
    poset_size: int = 0
    timings: Dict[str, float] = field(default_factory=dict)
    poset: Optional[SubspacePoset] = field(default=None, repr=False, compare=False)

    def e(self, i: int) -> Fraction:
        """The Ehrhart coefficient e_i(simplex; n) for i >= d - k."""
        return self.coefficients[self.d - i]


def _plan_values(args):
    simplex, L, ms = args
    plan = SlicePlan.build(simplex, L)
    return [plan.value(m) for m in ms]


def top_coefficients(simplex: Simplex, k: int, n: int, t: Optional[int] = None,
                     jobs: int = 1) -> QuasiCoefficientReport:
    d = simplex.dim
    if not 0 <= k <= d:
        raise ValueError("k must lie in 0..d")
    if n < 1:
        raise ValueError("n must be positive")
    timings = {}
    t0 = time.perf_counter()
    if t is None:
        t = minimal_period(simplex)
    poset = moebius_numbers(build_poset(simplex, k))
    timings["poset"] = time.perf_counter() - t0
    ms = [n + s * t for s in range(d + 1)]
    work = [(i, L) for i, L in enumerate(poset.elements) if poset.mu[i] != 0]
    t1 = time.perf_counter()
    tasks = [(simplex, L, ms) for _, L in work]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_plan_values, tasks))
    else:
        results = [_plan_values(task) for task in tasks]
    timings["valuations"] = time.perf_counter() - t1
    nu_vals = [Fraction(0)] * len(ms)
    for (i, _), vals in zip(work, results):
        for s, v in enumerate(vals):
            nu_vals[s] += poset.mu[i] * v
    g = solve_vandermonde(ms, nu_vals)
    coeffs = {i: g[d - i] for i in range(k + 1)}
    timings["total"] = time.perf_counter() - t0
    return QuasiCoefficientReport(d, k, n, t, coeffs, g, len(poset.elements), timings, poset)
