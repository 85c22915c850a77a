import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ehrhart import linalg as la
from ehrhart.lattice import (DegenerateWarning, gram_det, hnf, hnf_with_transform, intersect,
                             lll_reduce, orth_complement, project_lattice, saturate, zero_subspace)


def box_points(cols, r=4):
    """Integer combinations of cols landing in [-r, r]^2 (small-coefficient enumeration)."""
    pts = set()
    span = range(-12, 13)
    for a in span:
        for b in span:
            for c in (span if len(cols) == 3 else [0]):
                coeffs = [a, b, c][:len(cols)]
                v = tuple(sum(k * col[i] for k, col in zip(coeffs, cols)) for i in range(2))
                if max(abs(x) for x in v) <= r:
                    pts.add(v)
    return pts


def in_lattice(basis, v):
    """Exact membership for an independent basis: solve and test integrality."""
    c = la.solve(la.transpose(basis), la.vec(v))
    if c is None or la.matvec(la.transpose(basis), c) != la.vec(v):
        return False
    return all(x.denominator == 1 for x in c)


def test_hnf_examples():
    assert hnf([(2, 0), (3, 0)]) == ((1, 0),)
    assert hnf([(1, 0), (0, 1)]) == ((1, 0), (0, 1))
    H = hnf([(2, 0), (0, 2), (1, 1)])
    assert len(H) == 2 and abs(la.det(H)) == 2
    assert box_points(list(H)) == box_points([(2, 0), (0, 2), (1, 1)])


def test_hnf_rejects_fractions():
    with pytest.raises(ValueError):
        hnf([(Fraction(1, 2), 0)])


int_matrices = st.integers(1, 4).flatmap(
    lambda d: st.lists(st.tuples(*[st.integers(-9, 9)] * d), min_size=1, max_size=5))


@settings(max_examples=60, deadline=None)
@given(int_matrices)
def test_hnf_idempotent_and_same_lattice(cols):
    H = hnf(cols)
    assert hnf(H) == H
    if not H:
        assert all(not any(c) for c in cols)
        return
    # every generator lies in the HNF lattice
    for c in cols:
        assert in_lattice(H, c)
    # every HNF column is an explicit integer combination with a unimodular transform
    Hs, U, _ = hnf_with_transform(cols)
    assert abs(la.det(U)) == 1
    for k, h in enumerate(Hs):
        assert tuple(sum(U[k][j] * cols[j][i] for j in range(len(cols))) for i in range(len(h))) == h


def test_hnf_lattice_membership_random():
    rng = random.Random(1)
    cols = [(3, 1, 4), (1, 5, 9), (2, 6, 5), (3, 5, 8)]
    H = hnf(cols)
    for _ in range(100):
        coeffs = [rng.randint(-5, 5) for _ in cols]
        v = tuple(sum(k * c[i] for k, c in zip(coeffs, cols)) for i in range(3))
        assert in_lattice(H, v)
        # the index of the lattice is 18, so a unit shift leaves it unless it hits a column
        w = tuple(x + rng.randint(0, 1) for x in v)
        assert in_lattice(H, w) == in_lattice(H, la.sub(w, v))


def lovasz_ok(basis, delta=Fraction(3, 4)):
    bstar, norms = [], []
    mu = {}
    for i, b in enumerate(basis):
        v = la.vec(b)
        for j in range(i):
            mu[i, j] = la.dot(b, bstar[j]) / norms[j]
            v = la.sub(v, la.scale(mu[i, j], bstar[j]))
        bstar.append(v)
        norms.append(la.dot(v, v))
    size = all(abs(m) <= Fraction(1, 2) for m in mu.values())
    lov = all(norms[k] >= (delta - mu[k, k - 1] ** 2) * norms[k - 1] for k in range(1, len(basis)))
    return size and lov


def test_lll_examples():
    assert lll_reduce([(1, 0), (0, 1)]) == ((1, 0), (0, 1))
    R = lll_reduce([(1, 0), (4, 1)])
    assert all(la.dot(v, v) <= 2 for v in R)
    assert all(in_lattice(R, v) for v in [(1, 0), (4, 1)])
    assert all(in_lattice([(1, 0), (4, 1)], v) for v in R)
    assert lovasz_ok(R)
    R = lll_reduce([(2, 0), (1, 3)])
    assert gram_det(R) == 36 == gram_det([(2, 0), (1, 3)])
    assert lovasz_ok(R)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4).flatmap(lambda d: st.lists(st.tuples(*[st.integers(-20, 20)] * d),
                                                    min_size=d, max_size=d)))
def test_lll_same_lattice(cols):
    if la.rank(cols) < len(cols):
        with pytest.raises(ValueError):
            lll_reduce(cols)
        return
    R = lll_reduce(cols)
    assert lovasz_ok(R)
    assert all(in_lattice(R, c) for c in cols) and all(in_lattice(cols, r) for r in R)


def test_project_lattice_examples():
    assert project_lattice(saturate([(1, 1)])).basis == ((Fraction(1, 2), Fraction(1, 2)),)
    assert project_lattice(saturate([(1, 0)], 2)).basis == ((1, 0),)
    full = project_lattice(saturate([(1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    assert abs(la.det(full.basis)) == 1
    with pytest.raises(ValueError):
        project_lattice(zero_subspace(2))


def test_saturate_examples():
    assert saturate([(2, 2)]).sat_basis == ((1, 1),)
    assert saturate([(1, 0), (0, 1)]).sat_basis == ((1, 0), (0, 1))
    a = saturate([(1, 0, 1), (0, 1, 0)])
    b = saturate([(2, 3, 2), (1, -1, 1)])
    assert a == b
    assert saturate([(Fraction(1, 2), Fraction(1, 2))]).sat_basis == ((1, 1),)


def test_orth_complement_examples():
    assert orth_complement(zero_subspace(3)).dim == 3
    assert orth_complement(saturate([(1, 0)])) == saturate([(0, 1)])
    perp = orth_complement(saturate([(1, 1)]))
    assert perp == saturate([(1, -1)])
    assert la.dot(perp.sat_basis[0], (1, 1)) == 0


def test_intersect_examples():
    L = saturate([(1, 2, 3)])
    assert intersect(L, L) == L
    assert intersect(saturate([(1, 0)]), saturate([(0, 1)])).dim == 0
    I = intersect(saturate([(1, 0, 0), (0, 1, 0)]), saturate([(0, 1, 0), (0, 0, 1)]))
    assert I == saturate([(0, 1, 0)]) and I.contains((0, 1, 0))
    with pytest.raises(ValueError):
        intersect(saturate([(1, 0)]), saturate([(1, 0, 0)]))


def test_gram_det_examples():
    assert gram_det([(1, 0), (0, 1)]) == 1
    assert gram_det([(1, 1)]) == 2
    assert gram_det([(Fraction(1, 2), Fraction(1, 2))]) == Fraction(1, 2)
    with pytest.warns(DegenerateWarning):
        assert gram_det([(1, 1), (2, 2)]) == 0


subspaces = st.integers(2, 5).flatmap(
    lambda d: st.tuples(st.just(d), st.lists(st.tuples(*[st.integers(-3, 3)] * d), min_size=1, max_size=d - 1)))


@settings(max_examples=60, deadline=None)
@given(subspaces)
def test_duality_and_involution(data):
    d, span = data
    L = saturate(span, d)
    assert orth_complement(orth_complement(L)) == L
    if 1 <= L.dim <= d - 1:
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            prod = gram_det(orth_complement(L).sat_basis) * gram_det(project_lattice(L).basis)
        assert prod == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)), min_size=3, max_size=3))
def test_intersect_lattice_laws(vs):
    A, B, C = (saturate([v], 3) if any(v) else zero_subspace(3) for v in vs)
    AB = saturate([vs[0], vs[1]], 3)
    assert intersect(A, AB) == A == intersect(AB, A)
    assert intersect(intersect(A, B), C) == intersect(A, intersect(B, C))
    assert intersect(AB, C) == intersect(C, AB)
