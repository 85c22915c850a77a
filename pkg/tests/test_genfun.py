import random
from fractions import Fraction as F
from itertools import product

import pytest

from ehrhart import linalg as la
from ehrhart.genfun import (ShortRationalFunction, SignedCone, affine_hull_lattice, genfun_closed,
                            genfun_open, unimodular_decompose)
from ehrhart.polytope import VPolytope
from ehrhart.summation import specialize_at_one

from _instances import embedded_points, enumerate_points, random_polytope


def count(S):
    return specialize_at_one(S) if S.terms else 0


def evaluate(S, x):
    """Value of the rational function at a point where no denominator vanishes."""
    total = F(0)
    for t in S.terms:
        v = t.coef
        for xi, a in zip(x, t.exponent):
            v *= F(xi) ** a
        for b, g in t.dens:
            mono = F(1)
            for xi, bi in zip(x, b):
                mono *= F(xi) ** bi
            v /= (1 - mono) ** g
        total += v
    return total


def laurent(points, x):
    total = F(0)
    for m in points:
        v = F(1)
        for xi, a in zip(x, m):
            v *= F(xi) ** a
        total += v
    return total


def in_cone(gens, v):
    c = la.solve(la.transpose(gens), la.vec(v))
    return all(x >= 0 for x in c), any(x == 0 for x in c)


def test_unimodular_examples():
    out = unimodular_decompose(SignedCone((0, 0), ((1, 0), (0, 1))))
    assert [(c.sign, c.generators) for c in out] == [(1, ((1, 0), (0, 1)))]
    out = unimodular_decompose(SignedCone((0,), ((3,),)))
    assert [c.generators for c in out] == [((1,),)]
    with pytest.raises(ValueError):
        unimodular_decompose(SignedCone((0, 0), ((1, 0), (2, 0))))


@pytest.mark.parametrize("gens", [((1, 0), (1, 2)), ((1, 0), (2, 7)), ((3, 1), (-1, 4)),
                                  ((1, 0, 0), (0, 1, 0), (1, 2, 5))])
def test_unimodular_box_test(gens):
    cones = unimodular_decompose(SignedCone(tuple([0] * len(gens)), gens))
    for c in cones:
        assert abs(la.int_det([list(g) for g in c.generators])) == 1
    # compare indicators away from the boundaries of all cones involved
    for v in product(range(-2, 7), repeat=len(gens)):
        inside, boundary = in_cone(gens, v)
        if boundary:
            continue
        total = 0
        skip = False
        for c in cones:
            i, b = in_cone(c.generators, v)
            if b:
                skip = True
                break
            total += c.sign * i
        if not skip:
            assert total == int(inside)


def test_genfun_examples():
    seg = genfun_closed(VPolytope(((0,), (2,)), 1))
    assert seg == ShortRationalFunction.build(1, [(1, (0,), [((1,), 1)]), (1, (2,), [((-1,), 1)])])
    assert count(seg) == 3
    pt = genfun_closed(VPolytope(((5,),), 1))
    assert pt.terms[0].exponent == (5,) and pt.terms[0].dens == () and count(pt) == 1
    assert count(genfun_closed(VPolytope(((0, 0), (2, 0), (0, 2)), 2))) == 6
    assert genfun_closed(VPolytope((), 2)).terms == ()


def test_genfun_open_examples():
    assert count(genfun_open(VPolytope(((0,), (3,)), 1))) == 2
    assert count(genfun_open(VPolytope(((0, 0), (3, 0), (0, 3)), 2))) == 1
    assert count(genfun_open(VPolytope(((0, 0), (2, 2)), 2))) == 1
    assert genfun_open(VPolytope(((F(1, 2),), (F(1, 2),)), 1)).terms == ()


def test_affine_hull_examples():
    assert affine_hull_lattice([(F(1, 2),)]) is None
    A = affine_hull_lattice([(2, 0), (0, 2)])
    assert la.dot(A.base, (1, 1)) == 2
    assert len(A.directions) == 1 and la.primitive(A.directions[0]) in ((1, -1), (-1, 1))
    assert affine_hull_lattice([(F(3, 2), 0), (F(-1, 2), 1)]) is None


def test_genfun_matches_laurent_polynomial():
    rng = random.Random(2)
    x = {1: (F(2),), 2: (F(2), F(3)), 3: (F(2), F(3), F(5))}
    for n in (1, 2, 3):
        for _ in range(6):
            P = random_polytope(rng, n, bound=2)
            assert evaluate(genfun_closed(P), x[n]) == laurent(enumerate_points(P), x[n])
            assert evaluate(genfun_open(P), x[n]) == laurent(enumerate_points(P, True), x[n])


def test_lower_dimensional_pieces():
    rng = random.Random(9)
    cases = [([(1, 1)], (0, 0)), ([(2, 1)], (1, 0)), ([(1, 0, 1), (0, 1, 1)], (0, 0, 0)),
             ([(1, 2, 0)], (F(1, 2), 0, 0))]
    for A, c in cases:
        for _ in range(4):
            r = len(A)
            P = random_polytope(rng, r, bound=2)
            img, closed = embedded_points(P, A, c)
            _, opened = embedded_points(P, A, c, interior=True)
            V = VPolytope(tuple(img), len(c))
            assert count(genfun_closed(V)) == len(closed)
            assert count(genfun_open(V)) == len(opened)


def test_json_round_trip_is_stable():
    S = genfun_closed(VPolytope(((0, 0), (F(5, 2), 0), (1, F(7, 3))), 2))
    s = S.to_json()
    assert ShortRationalFunction.from_json(s) == S
    assert ShortRationalFunction.from_json(s).to_json() == s
    assert genfun_closed(VPolytope(((1, F(7, 3)), (0, 0), (F(5, 2), 0)), 2)).to_json() == s
