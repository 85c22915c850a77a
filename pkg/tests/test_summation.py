import random
from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from ehrhart.genfun import ShortRationalFunction, genfun_closed
from ehrhart.polytope import VPolytope
from ehrhart.summation import (Polynomial, apply_diff_operator, bernoulli, generic_direction,
                               specialize_at_one, sum_polynomial)

from _instances import enumerate_points, random_polytope


def random_poly(rng, n, deg=4):
    terms = {}
    for _ in range(rng.randint(1, 5)):
        e = [0] * n
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(n)] += 1
        terms[tuple(e)] = F(rng.randint(-5, 5), rng.randint(1, 3))
    return Polynomial(n, terms)


def test_bernoulli():
    assert [bernoulli(i) for i in range(5)] == [1, F(-1, 2), F(1, 6), 0, F(-1, 30)]


def test_diff_operator_examples():
    S = ShortRationalFunction.build(1, [(1, (0,), [((1,), 1)])])
    T = apply_diff_operator(Polynomial(1, {(1,): 1}), S)
    assert T == ShortRationalFunction.build(1, [(1, (1,), [((1,), 2)])])
    assert apply_diff_operator(Polynomial.constant(1), S) == S
    mono = ShortRationalFunction.build(1, [(1, (3,), [])])
    assert apply_diff_operator(Polynomial(1, {(2,): 1}), mono) == ShortRationalFunction.build(1, [(9, (3,), [])])


def test_specialize_examples():
    seg = ShortRationalFunction.build(1, [(1, (0,), [((1,), 1)]), (1, (2,), [((-1,), 1)])])
    assert specialize_at_one(seg) == 3
    assert specialize_at_one(ShortRationalFunction.build(1, [(1, (5,), [])])) == 1
    S = apply_diff_operator(Polynomial(1, {(2,): 1}), genfun_closed(VPolytope(((0,), (3,)), 1)))
    assert specialize_at_one(S) == 14


def test_sum_polynomial_examples():
    one = Polynomial.constant(2)
    assert sum_polynomial(one, VPolytope(((0, 0), (2, 0), (0, 2)), 2)) == 6
    assert sum_polynomial(Polynomial(2, {(1, 1): 1}), VPolytope(((0, 0), (2, 0), (0, 2), (2, 2)), 2)) == 9
    assert sum_polynomial(Polynomial(1, {(2,): 1}), VPolytope(((0,), (4,)), 1), open=True) == 14
    assert sum_polynomial(Polynomial.constant(1), VPolytope(((F(1, 3),), (F(2, 3),)), 1)) == 0


def test_oracle_equivalence_and_degree_bound():
    rng = random.Random(4)
    for _ in range(15):
        n = rng.randint(1, 3)
        P = random_polytope(rng, n, bound=3)
        f = random_poly(rng, n)
        S = apply_diff_operator(f, genfun_closed(P))
        assert all(t.multiplicity <= n + f.degree for t in S.terms)
        assert sum_polynomial(f, P) == sum(f(m) for m in enumerate_points(P))
        assert sum_polynomial(f, P, open=True) == sum(f(m) for m in enumerate_points(P, True))


def test_direction_independence():
    rng = random.Random(8)
    for _ in range(10):
        n = rng.randint(1, 3)
        P = random_polytope(rng, n, bound=3)
        S = apply_diff_operator(random_poly(rng, n), genfun_closed(P))
        assert specialize_at_one(S, generic_direction(S)) == specialize_at_one(S, generic_direction(S, skip=1))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.fractions(-3, 3, max_denominator=5))
def test_linearity(seed, alpha):
    rng = random.Random(seed)
    n = rng.randint(1, 2)
    P = random_polytope(rng, n, bound=2)
    f, g = random_poly(rng, n, 3), random_poly(rng, n, 3)
    lhs = sum_polynomial(f * alpha + g, P)
    assert lhs == alpha * sum_polynomial(f, P) + sum_polynomial(g, P)
