import random
from fractions import Fraction as F

from ehrhart.driver import solve_vandermonde
from ehrhart.lattice import full_subspace, saturate, zero_subspace
from ehrhart.oracle import el_bruteforce
from ehrhart.polytope import Simplex, volume_lattice_coords
from ehrhart.slices import (FiberVolume, SlicePlan, eval_EL, fiber_polytope, fiber_volume_geometric,
                            slice_problem, slicing_hyperplanes)

from _instances import random_simplex, random_subspace, standard_simplex

TRI2 = Simplex(((0, 0), (2, 0), (0, 2)))
E1 = saturate([(1, 0)])


def test_slicing_hyperplanes_examples():
    assert slicing_hyperplanes(TRI2, E1) == [((1,), 0), ((1,), 2)]
    assert slicing_hyperplanes(standard_simplex(2), E1) == [((1,), 0), ((1,), 1)]
    # a vertical edge is parallel to the fibers and contributes nothing beyond its endpoints
    S = Simplex(((0, 0), (0, 1), (1, 0)))
    hyps = slicing_hyperplanes(S, E1)
    assert hyps == [((1,), 0), ((1,), 1)]


def test_fiber_examples():
    assert volume_lattice_coords(fiber_polytope(TRI2, E1, (1,))) == 1
    P = fiber_polytope(TRI2, E1, (2,))
    assert len(P.vertices) == 1 and volume_lattice_coords(P) == 0
    assert fiber_polytope(TRI2, E1, (3,)).empty


def test_el_examples():
    assert eval_EL(TRI2, E1) == 3
    assert eval_EL(standard_simplex(2), E1) == 1
    assert eval_EL(standard_simplex(2), full_subspace(2)) == 3
    assert eval_EL(standard_simplex(2), zero_subspace(2)) == F(1, 2)
    assert eval_EL(TRI2, zero_subspace(2)) == 2
    assert eval_EL(TRI2, full_subspace(2)) == 6
    half = Simplex(((0, 0), (1, 0), (0, F(1, 2))))
    assert eval_EL(half, E1) == F(1, 2)
    assert eval_EL(half, saturate([(0, 1)])) == 1


def test_phi_example():
    plan = SlicePlan.build(TRI2, E1)
    assert len(plan.pieces) == 1
    phi = plan.pieces[0].phi
    assert [phi((x,)) for x in range(3)] == [2, 1, 0]
    phi = SlicePlan.build(standard_simplex(2), E1).pieces[0].phi
    assert phi((F(1, 3),)) == F(2, 3)
    # zero-dimensional fibers have volume 1
    assert all(p.phi((F(1, 7), F(1, 7))) == 1 for p in SlicePlan.build(TRI2, full_subspace(2)).pieces)


def test_fast_fiber_volume_matches_geometry():
    rng = random.Random(6)
    for _ in range(8):
        d = rng.randint(2, 4)
        S = random_simplex(rng, d)
        L = random_subspace(rng, d, rng.randint(1, min(2, d - 1)))
        prob = slice_problem(S, L)
        fast = FiberVolume(prob)
        for _ in range(10):
            x = tuple(F(rng.randint(-12, 12), rng.randint(1, 4)) for _ in range(L.dim))
            assert fast(x) == fiber_volume_geometric(prob, x)


def test_phi_continuity_and_degree():
    rng = random.Random(12)
    for _ in range(6):
        d = rng.randint(2, 4)
        S = random_simplex(rng, d)
        L = random_subspace(rng, d, rng.randint(1, min(2, d - 1)))
        plan = SlicePlan.build(S, L)
        prob = slice_problem(S, L)
        for piece in plan.pieces:
            assert piece.phi.degree <= d - L.dim
            for v in piece.chamber.closure.vertices:
                assert piece.phi(v) == fiber_volume_geometric(prob, v)
        for a in plan.pieces:
            for b in plan.pieces:
                shared = set(a.chamber.closure.vertices) & set(b.chamber.closure.vertices)
                for v in shared:
                    assert a.phi(v) == b.phi(v)


def test_el_matches_bruteforce():
    rng = random.Random(21)
    for _ in range(8):
        d = rng.randint(2, 4)
        S = random_simplex(rng, d)
        L = random_subspace(rng, d, rng.randint(1, min(2, d - 1)))
        assert eval_EL(S, L) == el_bruteforce(S, L)


def test_leading_coefficient_is_volume():
    S = Simplex(((0, 0, 0), (2, 0, 0), (0, F(3, 2), 0), (1, 1, 1)))
    L = saturate([(1, 1, 0)], 3)
    plan = SlicePlan.build(S, L)
    t = 2
    for r in (1, 2):
        ms = [r + s * t for s in range(4)]
        g = solve_vandermonde(ms, [plan.value(m) for m in ms])
        assert g[3] == S.volume()
