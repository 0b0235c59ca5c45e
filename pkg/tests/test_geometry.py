import random
from fractions import Fraction as F

import pytest

from evco.core import EPolyhedron, closure, contains, equality, remove_redundant, set_equal, strict, sup_linear, weak
from evco.errors import UnsupportedInstance
from evco.generate import rand_constraint, rand_polyhedron, rand_union
from evco.geometry import (
    EUnion, _clconv_lifted, boxplus, certificate_is_sound, clconv, eco_hull, eco_membership, is_e_convex, separate_point,
    generators, single, union_equal, verify_eco_associativity,
)


def P(dim, *cons):
    return EPolyhedron(dim, tuple(cons))


def interval(lo, hi, lo_open=True, hi_open=True):
    return P(1, (strict if lo_open else weak)([-1], -lo), (strict if hi_open else weak)([1], hi))


def open_square():
    return P(2, strict([1, 0], 1), strict([-1, 0], 0), strict([0, 1], 1), strict([0, -1], 0))


def square_and_corner():
    return EUnion(2, (open_square(), EPolyhedron.point([1, 1])))


TWO_INTERVALS = EUnion(1, (interval(0, 1), interval(1, 2)))


def test_separate_point_examples():
    assert separate_point(P(1, strict([1], 0)), [0]).functional == (1,)
    assert separate_point(P(1, weak([1], 0)), [1]).functional == (1,)
    piece = P(2, strict([1, 0], 0), weak([0, 1], 1))
    cert = separate_point(piece, [0, 0])
    assert cert.functional == (1, 0)
    s = sup_linear(piece, [1, 0])
    assert s.value == 0 and not s.attained
    assert certificate_is_sound(single(piece), [0, 0], cert.functional)
    assert separate_point(piece, [-1, 0]) is None


def test_eco_membership_of_interval_union():
    assert eco_membership(TWO_INTERVALS, [1]) == (True, None)
    ok, a = eco_membership(TWO_INTERVALS, [0])
    assert not ok and a == (-1,)
    assert certificate_is_sound(TWO_INTERVALS, [0], a)


def test_eco_membership_on_polytope_vertex():
    tri = P(2, weak([-1, 0], 0), weak([0, -1], 0), weak([1, 1], 1))
    for v in ([0, 0], [1, 0], [0, 1]):
        assert eco_membership(single(tri), v)[0]


def test_eco_hull_of_interval_union():
    assert set_equal(eco_hull(TWO_INTERVALS), P(1, strict([-1], 0), strict([1], 2)))


def test_eco_hull_of_square_and_corner():
    H = eco_hull(square_and_corner())
    expected = P(2, weak([1, 0], 1), weak([0, 1], 1), strict([-1, 0], 0), strict([0, -1], 0),
                 strict([1, -1], 1), strict([-1, 1], 1))
    assert set_equal(H, expected)
    for i in range(21):
        for j in range(21):
            x = (F(i - 5, 10), F(j - 5, 10))
            assert eco_membership(square_and_corner(), x)[0] == (x in H)


def test_eco_hull_of_polytope_is_itself():
    tri = P(2, weak([-1, 0], 0), weak([0, -1], 0), weak([1, 1], 1))
    other = P(2, weak([-1, 0], 0), weak([0, -1], 0), weak([1, 1], 1), weak([1, 0], 1))
    assert set_equal(eco_hull(EUnion(2, (tri, other))), tri)


def test_boxplus_examples():
    closed01 = interval(0, 1, False, False)
    zero = EPolyhedron.point([0])
    assert set_equal(boxplus(single(closed01), single(zero)), closed01)
    assert set_equal(boxplus(single(interval(0, 1)), single(interval(0, 1))), interval(0, 2))
    assert set_equal(boxplus(single(interval(0, 1)), single(interval(1, 2))), interval(1, 3))


def test_associativity_examples():
    c = [single(interval(a, a + 1, False, False)) for a in range(3)]
    assert verify_eco_associativity(*c)
    o = [single(interval(a, a + 2)) for a in range(3)]
    assert verify_eco_associativity(*o)
    two_points = EUnion(1, (EPolyhedron.point([0]), EPolyhedron.point([1])))
    assert verify_eco_associativity(single(interval(0, 1)), two_points, single(interval(0, 1, False, False)))


def test_is_e_convex_examples():
    assert is_e_convex(single(open_square()))[0]
    ok, w = is_e_convex(TWO_INTERVALS)
    assert not ok and w == (1,)
    assert is_e_convex(EUnion(1, (interval(0, 1, False, False), interval(1, 2, False, False))))[0]


def test_unbounded_union_hull_is_exact():
    # (-inf, 0) u (0, +inf) has the whole line as e-convex hull
    U = EUnion(1, (P(1, strict([1], 0)), P(1, strict([-1], 0))))
    H = eco_hull(U)
    assert set_equal(H, EPolyhedron.whole(1))
    assert not is_e_convex(U)[0]


def test_high_dimension_is_unsupported():
    U = EUnion(5, (EPolyhedron.point([0] * 5), EPolyhedron.point([1] * 5)))
    with pytest.raises(UnsupportedInstance):
        eco_hull(U)


@pytest.mark.parametrize("seed", range(8))
def test_hull_is_extensive_idempotent_and_inside_closure(seed):
    rng = random.Random(seed)
    U = rand_union(rng, 2, 2, 2)
    H = eco_hull(U)
    assert all(contains(H, p) for p in U.pieces)
    assert set_equal(eco_hull(single(H), shortcut=False), H)
    assert union_equal(single(eco_hull(single(H))), single(H))


@pytest.mark.parametrize("seed", range(4))
def test_random_directions_never_separate_hull_points(seed):
    rng = random.Random(seed)
    U = rand_union(rng, 2, 2, 2)
    H = eco_hull(U)
    pts = [(F(rng.randint(-30, 30), 10), F(rng.randint(-30, 30), 10)) for _ in range(40)]
    inside = [x for x in pts if eco_membership(U, x)[0]]
    for x in inside:
        assert x in H
        for _ in range(50):
            d = (F(rng.randint(-5, 5)), F(rng.randint(-5, 5)))
            if any(d):
                assert not certificate_is_sound(U, x, d)
    for x in pts:
        ok, a = eco_membership(U, x)
        if not ok:
            assert certificate_is_sound(U, x, a)


# -- closed convex hull --------------------------------------------------------

def test_generators_of_simple_pieces():
    pts, rays, lines = generators(P(2, weak([-1, 0], 0), weak([0, -1], 0)))
    assert pts == [(0, 0)] and rays == [(0, 1), (1, 0)] and lines == []
    pts, rays, lines = generators(P(2, weak([0, 1], 1), weak([0, -1], 0)))
    assert len(lines) == 1 and not rays and {p[1] for p in pts} == {0, 1}


def test_clconv_of_point_and_ray():
    U = EUnion(2, (EPolyhedron.point([0, 0]), P(2, *equality([0, 1], 1), weak([-1, 0], 0))))
    # the hull of the origin and the ray from (0, 1) to the right
    assert set_equal(clconv(U), P(2, weak([0, -1], 0), weak([0, 1], 1), weak([-1, 0], 0)))


def random_piece(rng, n):
    r = rng.random()
    if r < 0.4:
        return rand_polyhedron(rng, n, rng.randint(1, 2))
    if r < 0.6:
        return EPolyhedron.point([F(rng.randint(-3, 3)) for _ in range(n)])
    if r < 0.8:
        return EPolyhedron(n, tuple(rand_constraint(rng, n) for _ in range(rng.randint(1, 3))))
    a = [F(1)] + [F(rng.randint(-2, 2)) for _ in range(n - 1)]
    return EPolyhedron(n, tuple(equality(a, F(rng.randint(-2, 2)))) + (rand_constraint(rng, n),))


@pytest.mark.parametrize("seed", range(40))
def test_clconv_routes_agree(seed):
    rng = random.Random(seed)
    n = 1 + seed % 3
    U = EUnion(n, tuple(random_piece(rng, n) for _ in range(rng.randint(2, 3))))
    pieces = [remove_redundant(closure(p)) for p in U.pieces]
    pieces = [p for p in pieces if not p.is_canonical_empty()]
    if len(pieces) < 2:
        return
    assert set_equal(clconv(U), _clconv_lifted(pieces, n))
