import random
from fractions import Fraction as F

import pytest

from evco.core import EPolyhedron, equality, set_equal, strict, weak
from evco.errors import MalformedInstance
from evco.generate import rand_proper_map, simplicial_cone
from evco.geometry import is_e_convex, single, union_equal, union_subset
from evco.minorants import sample_inside
from evco.setvalued import (
    ConeK, PLUS_INF, MINUS_INF, Properness, ScalarFunction, ScalarPiece, SetValuedMap, build_epi,
    domain, epigraph_equal, fiber, is_proper, k_clconv_hull, k_closed_hull, k_eco_hull, leq_K_at,
    polar_cone, scalar_embed, scalar_epigraph,
)


def P(dim, *cons):
    return EPolyhedron(dim, tuple(cons))


def diagonal():
    return SetValuedMap.from_pieces(1, 1, [P(2, strict([-1, 0], 0), *equality([1, -1], 0))])


def point_map(x, z):
    return SetValuedMap.from_pieces(1, 1, [EPolyhedron.point([x, z])])


def test_polar_examples():
    assert set_equal(polar_cone(ConeK.orthant(1)).as_polyhedron(), P(1, weak([1], 0)))
    assert set_equal(polar_cone(ConeK.orthant(2)).as_polyhedron(), P(2, weak([1, 0], 0), weak([0, 1], 0)))
    K = ConeK.from_generators([[1, 0], [1, 1]])
    Ks = polar_cone(K)
    assert set_equal(Ks.as_polyhedron(), P(2, weak([1, 0], 0), weak([1, 1], 0)))
    rng = random.Random(0)
    for _ in range(50):
        zs = (F(rng.randint(-5, 5)), F(rng.randint(-5, 5)))
        assert (zs in Ks) == all(g[0] * zs[0] + g[1] * zs[1] <= 0 for g in ([1, 0], [1, 1]))


def test_cone_validation():
    with pytest.raises(MalformedInstance):
        ConeK.from_constraints([[0, 0]])
    with pytest.raises(MalformedInstance):
        ConeK.from_generators([[1], [-1]])
    assert ConeK.orthant(2).pointed
    assert not ConeK.from_constraints([[-1, 0]]).pointed
    assert ConeK.orthant(1).in_dual([-1]) and not ConeK.orthant(1).in_dual([0])


def test_build_epi_examples():
    E = build_epi(point_map(0, 1))
    assert union_equal(E.set, single(P(2, *equality([1, 0], 0), weak([0, -1], -1))))
    E = build_epi(diagonal())
    assert union_equal(E.set, single(P(2, strict([-1, 0], 0), weak([1, -1], 0))))
    assert not build_epi(SetValuedMap.empty(1, 1)).pieces


def test_fiber_examples():
    E = build_epi(point_map(0, 1))
    assert union_equal(fiber(E, [0]), single(P(1, weak([-1], -1))))
    assert not fiber(E, [1]).pieces
    assert union_equal(fiber(build_epi(diagonal()), [2]), single(P(1, weak([-1], -2))))


def test_properness_examples():
    assert is_proper(SetValuedMap.empty(1, 1)) is Properness.EMPTY_EVERYWHERE
    assert is_proper(diagonal()) is Properness.PROPER
    marked = SetValuedMap.from_pieces(1, 1, [], full_value_points=[[0]])
    assert is_proper(marked) is Properness.TAKES_WHOLE_SPACE
    # a graph that reaches z = -inf at x = 0 also takes the whole space
    slab = SetValuedMap.from_pieces(1, 1, [P(2, *equality([1, 0], 0))])
    assert is_proper(slab) is Properness.TAKES_WHOLE_SPACE


def test_leq_examples():
    K = ConeK.orthant(1)
    ge = lambda v: single(P(1, weak([-1], -v)))
    assert leq_K_at(ge(1), ge(2), K)
    assert not leq_K_at(ge(2), ge(1), K)
    assert leq_K_at(single(EPolyhedron.point([0])), single(EPolyhedron.point([3])), K)


def test_hull_examples():
    f = diagonal()
    assert epigraph_equal(k_eco_hull(f), build_epi(f))
    assert union_equal(k_clconv_hull(f).set, single(P(2, weak([-1, 0], 0), weak([1, -1], 0))))
    g = point_map(0, 1)
    target = single(P(2, *equality([1, 0], 0), weak([0, -1], -1)))
    for hull in (k_closed_hull, k_clconv_hull, k_eco_hull):
        assert union_equal(hull(g).set, target)
    h = SetValuedMap.from_pieces(1, 1, [EPolyhedron.point([0, 1]), EPolyhedron.point([1, 1])])
    box = single(P(2, weak([-1, 0], 0), weak([1, 0], 1), weak([0, -1], -1)))
    assert union_equal(k_clconv_hull(h).set, box)
    assert union_equal(k_eco_hull(h).set, box)


@pytest.mark.parametrize("seed", range(6))
def test_epigraph_absorbs_cone_and_hull_chain(seed):
    rng = random.Random(seed)
    cone = "orthant" if seed % 2 else "simplicial"
    f = rand_proper_map(rng, 1 + seed % 2, 1 + (seed // 2) % 2, cone)
    E = build_epi(f)
    for q in sample_inside(E, rng, 10):
        for g in f.cone.generators:
            assert q[:f.dimX] + tuple(a + b for a, b in zip(q[f.dimX:], g)) in E.set
    eco = k_eco_hull(f).set
    clc = k_clconv_hull(f).set
    assert union_subset(E.set, eco) and union_subset(eco, clc)
    # single-piece graphs are K-e-convex, so the hull is the epigraph
    assert is_e_convex(E.set)[0]
    assert union_equal(eco, E.set)


def test_fibers_of_e_convex_map_are_e_convex():
    E = build_epi(SetValuedMap.from_pieces(1, 2, [P(3, weak([1, 0, 0], 1), weak([-1, 0, 0], 0),
                                                    strict([1, -1, 0], 0), weak([0, 1, 1], 2))],
                                           simplicial_cone(2)))
    for x in (0, F(1, 2), 1):
        assert is_e_convex(fiber(E, [x]))[0]


def test_domain_projection():
    assert union_equal(domain(build_epi(diagonal())), single(P(1, strict([-1], 0))))


# -- scalar functions --------------------------------------------------------

def kink():
    """g = 1 at 0, g(x) = x for x > 0, +inf for x < 0."""
    return ScalarFunction(1, (ScalarPiece(EPolyhedron.point([0]), slope=(F(0),), intercept=F(1)),
                              ScalarPiece(P(1, strict([-1], 0)), slope=(F(1),))))


def scalar_oracle(g, x, z):
    v = g(x)
    if v == PLUS_INF:
        return False
    if v == MINUS_INF:
        return True
    return v <= z


@pytest.mark.parametrize("g", [
    ScalarFunction(1, (ScalarPiece(P(1, weak([-1], 0)), slope=(F(1),)),)),
    ScalarFunction(1, ()),
    kink(),
    ScalarFunction(1, (ScalarPiece(P(1, strict([1], 0)), MINUS_INF), ScalarPiece(P(1, weak([-1], 0)), slope=(F(2),)))),
])
def test_scalar_round_trip(g):
    E = build_epi(scalar_embed(g)).set
    assert union_equal(E, scalar_epigraph(g))
    for i in range(-6, 7):
        for j in range(-6, 7):
            x, z = F(i, 3), F(j, 3)
            assert ((x, z) in E) == scalar_oracle(g, [x], z)


def test_scalar_plus_infinity_is_empty_map():
    f = scalar_embed(ScalarFunction(1, (ScalarPiece(P(1), PLUS_INF),)))
    assert is_proper(f) is Properness.EMPTY_EVERYWHERE


def test_kink_hull_is_strictly_inside_closed_hull():
    f = scalar_embed(kink())
    eco = k_eco_hull(f).set
    clc = k_clconv_hull(f).set
    assert union_subset(eco, clc) and not union_subset(clc, eco)
    # the closed hull adds the fiber over 0 down to 0; the e-convex hull stops short
    assert (F(0), F(0)) in clc and (F(0), F(0)) not in eco
    assert (F(0), F(1, 2)) in eco


def test_overlapping_scalar_pieces_are_refused():
    g = ScalarFunction(1, (ScalarPiece(P(1, weak([1], 1)), slope=(F(0),)), ScalarPiece(P(1, weak([-1], 0)), slope=(F(1),))))
    with pytest.raises(MalformedInstance):
        scalar_embed(g)
