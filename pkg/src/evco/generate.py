"""Seeded random instances with small denominators (at most 10)."""
import random
from fractions import Fraction
from typing import List, Optional

from .core import EPolyhedron, LinConstraint, STRICT, WEAK, embed, nonempty
from .geometry import EUnion, is_e_convex
from .io import Instance
from .setvalued import ConeK, Properness, SetValuedMap, build_epi, is_proper

MAX_DEN = 10


def rand_rat(rng: random.Random, lo: int = -5, hi: int = 5) -> Fraction:
    den = rng.randint(1, MAX_DEN)
    return Fraction(rng.randint(lo * den, hi * den), den)


def rand_constraint(rng: random.Random, dim: int, strict_prob: float = 0.5) -> LinConstraint:
    while True:
        a = tuple(Fraction(rng.randint(-3, 3)) for _ in range(dim))
        if any(a):
            break
    kind = STRICT if rng.random() < strict_prob else WEAK
    return LinConstraint(a, rand_rat(rng, -3, 3), kind)


def box_constraints(rng: random.Random, dim: int, bound: int = 3, strict_prob: float = 0.3) -> List[LinConstraint]:
    out = []
    for i in range(dim):
        for sign in (1, -1):
            a = [Fraction(0)] * dim
            a[i] = Fraction(sign)
            kind = STRICT if rng.random() < strict_prob else WEAK
            out.append(LinConstraint(tuple(a), Fraction(rng.randint(1, bound * MAX_DEN), MAX_DEN), kind))
    return out


def rand_polyhedron(rng: random.Random, dim: int, n_constraints: int, bounded: bool = True,
                    strict_prob: float = 0.5, tries: int = 200) -> EPolyhedron:
    """Random nonempty e-polyhedron; resampled until nonempty."""
    for _ in range(tries):
        cons = [rand_constraint(rng, dim, strict_prob) for _ in range(n_constraints)]
        if bounded:
            cons += box_constraints(rng, dim)
        P = EPolyhedron(dim, tuple(cons))
        if nonempty(P):
            return P
    raise RuntimeError("could not sample a nonempty polyhedron")


def rand_union(rng: random.Random, dim: int, pieces: int, n_constraints: int, bounded: bool = True) -> EUnion:
    return EUnion(dim, tuple(rand_polyhedron(rng, dim, n_constraints, bounded) for _ in range(pieces)))


def simplicial_cone(dimZ: int) -> ConeK:
    """A fixed non-orthant simplicial cone: generators e_1 and e_1 + e_i."""
    if dimZ == 1:
        return ConeK.orthant(1)
    gens = []
    for i in range(dimZ):
        g = [0] * dimZ
        g[0] = 1
        if i:
            g[i] = 1
        gens.append(g)
    return ConeK.from_generators(gens)


def make_cone(name: str, dimZ: int) -> ConeK:
    if name == "orthant":
        return ConeK.orthant(dimZ)
    if name == "simplicial":
        return simplicial_cone(dimZ)
    raise ValueError("unknown cone %r" % (name,))


def rand_map(rng: random.Random, dimX: int, dimZ: int, pieces: int = 1, n_constraints: int = 2,
             cone: str = "orthant", bounded: bool = True) -> SetValuedMap:
    K = make_cone(cone, dimZ)
    graph = rand_union(rng, dimX + dimZ, pieces, n_constraints, bounded)
    return SetValuedMap(dimX, dimZ, graph, K)


def rand_proper_map(rng: random.Random, dimX: int, dimZ: int, cone: str = "orthant", n_constraints: int = 2,
                    tries: int = 100) -> SetValuedMap:
    """Single graph piece (so K-e-convex) whose K-epigraph is proper."""
    for _ in range(tries):
        f = rand_map(rng, dimX, dimZ, 1, n_constraints, cone, bounded=rng.random() < 0.7)
        if is_proper(f) is Properness.PROPER:
            return f
    raise RuntimeError("could not sample a proper map")


def rand_point_piece(rng: random.Random, dimX: int, dimZ: int) -> EPolyhedron:
    """A bounded graph piece over one x: a point of X times a small box in Z."""
    x = [Fraction(rng.randint(-4, 4), rng.randint(1, 2)) for _ in range(dimX)]
    cons = []
    for i, v in enumerate(x):
        a = [Fraction(0)] * dimX
        a[i] = Fraction(1)
        cons.append(LinConstraint(tuple(a), v, WEAK))
        cons.append(LinConstraint(tuple(-t for t in a), -v, WEAK))
    base = EPolyhedron(dimX, tuple(cons))
    zbox = rand_polyhedron(rng, dimZ, 0, bounded=True, strict_prob=0.3)
    return embed(base, dimX + dimZ, 0).with_constraints(embed(zbox, dimX + dimZ, dimX).constraints)


def rand_non_econvex_map(rng: random.Random, dimX: int = 1, dimZ: int = 1, cone: str = "orthant",
                         tries: int = 100) -> SetValuedMap:
    """Two bounded graph pieces whose K-epigraph is not e-convex."""
    K = make_cone(cone, dimZ)
    for _ in range(tries):
        if rng.random() < 0.5:
            pieces = (rand_point_piece(rng, dimX, dimZ), rand_point_piece(rng, dimX, dimZ))
        else:
            pieces = tuple(rand_polyhedron(rng, dimX + dimZ, 1, True) for _ in range(2))
        f = SetValuedMap(dimX, dimZ, EUnion(dimX + dimZ, pieces), K)
        if not is_e_convex(build_epi(f).set)[0]:
            return f
    raise RuntimeError("could not sample a non-e-convex map")


def gen_instance(seed: int, kind: str = "set", dim: int = 1, pieces: int = 2, constraints: int = 2,
                 cone: str = "orthant", dimZ: Optional[int] = None) -> Instance:
    """Deterministic instance for a seed and profile."""
    rng = random.Random(seed)
    if kind == "set":
        return Instance("set", rand_union(rng, dim, pieces, constraints), seed)
    if kind == "map":
        f = rand_map(rng, dim, dimZ or 1, pieces, constraints, cone)
        return Instance("map", f, seed)
    raise ValueError("kind must be 'set' or 'map'")
