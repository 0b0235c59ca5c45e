"""Cone-ordered set-valued maps X -> P(Z) with polyhedral graphs.

A map is stored through its graph, a finite union of e-polyhedra in
``X x Z`` (x-block first), plus regions of X where the value is all of Z.
The ordering cone K is a closed polyhedral cone.
"""
import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple

from .core import (
    EPolyhedron, LinConstraint, RatVector, WEAK, dot, embed, equality, eval_membership,
    is_nonempty, nonempty, project, simplify, substitute, vec, vertices,
)
from .errors import DimensionMismatch, MalformedInstance
from .geometry import (
    EUnion, clconv, complement, eco_hull, uncovered_point, union_contains,
)


def _primitive(v: RatVector) -> RatVector:
    return LinConstraint(v, Fraction(0)).normalized().normal


def cone_rays(constraints: Sequence[LinConstraint], dim: int) -> Tuple[RatVector, ...]:
    """Generators of ``{z : <a_j, z> <= 0}``.

    The nonzero vertices of the cone cut by the box ``[-1, 1]^dim`` generate it
    (any cone point scaled into the box is a convex combination of them).  The
    list may contain non-extreme directions.
    """
    box = EPolyhedron.box([-1] * dim, [1] * dim)
    P = EPolyhedron(dim, tuple(constraints) + box.constraints)
    rays = {_primitive(v) for v in vertices(P) if any(v)}
    return tuple(sorted(rays))


@dataclass(frozen=True)
class ConeK:
    dim: int
    constraints: Tuple[LinConstraint, ...]
    generators: Tuple[RatVector, ...]
    pointed: bool

    def __post_init__(self):
        for c in self.constraints:
            if c.strict or c.bound != 0 or c.dim != self.dim:
                raise MalformedInstance("cone constraints must be weak, through the origin, of dim %d" % self.dim)
        if not self.generators:
            raise MalformedInstance("cone must not be {0}")
        if not any(any(c.normal) for c in self.constraints):
            raise MalformedInstance("cone must not be the whole space")

    @classmethod
    def from_constraints(cls, normals) -> "ConeK":
        normals = [vec(a) for a in normals]
        dim = len(normals[0])
        cons = tuple(LinConstraint(a, Fraction(0), WEAK) for a in normals)
        from .core import rank
        return cls(dim, cons, cone_rays(cons, dim), rank(normals, dim) == dim)

    @classmethod
    def from_generators(cls, gens) -> "ConeK":
        gens = [vec(g) for g in gens]
        dim = len(gens[0])
        dual = tuple(LinConstraint(g, Fraction(0), WEAK) for g in gens)
        normals = cone_rays(dual, dim)
        if not normals:
            raise MalformedInstance("cone generated by %s is the whole space" % (gens,))
        return cls.from_constraints(normals)

    @classmethod
    def orthant(cls, dim: int) -> "ConeK":
        normals = []
        for i in range(dim):
            e = [0] * dim
            e[i] = -1
            normals.append(e)
        return cls.from_constraints(normals)

    def __contains__(self, z) -> bool:
        return all(c.holds(vec(z)) for c in self.constraints)

    def polar(self) -> "ConeK":
        return polar_cone(self)

    def in_dual(self, zstar) -> bool:
        """``zstar in K* \\ {0}`` where K* is the negative polar cone."""
        zstar = vec(zstar)
        return any(zstar) and all(dot(g, zstar) <= 0 for g in self.generators)

    def as_polyhedron(self) -> EPolyhedron:
        return EPolyhedron(self.dim, self.constraints)


def polar_cone(K: ConeK) -> ConeK:
    """Negative polar ``K* = {z* : <z, z*> <= 0 for all z in K}``, one row per generator."""
    return ConeK.from_constraints(list(K.generators))


@dataclass(frozen=True)
class SetValuedMap:
    dimX: int
    dimZ: int
    graph: EUnion
    cone: ConeK
    # regions of X on which the value is the whole of Z
    full_value_regions: Tuple[EPolyhedron, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "full_value_regions", tuple(self.full_value_regions))
        if self.graph.dim != self.dimX + self.dimZ:
            raise DimensionMismatch("graph of dim %d for map Q^%d -> Q^%d" % (self.graph.dim, self.dimX, self.dimZ))
        if self.cone.dim != self.dimZ:
            raise DimensionMismatch("cone of dim %d for Z = Q^%d" % (self.cone.dim, self.dimZ))
        for r in self.full_value_regions:
            if r.dim != self.dimX:
                raise DimensionMismatch("full-value region of dim %d" % r.dim)

    @classmethod
    def from_pieces(cls, dimX, dimZ, pieces, cone=None, full_value_points=()) -> "SetValuedMap":
        cone = cone or ConeK.orthant(dimZ)
        regions = tuple(EPolyhedron.point(p) for p in full_value_points)
        return cls(dimX, dimZ, EUnion(dimX + dimZ, tuple(pieces)), cone, regions)

    @classmethod
    def empty(cls, dimX, dimZ, cone=None) -> "SetValuedMap":
        return cls.from_pieces(dimX, dimZ, (), cone)

    def value(self, x) -> EUnion:
        """f(x) itself (without adding K)."""
        x = vec(x)
        if len(x) != self.dimX:
            raise DimensionMismatch("point of dim %d, X = Q^%d" % (len(x), self.dimX))
        if any(eval_membership(r, x) for r in self.full_value_regions):
            return EUnion(self.dimZ, (EPolyhedron.whole(self.dimZ),))
        return EUnion(self.dimZ, tuple(substitute(p, 0, x) for p in self.graph.pieces)).normalized()


@dataclass(frozen=True)
class KEpigraph:
    dimX: int
    dimZ: int
    cone: ConeK
    set: EUnion

    def __contains__(self, xz) -> bool:
        return xz in self.set

    @property
    def pieces(self):
        return self.set.pieces


def add_cone(P: EPolyhedron, K: ConeK, offset: int) -> EPolyhedron:
    """``P + ({0} x K)`` with K acting on coordinates ``offset ..``."""
    n = P.dim
    m = K.dim
    cons = []
    for c in P.constraints:
        az = c.normal[offset:offset + m]
        cons.append(LinConstraint(c.normal + tuple(-v for v in az), c.bound, c.kind))
    zero = (Fraction(0),) * n
    for c in K.constraints:
        cons.append(LinConstraint(zero + c.normal, Fraction(0), WEAK))
    return project(EPolyhedron(n + m, tuple(cons)), n)


@lru_cache(maxsize=512)
def build_epi(f: SetValuedMap) -> KEpigraph:
    """K-epigraph ``{(x, z) : z in f(x) + K}`` as a union of e-polyhedra."""
    pieces = []
    for p in f.graph.pieces:
        if not nonempty(p):
            continue
        pieces.append(add_cone(p, f.cone, f.dimX))
    for r in f.full_value_regions:
        if nonempty(r):
            pieces.append(simplify(embed(r, f.dimX + f.dimZ, 0)))
    return KEpigraph(f.dimX, f.dimZ, f.cone, EUnion(f.dimX + f.dimZ, tuple(pieces)).normalized())


def fiber(E: KEpigraph, x0) -> EUnion:
    """``f_K(x0)`` read off the epigraph."""
    x0 = vec(x0)
    if len(x0) != E.dimX:
        raise DimensionMismatch("point of dim %d, X = Q^%d" % (len(x0), E.dimX))
    return EUnion(E.dimZ, tuple(substitute(p, 0, x0) for p in E.pieces)).normalized()


def domain(E: KEpigraph) -> EUnion:
    """Effective domain as the union of the projected pieces."""
    return EUnion(E.dimX, tuple(project(p, E.dimX) for p in E.pieces)).normalized()


def full_fiber_point(E: KEpigraph) -> Optional[RatVector]:
    """Some x whose fiber is all of Z, or None.

    Those x are exactly the points of X outside the projection of the
    epigraph's complement.
    """
    if not E.pieces:
        return None
    # a piece with no z-dependence has full fibres over its projection
    for p in E.pieces:
        if not any(any(c.normal[E.dimX:]) for c in p.constraints):
            ok, w = is_nonempty(p)
            if ok:
                return w[:E.dimX]
    if len(E.pieces) == 1:
        return None
    rest = complement(E.set)
    shadows = EUnion(E.dimX, tuple(project(p, E.dimX) for p in rest.pieces))
    return uncovered_point(EPolyhedron.whole(E.dimX), shadows)


class Properness(enum.Enum):
    PROPER = "proper"
    EMPTY_EVERYWHERE = "empty-everywhere"
    TAKES_WHOLE_SPACE = "takes-whole-space"


@lru_cache(maxsize=512)
def classify_epigraph(E: KEpigraph) -> Properness:
    if not E.pieces:
        return Properness.EMPTY_EVERYWHERE
    if full_fiber_point(E) is not None:
        return Properness.TAKES_WHOLE_SPACE
    return Properness.PROPER


@lru_cache(maxsize=512)
def is_proper(f: SetValuedMap) -> Properness:
    """Classify ``f_K``: proper, empty everywhere, or equal to Z somewhere."""
    if any(nonempty(r) for r in f.full_value_regions):
        return Properness.TAKES_WHOLE_SPACE
    return classify_epigraph(build_epi(f))


def leq_K_at(A: EUnion, B: EUnion, K: ConeK) -> bool:
    """``A <=_K B`` in the lower set-less order, i.e. ``B`` inside ``A + K``."""
    if A.dim != B.dim or A.dim != K.dim:
        raise DimensionMismatch("dims %d, %d, cone %d" % (A.dim, B.dim, K.dim))
    shifted = EUnion(A.dim, tuple(add_cone(p, K, 0) for p in A.normalized().pieces))
    return all(union_contains(shifted, q) for q in B.normalized().pieces)


def k_closed_hull(f: SetValuedMap) -> KEpigraph:
    """Epigraph of the K-closed hull: ``cl(epi_K f)``."""
    from .core import closure
    E = build_epi(f)
    pieces = tuple(closure(p) for p in E.pieces)
    return KEpigraph(E.dimX, E.dimZ, E.cone, EUnion(E.set.dim, pieces).normalized())


def k_clconv_hull(f: SetValuedMap) -> KEpigraph:
    """Epigraph of the K-closed K-convex hull: ``cl conv(epi_K f)``."""
    E = build_epi(f)
    if not E.pieces:
        return E
    return KEpigraph(E.dimX, E.dimZ, E.cone, EUnion(E.set.dim, (clconv(E.set),)))


def k_eco_hull(f: SetValuedMap, max_dim: Optional[int] = None) -> KEpigraph:
    """Epigraph of the K-e-convex hull: ``eco(epi_K f)``."""
    E = build_epi(f)
    if not E.pieces:
        return E
    return KEpigraph(E.dimX, E.dimZ, E.cone, EUnion(E.set.dim, (eco_hull(E.set, max_dim),)))


def epigraph_equal(A: KEpigraph, B: KEpigraph) -> bool:
    from .geometry import union_equal
    return union_equal(A.set, B.set)


# -- scalar functions ----------------------------------------------------------

FINITE, PLUS_INF, MINUS_INF = "finite", "+inf", "-inf"


@dataclass(frozen=True)
class ScalarPiece:
    """``g(x) = <slope, x> + intercept`` (or an infinite value) on ``domain``."""

    domain: EPolyhedron
    value: str = FINITE
    slope: Optional[RatVector] = None
    intercept: Fraction = Fraction(0)


@dataclass(frozen=True)
class ScalarFunction:
    """Piecewise-affine extended-real function; +inf off the listed domains."""

    dim: int
    pieces: Tuple[ScalarPiece, ...]

    def validate(self) -> None:
        for p in self.pieces:
            if p.domain.dim != self.dim:
                raise MalformedInstance("piece domain of dim %d in function on Q^%d" % (p.domain.dim, self.dim))
            if p.value not in (FINITE, PLUS_INF, MINUS_INF):
                raise MalformedInstance("unknown value kind %r" % (p.value,))
            if p.value == FINITE and (p.slope is None or len(p.slope) != self.dim):
                raise MalformedInstance("finite piece needs a slope of length %d" % self.dim)
        for i, p in enumerate(self.pieces):
            for q in self.pieces[i + 1:]:
                if nonempty(EPolyhedron(self.dim, p.domain.constraints + q.domain.constraints)):
                    raise MalformedInstance("piece domains overlap")

    def __call__(self, x):
        x = vec(x)
        for p in self.pieces:
            if eval_membership(p.domain, x):
                if p.value == FINITE:
                    return dot(p.slope, x) + p.intercept
                return p.value
        return PLUS_INF


def scalar_embed(g: ScalarFunction) -> SetValuedMap:
    """The set-valued companion: ``{g(x)}`` where finite, Z where -inf, empty where +inf."""
    g.validate()
    n = g.dim
    graph = []
    regions = []
    for p in g.pieces:
        if p.value == FINITE:
            lifted = embed(p.domain, n + 1, 0)
            # z - <slope, x> = intercept
            graph.append(lifted.with_constraints(equality(tuple(-s for s in p.slope) + (Fraction(1),), p.intercept)))
        elif p.value == MINUS_INF:
            regions.append(p.domain)
    return SetValuedMap(n, 1, EUnion(n + 1, tuple(graph)), ConeK.orthant(1), tuple(regions))


def scalar_epigraph(g: ScalarFunction) -> EUnion:
    """``{(x, z) : g(x) <= z}`` built straight from the pieces."""
    n = g.dim
    out = []
    for p in g.pieces:
        lifted = embed(p.domain, n + 1, 0)
        if p.value == FINITE:
            out.append(lifted.with_constraints((LinConstraint(tuple(p.slope) + (Fraction(-1),), -p.intercept, WEAK),)))
        elif p.value == MINUS_INF:
            out.append(lifted)
    return EUnion(n + 1, tuple(out)).normalized()
