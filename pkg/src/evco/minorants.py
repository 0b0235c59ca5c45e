"""Affine minorants of cone-ordered set-valued maps.

An affine map here is ``a(x) = S(x) + z~`` on its domain and empty elsewhere,
with ``S(x) = {z : <x, x*> + <z, z*> < 0}``.  Three domain flavours are
supported: an e-polyhedron C, an open half-space and the whole space.
"""
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .core import (
    EPolyhedron, LinConstraint, RatVector, STRICT, contains, dot, eval_membership,
    is_nonempty, project, rat_str, vec,
)
from .errors import DimensionMismatch, ImproperMap, NotEConvex, PointInside
from .geometry import EUnion, eco_hull, is_e_convex, separate_point
from .setvalued import (
    ConeK, KEpigraph, Properness, SetValuedMap, build_epi, classify_epigraph, is_proper, polar_cone,
)

MF, C_FAMILY, E_FAMILY = "Mf", "C", "E"
FAMILIES = (MF, C_FAMILY, E_FAMILY)


@dataclass(frozen=True)
class OpenHalfspace:
    ystar: RatVector
    alpha: Fraction


@dataclass(frozen=True)
class WholeSpace:
    pass


Domain = Union[EPolyhedron, OpenHalfspace, WholeSpace]


def domain_polyhedron(domain: Domain, dimX: int) -> EPolyhedron:
    if isinstance(domain, WholeSpace):
        return EPolyhedron.whole(dimX)
    if isinstance(domain, OpenHalfspace):
        return EPolyhedron(dimX, (LinConstraint(domain.ystar, domain.alpha, STRICT),))
    if domain.dim != dimX:
        raise DimensionMismatch("domain of dim %d, X = Q^%d" % (domain.dim, dimX))
    return domain


@dataclass(frozen=True)
class EAffineMap:
    xstar: RatVector
    zstar: RatVector
    ztilde: RatVector
    domain: Domain = WholeSpace()

    @property
    def dimX(self):
        return len(self.xstar)

    @property
    def dimZ(self):
        return len(self.zstar)

    @property
    def level(self) -> Fraction:
        """``<z~, z*>``, the right-hand side of the epigraph inequality."""
        return dot(self.ztilde, self.zstar)

    def dual_ok(self, K: ConeK) -> bool:
        return K.dim == self.dimZ and K.in_dual(self.zstar)


def eval_eaffine(a: EAffineMap, x) -> EUnion:
    x = vec(x)
    if len(x) != a.dimX:
        raise DimensionMismatch("point of dim %d, X = Q^%d" % (len(x), a.dimX))
    if not eval_membership(domain_polyhedron(a.domain, a.dimX), x):
        return EUnion(a.dimZ, ())
    c = LinConstraint(a.zstar, a.level - dot(x, a.xstar), STRICT)
    return EUnion(a.dimZ, (EPolyhedron(a.dimZ, (c,)),))


def epi_of_affine(a: EAffineMap) -> EPolyhedron:
    """``{(x, z) : <x,x*> + <z,z*> < <z~,z*>}`` intersected with ``domain x Z``."""
    n, m = a.dimX, a.dimZ
    zero = (Fraction(0),) * m
    dom = domain_polyhedron(a.domain, n)
    cons = [LinConstraint(c.normal + zero, c.bound, c.kind) for c in dom.constraints]
    cons.append(LinConstraint(tuple(a.xstar) + tuple(a.zstar), a.level, STRICT))
    return EPolyhedron(n + m, tuple(cons))


def is_minorant(a: EAffineMap, f: SetValuedMap) -> bool:
    """``a(x) <=_K f(x)`` for every x, i.e. ``epi_K f`` inside ``epi_K a``.

    The empty map is minorized by everything.
    """
    if a.dimX != f.dimX or a.dimZ != f.dimZ:
        raise DimensionMismatch("minorant on Q^%d x Q^%d, map on Q^%d x Q^%d" % (a.dimX, a.dimZ, f.dimX, f.dimZ))
    if not a.dual_ok(f.cone):
        return False
    A = epi_of_affine(a)
    return all(contains(A, p) for p in build_epi(f).pieces)


def choose_ztilde(zstar: RatVector, target: Fraction, K: ConeK) -> RatVector:
    """Some z~ with ``<z~, z*> = target``, along a cone generator when possible."""
    m = len(zstar)
    basis = []
    for i in range(m):
        e = [Fraction(0)] * m
        e[i] = Fraction(1)
        basis.append(tuple(e))
    for e in list(K.generators) + basis:
        s = dot(e, zstar)
        if s:
            return tuple(target / s * v for v in e)
    raise ValueError("z* must be nonzero")


def _anchor(H: EPolyhedron, dimX: int) -> LinConstraint:
    for c in H.constraints:
        if any(c.normal[dimX:]):
            return c
    raise ImproperMap("epigraph has full fibres")


def _split(c: LinConstraint, dimX: int):
    return c.normal[:dimX], c.normal[dimX:]


def _minorant_target(H: EPolyhedron, dimX: int) -> Tuple[RatVector, RatVector, Fraction]:
    a = _anchor(H, dimX)
    xs, zs = _split(a, dimX)
    return xs, zs, a.bound + (0 if a.strict else 1)


@dataclass
class _Prepared:
    E: KEpigraph
    H: EPolyhedron
    Mf: EPolyhedron
    state: Properness


def prepare(f: SetValuedMap, against_hull: bool = False) -> _Prepared:
    """Epigraph, its e-convex hull H (equal to it when f is K-e-convex) and ``M_f``.

    ``M_f = eco(dom f)`` is the projection of H: that projection is e-convex,
    contains dom f, and ``eco(dom f) x Z`` contains the epigraph.
    """
    E = build_epi(f)
    if not E.pieces:
        empty = EPolyhedron.empty(f.dimX)
        return _Prepared(E, EPolyhedron.empty(f.dimX + f.dimZ), empty, Properness.EMPTY_EVERYWHERE)
    if is_proper(f) is Properness.TAKES_WHOLE_SPACE:
        raise ImproperMap("f takes the value Z somewhere")
    if not against_hull:
        ok, w = is_e_convex(E.set)
        if not ok:
            raise NotEConvex("epigraph is not e-convex; %s lies in its e-convex hull only" % (w,))
    H = eco_hull(E.set)
    state = classify_epigraph(KEpigraph(E.dimX, E.dimZ, E.cone, EUnion(H.dim, (H,))))
    if state is Properness.TAKES_WHOLE_SPACE:
        raise ImproperMap("the K-e-convex hull takes the value Z somewhere")
    return _Prepared(E, H, project(H, f.dimX), state)


def separating_minorant(f: SetValuedMap, point, family: str = MF, C: Optional[EPolyhedron] = None,
                        against_hull: bool = False, prepared: Optional[_Prepared] = None) -> EAffineMap:
    """A minorant of f from ``family`` whose value at x0 misses z0.

    ``point`` is ``(x0, z0)`` concatenated.  With ``against_hull`` the point only
    needs to be outside the K-e-convex hull and f need not be K-e-convex.
    """
    if family not in FAMILIES:
        raise ValueError("family must be one of %s" % (FAMILIES,))
    n, m = f.dimX, f.dimZ
    p0 = vec(point)
    if len(p0) != n + m:
        raise DimensionMismatch("point of dim %d, X x Z = Q^%d" % (len(p0), n + m))
    x0 = p0[:n]
    K = f.cone
    pr = prepared or prepare(f, against_hull)
    if pr.state is Properness.EMPTY_EVERYWHERE:
        # the empty map: its only M_f-affine minorant is itself
        zs = polar_generator(K)
        return EAffineMap((Fraction(0),) * n, zs, (Fraction(0),) * m, OpenHalfspace((Fraction(0),) * n, Fraction(0)))
    target_set = EUnion(n + m, (pr.H,)) if against_hull else pr.E.set
    if p0 in target_set:
        raise PointInside("%s lies in the epigraph" % (p0,))

    if family == C_FAMILY and C is not None and not contains(C, pr.Mf):
        raise ValueError("C must contain dom f")
    domain: Domain = pr.Mf
    if family == C_FAMILY and C is not None:
        domain = C

    if not eval_membership(pr.Mf, x0):
        # a(x0) is empty: any minorant whose domain misses x0 will do
        xs, zs, target = _minorant_target(pr.H, n)
        if family == E_FAMILY:
            cert = separate_point(pr.Mf, x0)
            c = pr.Mf.constraints[cert.violated_constraint_index]
            alpha = c.bound if c.strict else (c.bound + dot(c.normal, x0)) / 2
            domain = OpenHalfspace(c.normal, alpha)
        elif family == C_FAMILY and C is not None and eval_membership(C, x0):
            domain = pr.Mf
        return EAffineMap(xs, zs, choose_ztilde(zs, target, K), domain)

    cert = separate_point(pr.H, p0)
    xs, zs = _split(pr.H.constraints[cert.violated_constraint_index], n)
    # x0 is in the projection, so the violated constraint involves z
    assert any(zs), "x-only constraint violated inside M_f"
    target = dot(x0, xs) + dot(p0[n:], zs)
    if family == E_FAMILY:
        domain = OpenHalfspace((Fraction(0),) * n, Fraction(1))
    return EAffineMap(xs, zs, choose_ztilde(zs, target, K), domain)


def polar_generator(K: ConeK) -> RatVector:
    return polar_cone(K).generators[0]


def eaffine_parts(a: EAffineMap, eps: Fraction = Fraction(1, 1000)) -> List[EAffineMap]:
    """Split a C-affine map into e-affine maps, one per domain constraint.

    A weak constraint ``<y,x> <= b`` is replaced by ``<y,x> < b + eps``; strict
    ones are kept exactly.
    """
    if isinstance(a.domain, OpenHalfspace):
        return [a]
    if isinstance(a.domain, WholeSpace):
        return [EAffineMap(a.xstar, a.zstar, a.ztilde, OpenHalfspace((Fraction(0),) * a.dimX, Fraction(1)))]
    parts = []
    for c in a.domain.constraints:
        alpha = c.bound if c.strict else c.bound + eps
        parts.append(EAffineMap(a.xstar, a.zstar, a.ztilde, OpenHalfspace(c.normal, alpha)))
    if not parts:
        parts.append(EAffineMap(a.xstar, a.zstar, a.ztilde, OpenHalfspace((Fraction(0),) * a.dimX, Fraction(1))))
    return parts


# -- reports -------------------------------------------------------------------

@dataclass
class Check:
    kind: str
    passed: bool
    witness: Optional[RatVector] = None
    note: str = ""

    def to_dict(self):
        d = {"kind": self.kind, "pass": self.passed}
        if self.witness is not None:
            d["witness"] = [rat_str(v) for v in self.witness]
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Report:
    theorem: str
    instance_id: str
    checks: List[Check] = field(default_factory=list)
    expected_failure: bool = False

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, kind, passed, witness=None, note=""):
        self.checks.append(Check(kind, bool(passed), witness, note))

    def to_dict(self):
        d = {"theorem": self.theorem, "instance_id": self.instance_id,
             "pass": self.passed, "checks": [c.to_dict() for c in self.checks]}
        if self.expected_failure:
            d["expected_failure"] = True
        return d


def random_point(rng: random.Random, dim: int, bound: int = 3, den: int = 4) -> RatVector:
    return tuple(Fraction(rng.randint(-bound * den, bound * den), rng.randint(1, den)) for _ in range(dim))


def sample_inside(E: KEpigraph, rng: random.Random, count: int) -> List[RatVector]:
    """Points of the epigraph: piece witnesses pushed along cone generators."""
    out = []
    bases = []
    for p in E.pieces:
        ok, w = is_nonempty(p)
        if ok:
            bases.append(w)
    if not bases:
        return out
    n = E.dimX
    for i in range(count):
        w = bases[i % len(bases)]
        g = E.cone.generators[rng.randrange(len(E.cone.generators))]
        t = Fraction(rng.randint(0, 8), rng.randint(1, 4))
        q = w[:n] + tuple(v + t * gv for v, gv in zip(w[n:], g))
        if q in E.set:
            out.append(q)
    return out


def sample_outside(S: EUnion, rng: random.Random, count: int, bound: int = 3, tries: int = 400) -> List[RatVector]:
    out = []
    for _ in range(tries):
        if len(out) >= count:
            break
        q = random_point(rng, S.dim, bound)
        if q not in S:
            out.append(q)
    return out


THEOREM_FOR = {MF: "sup-of-Mf-affine-minorants", C_FAMILY: "sup-of-C-affine-minorants",
               E_FAMILY: "sup-of-e-affine-minorants"}


def verify_supremum_characterization(f: SetValuedMap, family: str = E_FAMILY, samples: int = 10,
                                     seed: int = 0, instance_id: str = "", C: Optional[EPolyhedron] = None,
                                     extra_outside=()) -> Report:
    """Check that f is the pointwise supremum of the chosen minorant family.

    Improper maps are handled by convention: the empty map is its own only
    minorant, and a map that takes the value Z somewhere has none.  For a map
    that is not K-e-convex the points between the epigraph and its hull are
    reported as unseparated, which is the expected outcome.
    """
    rep = Report(THEOREM_FOR[family], instance_id)
    rng = random.Random(seed)
    E = build_epi(f)
    state = is_proper(f)
    if state is Properness.EMPTY_EVERYWHERE:
        a = separating_minorant(f, (Fraction(0),) * (f.dimX + f.dimZ), family)
        rep.add("empty-map-convention", is_minorant(a, f), note="H_f = {f} taken as a convention")
        return rep
    if state is Properness.TAKES_WHOLE_SPACE:
        try:
            separating_minorant(f, random_point(rng, f.dimX + f.dimZ), family)
            rep.add("no-minorant-when-improper", False)
        except ImproperMap:
            rep.add("no-minorant-when-improper", True)
        return rep

    econvex, gap = is_e_convex(E.set)
    pr = prepare(f, against_hull=True)
    hull = EUnion(E.set.dim, (pr.H,))
    built = []
    outside = [vec(p) for p in extra_outside] + sample_outside(E.set, rng, samples)
    if gap is not None:
        outside.insert(0, gap)
    for p in outside:
        if p in E.set:
            continue
        if p in hull:
            rep.add("unseparated-point", False, p, "inside the K-e-convex hull, outside the epigraph")
            rep.expected_failure = True
            continue
        a = separating_minorant(f, p, family, C=C, against_hull=True, prepared=pr)
        built.append(a)
        rep.add("minorant", is_minorant(a, f), p)
        rep.add("excludes", p[f.dimX:] not in eval_eaffine(a, p[:f.dimX]), p)
        rep.add("dual-in-K*", a.dual_ok(f.cone), p)
    for q in sample_inside(E, rng, samples):
        ok = all(eval_membership(epi_of_affine(a), q) for a in built)
        rep.add("inside-stays-inside", ok, q)
    if gap is not None:
        ok = all(eval_membership(epi_of_affine(a), gap) for a in built)
        rep.add("hull-point-under-all-minorants", ok, gap)
    if not econvex:
        rep.expected_failure = True
    return rep


def theorem1_statements(f: SetValuedMap) -> dict:
    """The three equivalent statements about existence of minorants, each decided directly.

    (i) some M_f-affine minorant exists (constructed and verified);
    (ii) the K-e-convex hull is proper or f is empty everywhere;
    (iii) some proper K-e-convex minorant exists (the hull itself when proper).
    """
    E = build_epi(f)
    if not E.pieces:
        return {"i": True, "ii": True, "iii": True}
    if is_proper(f) is Properness.TAKES_WHOLE_SPACE:
        return {"i": False, "ii": False, "iii": False}
    H = eco_hull(E.set)
    hull_state = classify_epigraph(KEpigraph(E.dimX, E.dimZ, E.cone, EUnion(H.dim, (H,))))
    ii = hull_state is Properness.PROPER
    i = False
    if ii:
        xs, zs, target = _minorant_target(H, f.dimX)
        a = EAffineMap(xs, zs, choose_ztilde(zs, target, f.cone), project(H, f.dimX))
        i = is_minorant(a, f)
    return {"i": i, "ii": ii, "iii": ii}
