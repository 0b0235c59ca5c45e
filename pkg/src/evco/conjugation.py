"""c-conjugation of set-valued maps and the biconjugate.

Dual elements are ``w = (x*, y*, z*, alpha)`` with ``z*`` in ``K* \\ {0}``.
Conjugate values are half-spaces with normal ``z*``; ``HalfspaceValue``
records them together with the sign conventions ``-Z = empty``, ``-empty = Z``.
"""
import random
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .core import (
    EPolyhedron, Kind, LinConstraint, RatVector, STRICT, SupportKind, SupportValue, WEAK, dot,
    embed, is_nonempty, nonempty, project, sup_linear, substitute, vec,
)
from .errors import DimensionMismatch, EmptySetError, MalformedInstance
from .geometry import EUnion, eco_hull, is_e_convex, separate_point, union_equal, union_subset
from .minorants import Report, random_point
from .setvalued import (
    ConeK, KEpigraph, Properness, SetValuedMap, build_epi, classify_epigraph, fiber, is_proper,
    k_eco_hull, polar_cone,
)


@dataclass(frozen=True)
class DualElement:
    xstar: RatVector
    ystar: RatVector
    zstar: RatVector
    alpha: Fraction

    @classmethod
    def of(cls, xstar, ystar, zstar, alpha) -> "DualElement":
        return cls(vec(xstar), vec(ystar), vec(zstar), Fraction(alpha))

    def check(self, f: SetValuedMap) -> None:
        if len(self.xstar) != f.dimX or len(self.ystar) != f.dimX or len(self.zstar) != f.dimZ:
            raise DimensionMismatch("dual element does not match Q^%d x Q^%d" % (f.dimX, f.dimZ))
        if not f.cone.in_dual(self.zstar):
            raise MalformedInstance("z* = %s is not in K* \\ {0}" % (self.zstar,))


@dataclass(frozen=True)
class HalfspaceValue:
    """``{z : <z, z*> (< or <=) bound}``, or its negative when ``negated``.

    An infinite bound encodes Z (+inf) or the empty set (-inf); the sense is
    then always STRICT so records compare equal.
    """

    zstar: RatVector
    bound: SupportValue
    sense: Kind = STRICT
    negated: bool = False

    def __post_init__(self):
        if not self.bound.is_finite and self.sense is not STRICT:
            object.__setattr__(self, "sense", STRICT)

    @property
    def dim(self):
        return len(self.zstar)

    def to_set(self) -> EUnion:
        m = self.dim
        whole = EUnion(m, (EPolyhedron.whole(m),))
        empty = EUnion(m, ())
        if self.bound.kind is SupportKind.PLUS_INFINITY:
            return empty if self.negated else whole
        if self.bound.kind is SupportKind.MINUS_INFINITY:
            return whole if self.negated else empty
        normal = tuple(-v for v in self.zstar) if self.negated else self.zstar
        return EUnion(m, (EPolyhedron(m, (LinConstraint(normal, self.bound.value, self.sense),)),))

    def describe(self) -> str:
        s = self.to_set()
        if not s.pieces:
            return "empty"
        if not s.pieces[0].constraints:
            return "Z"
        c = s.pieces[0].constraints[0]
        return "{z : <z, %s> %s %s}" % ([str(v) for v in c.normal], "<" if c.strict else "<=", c.bound)


def sup_union(pieces: Sequence[EPolyhedron], c: Sequence[Fraction]) -> SupportValue:
    """Supremum of ``<c, .>`` over a finite union, with attainment."""
    best = SupportValue.minus_infinity()
    for p in pieces:
        s = sup_linear(p, c)
        if s.kind is SupportKind.PLUS_INFINITY:
            return s
        if s.kind is SupportKind.MINUS_INFINITY:
            continue
        if best.kind is SupportKind.MINUS_INFINITY or s.value > best.value:
            best = s
        elif s.value == best.value and s.attained and not best.attained:
            best = s
    return best


def _dom_inside(E: KEpigraph, ystar, alpha) -> bool:
    """dom f inside the open half-space ``<x, y*> < alpha``."""
    s = sup_union(E.pieces, tuple(ystar) + (Fraction(0),) * E.dimZ)
    if s.kind is SupportKind.MINUS_INFINITY:
        return True
    if s.kind is SupportKind.PLUS_INFINITY:
        return False
    return s.value < alpha or (s.value == alpha and not s.attained)


@lru_cache(maxsize=1 << 14)
def sigma_f(f: SetValuedMap, w: DualElement) -> SupportValue:
    """Support function of the K-epigraph relative to open half-spaces."""
    E = build_epi(f)
    if not _dom_inside(E, w.ystar, w.alpha):
        return SupportValue.plus_infinity()
    return sup_union(E.pieces, tuple(w.xstar) + tuple(w.zstar))


def in_dom_sigma(f: SetValuedMap, w: DualElement) -> bool:
    return sigma_f(f, w).kind is not SupportKind.PLUS_INFINITY


def eta(E: KEpigraph, xstar, zstar) -> int:
    """1 when the supremum of ``<x,x*> + <z,z*>`` over E is attained, else 0.

    An unbounded supremum counts as not attained.  Undefined on the empty set.
    """
    if not any(nonempty(p) for p in E.pieces):
        raise EmptySetError("eta is undefined on the empty set")
    s = sup_union(E.pieces, tuple(vec(xstar)) + tuple(vec(zstar)))
    return 1 if s.is_finite and s.attained else 0


def conjugate(f: SetValuedMap, w: DualElement) -> HalfspaceValue:
    """``f^c(w)`` as the negative of ``{z : <z,z*> < or <= sigma_f(w)}``."""
    w.check(f)
    s = sigma_f(f, w)
    sense = STRICT
    if s.is_finite and eta(build_epi(f), w.xstar, w.zstar) == 1:
        sense = WEAK
    return HalfspaceValue(w.zstar, s, sense, negated=True)


def _point_of(P: EPolyhedron) -> Optional[RatVector]:
    """The single point of P, or None if P is empty or has more points."""
    ok, w = is_nonempty(P)
    if not ok:
        return None
    for i in range(P.dim):
        e = [Fraction(0)] * P.dim
        e[i] = Fraction(1)
        hi = sup_linear(P, e)
        lo = sup_linear(P, [-v for v in e])
        if not (hi.is_finite and lo.is_finite and hi.value == -lo.value):
            return None
    return w


def finite_domain_pieces(f: SetValuedMap) -> List[Tuple[RatVector, Optional[EPolyhedron]]]:
    """``(x_i, f-piece fibre)`` pairs; the fibre is None where f is Z."""
    out = []
    for p in f.graph.pieces:
        if not nonempty(p):
            continue
        x = _point_of(project(p, f.dimX))
        if x is None:
            raise MalformedInstance("graph piece is not over a single point")
        out.append((x, substitute(p, 0, x)))
    for r in f.full_value_regions:
        if not nonempty(r):
            continue
        x = _point_of(r)
        if x is None:
            raise MalformedInstance("full-value region is not a single point")
        out.append((x, None))
    return out


def conjugate_by_definition(f: SetValuedMap, w: DualElement) -> HalfspaceValue:
    """``-eco[ union_x f(x) + Sbar(-x) ]`` for a map with finite domain.

    ``Sbar(-x) = {z : <z,z*> <= <x,x*>}`` so each term is a co-normal half-space;
    their union is the one with the largest bound, and it is already e-convex.
    """
    w.check(f)
    terms = finite_domain_pieces(f)
    for x, _ in terms:
        if not dot(x, w.ystar) < w.alpha:
            return HalfspaceValue(w.zstar, SupportValue.plus_infinity(), STRICT, negated=True)
    best = SupportValue.minus_infinity()
    for x, V in terms:
        if V is None:
            return HalfspaceValue(w.zstar, SupportValue.plus_infinity(), STRICT, negated=True)
        s = sup_linear(V, w.zstar)
        if s.kind is SupportKind.PLUS_INFINITY:
            return HalfspaceValue(w.zstar, s, STRICT, negated=True)
        if not s.is_finite:
            continue
        term = SupportValue.finite(dot(x, w.xstar) + s.value, s.attained)
        if best.kind is SupportKind.MINUS_INFINITY or term.value > best.value:
            best = term
        elif term.value == best.value and term.attained:
            best = term
    sense = WEAK if best.is_finite and best.attained else STRICT
    return HalfspaceValue(w.zstar, best, sense, negated=True)


def c_prime_conjugate(g: Sequence[Tuple[DualElement, EUnion]], x, dimZ: int) -> EUnion:
    """``g^{c'}(x)`` for a finitely supported dual map given as ``(w_i, g(w_i))`` pairs.

    Pairs with an empty value lie outside dom g and are ignored.  The empty
    intersection is Z.
    """
    x = vec(x)
    cons = []
    for w, V in g:
        if len(w.xstar) != len(x):
            raise DimensionMismatch("point of dim %d, dual of dim %d" % (len(x), len(w.xstar)))
        V = V.normalized()
        if not V.pieces:
            continue
        if not dot(x, w.ystar) < w.alpha:
            return EUnion(dimZ, ())
        if any(not p.constraints for p in V.pieces):
            # -Z is empty
            return EUnion(dimZ, ())
        # Sbar(x) - V: sup over -V of <., z*> is sup over V of <., -z*>
        s = sup_union(V.pieces, tuple(-v for v in w.zstar))
        if not s.is_finite:
            continue
        kind = WEAK if s.attained else STRICT
        cons.append(LinConstraint(w.zstar, s.value - dot(x, w.xstar), kind))
    return EUnion(dimZ, (EPolyhedron(dimZ, tuple(cons)),)).normalized()


def eq8_value(f: SetValuedMap, duals: Sequence[DualElement], x) -> EUnion:
    """Outer approximation of ``f^{cc'}(x)`` from finitely many duals."""
    g = [(w, conjugate(f, w).to_set()) for w in duals]
    return c_prime_conjugate(g, x, f.dimZ)


# -- hull route ----------------------------------------------------------------

WHOLE, EMPTY = "whole", "empty"


@lru_cache(maxsize=512)
def hull_route(f: SetValuedMap):
    """EMPTY when f is empty everywhere, WHOLE when no dual has finite sigma, else the hull.

    If the K-e-convex hull takes the value Z at some point then every closed
    half-space with normal ``(x*, z*)``, ``z* != 0``, misses part of it, so
    ``dom sigma_f`` is empty and the biconjugate is Z everywhere.
    """
    E = build_epi(f)
    if not E.pieces:
        return EMPTY
    if is_proper(f) is Properness.TAKES_WHOLE_SPACE:
        return WHOLE
    H = eco_hull(E.set)
    state = classify_epigraph(KEpigraph(E.dimX, E.dimZ, E.cone, EUnion(H.dim, (H,))))
    if state is Properness.TAKES_WHOLE_SPACE:
        return WHOLE
    return H


def certifying_duals(f: SetValuedMap, x=None) -> List[DualElement]:
    """Duals read off the hull constraints, plus one cutting x off the domain if needed."""
    H = hull_route(f)
    if not isinstance(H, EPolyhedron):
        return []
    n = f.dimX
    zero = (Fraction(0),) * n
    out = []
    for c in H.constraints:
        zs = c.normal[n:]
        if any(zs):
            out.append(DualElement(c.normal[:n], zero, zs, Fraction(1)))
    if x is not None:
        x = vec(x)
        M = project(H, n)
        cert = separate_point(M, x)
        if cert is not None and out:
            c = M.constraints[cert.violated_constraint_index]
            alpha = c.bound if c.strict else (c.bound + dot(c.normal, x)) / 2
            a = out[0]
            out.append(DualElement(a.xstar, c.normal, a.zstar, alpha))
    return out


@dataclass
class Biconjugate:
    x: RatVector
    exact: EUnion
    outer: EUnion
    duals: List[DualElement] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return union_equal(self.exact, self.outer)


def biconjugate(f: SetValuedMap, x, duals: Sequence[DualElement] = ()) -> Biconjugate:
    """``f^{cc'}(x)``: exact value from the hull, outer value from the duals plus certificates."""
    x = vec(x)
    if len(x) != f.dimX:
        raise DimensionMismatch("point of dim %d, X = Q^%d" % (len(x), f.dimX))
    m = f.dimZ
    H = hull_route(f)
    if H == EMPTY:
        exact = EUnion(m, ())
    elif H == WHOLE:
        exact = EUnion(m, (EPolyhedron.whole(m),))
    else:
        exact = EUnion(m, (substitute(H, 0, x),)).normalized()
    used = [w for w in duals if in_dom_sigma(f, w)] + certifying_duals(f, x)
    return Biconjugate(x, exact, eq8_value(f, used, x), used)


def biconjugate_epigraph(f: SetValuedMap) -> EUnion:
    """Epigraph of ``f^{cc'}`` rebuilt from sigma_f and eta on the hull normals.

    Each hull constraint involving z gives a dual whose sigma and eta are taken
    over ``epi_K f`` itself; the domain part is the projection of the hull.
    """
    n, m = f.dimX, f.dimZ
    H = hull_route(f)
    if H == EMPTY:
        return EUnion(n + m, ())
    if H == WHOLE:
        return EUnion(n + m, (EPolyhedron.whole(n + m),))
    E = build_epi(f)
    cons = list(embed(project(H, n), n + m, 0).constraints)
    for w in certifying_duals(f):
        s = sigma_f(f, w)
        kind = WEAK if eta(E, w.xstar, w.zstar) == 1 else STRICT
        cons.append(LinConstraint(tuple(w.xstar) + tuple(w.zstar), s.value, kind))
    return EUnion(n + m, (EPolyhedron(n + m, tuple(cons)),)).normalized()


# -- sampling and verification -------------------------------------------------

def sample_duals(f: SetValuedMap, rng: random.Random, count: int, admissible_share: float = 0.5) -> List[DualElement]:
    """Random duals; about ``admissible_share`` of them get alpha above sup over dom f."""
    n = f.dimX
    gens = polar_cone(f.cone).generators
    E = build_epi(f)
    out = []
    while len(out) < count:
        coeffs = [rng.randint(0, 3) for _ in gens]
        if not any(coeffs):
            coeffs[rng.randrange(len(gens))] = 1
        zs = tuple(sum((Fraction(c) * g[i] for c, g in zip(coeffs, gens)), Fraction(0)) for i in range(f.dimZ))
        if not any(zs):
            continue
        xs = tuple(Fraction(rng.randint(-3, 3)) for _ in range(n))
        ys = tuple(Fraction(rng.randint(-2, 2)) for _ in range(n))
        alpha = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        if rng.random() < admissible_share:
            s = sup_union(E.pieces, ys + (Fraction(0),) * f.dimZ)
            if s.is_finite:
                alpha = s.value + Fraction(rng.randint(0, 3), 2)
                if alpha == s.value and s.attained:
                    alpha += 1
            elif s.kind is SupportKind.MINUS_INFINITY:
                pass
            else:
                ys = (Fraction(0),) * n
                alpha = Fraction(1)
        out.append(DualElement(xs, ys, zs, alpha))
    return out


def sample_xs(f: SetValuedMap, rng: random.Random, count: int, bound: int = 3) -> List[RatVector]:
    xs = []
    for p in build_epi(f).pieces:
        ok, w = is_nonempty(p)
        if ok:
            xs.append(w[:f.dimX])
    while len(xs) < count:
        xs.append(random_point(rng, f.dimX, bound))
    return xs


def verify_biconjugation(f: SetValuedMap, samples: int = 8, seed: int = 0, instance_id: str = "",
                         xs: Sequence = (), n_duals: int = 6) -> Report:
    """Check the biconjugate against ``f_K`` and against the K-e-convex hull.

    At every sampled x: ``f_K(x)`` lies in ``f^{cc'}(x)``; the dual-based outer
    value with certifying duals equals the hull value; equality with ``f_K(x)``
    holds everywhere exactly when f is K-e-convex.  The epigraph rebuilt from
    sigma_f must equal the K-e-convex hull.
    """
    rep = Report("biconjugation", instance_id)
    rng = random.Random(seed)
    E = build_epi(f)
    duals = sample_duals(f, rng, n_duals)
    points = [vec(x) for x in xs] + sample_xs(f, rng, samples)
    route = hull_route(f)
    if route == EMPTY:
        for x in points:
            b = biconjugate(f, x, duals)
            rep.add("empty-map-gives-empty", not b.exact.pieces and b.outer.is_empty(), x)
        return rep
    if route == WHOLE:
        rep.add("dom-sigma-empty", not any(in_dom_sigma(f, w) for w in duals))
        hull = k_eco_hull(f)
        for x in points:
            b = biconjugate(f, x, duals)
            rep.add("biconjugate-is-Z", b.outer.pieces and not b.outer.pieces[0].constraints, x)
            whole_here = union_subset(EUnion(f.dimZ, (EPolyhedron.whole(f.dimZ),)), fiber(hull, x))
            rep.add("hull-identity", whole_here, x,
                    "" if whole_here else "K-e-convex hull is improper but not Z here; biconjugate is Z")
        return rep

    econvex, gap = is_e_convex(E.set)
    if gap is not None:
        points.insert(0, gap[:f.dimX])
    any_strict = False
    for x in points:
        b = biconjugate(f, x, duals)
        fk = fiber(E, x)
        rep.add("f_K-inside-biconjugate", union_subset(fk, b.exact), x)
        rep.add("outer-contains-exact", union_subset(b.exact, b.outer), x)
        rep.add("certified-equality", b.certified, x)
        plain = eq8_value(f, [w for w in duals if in_dom_sigma(f, w)], x)
        rep.add("duals-only-shrink", union_subset(b.outer, plain), x)
        equal_here = union_equal(fk, b.exact)
        if econvex:
            rep.add("equals-f_K", equal_here, x)
        elif not equal_here:
            any_strict = True
    if not econvex:
        rep.add("strict-somewhere", any_strict, gap, "f is not K-e-convex")
    rebuilt = biconjugate_epigraph(f)
    rep.add("hull-identity", union_equal(rebuilt, k_eco_hull(f).set))
    return rep


def indicator_map(C: EUnion, K: Optional[ConeK] = None) -> SetValuedMap:
    """``Delta_C``: the cone on C, empty elsewhere."""
    K = K or ConeK.orthant(1)
    n, m = C.dim, K.dim
    pieces = []
    for p in C.pieces:
        lifted = embed(p, n + m, 0)
        kc = [LinConstraint((Fraction(0),) * n + c.normal, Fraction(0), WEAK) for c in K.constraints]
        pieces.append(lifted.with_constraints(kc))
    return SetValuedMap(n, m, EUnion(n + m, tuple(pieces)), K)


def indicator_conjugate(C: EUnion, w: DualElement) -> HalfspaceValue:
    """``-eco[ union_{x in C} Sbar(-x) ]`` from the support function of C alone."""
    adm = sup_union(C.pieces, w.ystar)
    if adm.kind is SupportKind.PLUS_INFINITY or (
            adm.is_finite and (adm.value > w.alpha or (adm.value == w.alpha and adm.attained))):
        return HalfspaceValue(w.zstar, SupportValue.plus_infinity(), STRICT, negated=True)
    s = sup_union(C.pieces, w.xstar)
    if not s.is_finite:
        return HalfspaceValue(w.zstar, s, STRICT, negated=True)
    return HalfspaceValue(w.zstar, SupportValue.finite(s.value, s.attained), WEAK if s.attained else STRICT,
                          negated=True)


def indicator_suite(C: EUnion, K: Optional[ConeK] = None, samples: int = 8, seed: int = 0,
                    instance_id: str = "") -> Report:
    K = K or ConeK.orthant(1)
    f = indicator_map(C, K)
    rep = verify_biconjugation(f, samples, seed, instance_id)
    rep.theorem = "indicator"
    rng = random.Random(seed + 1)
    for w in sample_duals(f, rng, 20):
        ok = conjugate(f, w) == indicator_conjugate(C, w)
        rep.add("conjugate-matches-support-formula", ok, w.xstar + w.ystar + w.zstar + (w.alpha,))
    target = indicator_map(EUnion(C.dim, (eco_hull(C),)), K)
    rep.add("biconjugate-is-indicator-of-eco-hull", union_equal(biconjugate_epigraph(f), build_epi(target).set))
    return rep
