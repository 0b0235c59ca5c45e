"""Evenly convex hulls, separation and the modified Minkowski sum.

The e-convex hull of a finite union ``C`` of e-polyhedra is computed from the
closed convex hull ``P = cl conv C``: a point of ``P`` leaves the hull exactly
when it lies on a face of ``P`` that misses ``C``.  Every face of a polyhedron
is exposed, so each such face contributes one strict cut ``<a_F, x> < b_F``.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import List, Optional, Sequence, Tuple

from .core import (
    EPolyhedron, LinConstraint, RatVector, STRICT, WEAK, _halfspace_contains, _sup_nonempty,
    closure, contains, dot, equality, eval_membership, is_nonempty, nonempty, normalize, nullspace,
    project, rank, remove_redundant, simplify, solve_square, vec,
)
from .errors import DimensionMismatch, UnsupportedInstance

#: largest ambient dimension accepted by the face-enumeration hull
MAX_DIM = 4
#: cap on DNF terms explored by union containment
MAX_DNF_TERMS = 20000


@dataclass(frozen=True)
class EUnion:
    """Finite union of e-polyhedra of a common dimension (not convex in general)."""

    dim: int
    pieces: Tuple[EPolyhedron, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        for p in self.pieces:
            if p.dim != self.dim:
                raise DimensionMismatch("piece of dim %d in union of dim %d" % (p.dim, self.dim))

    @classmethod
    def of(cls, *pieces: EPolyhedron) -> "EUnion":
        return cls(pieces[0].dim, pieces)

    def normalized(self) -> "EUnion":
        """Drop empty pieces and simplify the rest."""
        kept = []
        for p in self.pieces:
            q = normalize(p)
            if not q.is_canonical_empty() and q not in kept:
                kept.append(q)
        return EUnion(self.dim, tuple(kept))

    def is_empty(self) -> bool:
        return not any(nonempty(p) for p in self.pieces)

    def __contains__(self, x) -> bool:
        return any(eval_membership(p, x) for p in self.pieces)

    def __len__(self):
        return len(self.pieces)


@dataclass(frozen=True)
class SeparationCertificate:
    functional: RatVector
    violated_constraint_index: int
    piece_index: int = 0


def separate_point(C, x0) -> Optional[SeparationCertificate]:
    """Functional strictly separating ``x0`` from a single e-polyhedron.

    A violated constraint ``<a,x> < b`` (with ``<a,x0> >= b``) or ``<a,x> <= b``
    (with ``<a,x0> > b``) gives ``<x - x0, a> < 0`` on the whole piece.
    """
    if isinstance(C, EUnion):
        if len(C.pieces) != 1:
            raise ValueError("separate_point needs a single piece")
        P = C.pieces[0]
    else:
        P = C
    x0 = vec(x0)
    if len(x0) != P.dim:
        raise DimensionMismatch("point of dim %d, set of dim %d" % (len(x0), P.dim))
    for i, c in enumerate(P.constraints):
        if not c.holds(x0):
            return SeparationCertificate(c.normal, i, 0)
    return None


def certificate_is_sound(C: EUnion, x0, functional) -> bool:
    """Exact check that ``<x - x0, functional> < 0`` for all x in C."""
    level = dot(vec(x0), functional)
    for p in C.pieces:
        if not nonempty(p):
            continue
        if not _halfspace_contains(p, LinConstraint(tuple(functional), level, STRICT)):
            return False
    return True


# -- unions ------------------------------------------------------------------

class _Budget:
    def __init__(self, limit):
        self.left = limit

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise UnsupportedInstance("DNF expansion exceeded %d terms" % MAX_DNF_TERMS)


def _uncovered(P: EPolyhedron, pieces: Sequence[EPolyhedron], budget: _Budget):
    budget.spend()
    ok, w = is_nonempty(P)
    if not ok:
        return None
    if not pieces:
        return w
    first, rest = pieces[0], pieces[1:]
    if not first.constraints:
        return None
    if not any(all(c.holds(w) for c in q.constraints) for q in pieces):
        return w
    if contains(first, P):
        return None
    for c in first.constraints:
        found = _uncovered(P.with_constraints((c.negated(),)), rest, budget)
        if found is not None:
            return found
    return None


def uncovered_point(P: EPolyhedron, U) -> Optional[RatVector]:
    """A point of ``P`` outside the union ``U``, or None when ``P`` is covered."""
    pieces = U.pieces if isinstance(U, EUnion) else tuple(U)
    # pieces disjoint from P cannot help
    relevant = [q for q in pieces if nonempty(P.with_constraints(q.constraints))]
    return _uncovered(P, relevant, _Budget(MAX_DNF_TERMS))


def union_contains(U, P: EPolyhedron) -> bool:
    """True iff P is a subset of the union U."""
    return uncovered_point(P, U) is None


def union_subset(A: EUnion, B: EUnion) -> bool:
    return all(union_contains(B, p) for p in A.pieces)


def union_equal(A: EUnion, B: EUnion) -> bool:
    return union_subset(A, B) and union_subset(B, A)


def complement(U: EUnion) -> EUnion:
    """The complement of a union as a union (DNF of the negated pieces)."""
    terms = [EPolyhedron.whole(U.dim)]
    for p in U.pieces:
        if not nonempty(p):
            continue
        nxt = []
        for t in terms:
            for c in p.constraints:
                q = t.with_constraints((c.negated(),))
                if nonempty(q):
                    nxt.append(simplify(q))
        terms = nxt
        if len(terms) > MAX_DNF_TERMS:
            raise UnsupportedInstance("complement has too many terms")
    return EUnion(U.dim, tuple(terms))


# -- convex constructions ----------------------------------------------------

def minkowski_sum(P: EPolyhedron, Q: EPolyhedron) -> EPolyhedron:
    """P + Q as an e-polyhedron: project {(x, u) : u in P, x - u in Q} onto x."""
    if P.dim != Q.dim:
        raise DimensionMismatch("dims %d and %d" % (P.dim, Q.dim))
    n = P.dim
    zero = (Fraction(0),) * n
    cons = []
    for c in P.constraints:
        cons.append(LinConstraint(zero + c.normal, c.bound, c.kind))
    for c in Q.constraints:
        cons.append(LinConstraint(c.normal + tuple(-v for v in c.normal), c.bound, c.kind))
    return project(EPolyhedron(2 * n, tuple(cons)), n)


#: most generator subsets tried by the facet enumeration before falling back to projection
MAX_FACET_SUBSETS = 20000


def _primitive(v: RatVector) -> RatVector:
    return LinConstraint(v, Fraction(0), WEAK).normalized().normal


def generators(P: EPolyhedron):
    """Points, rays and lines with ``P = conv(points) + cone(rays) + span(lines)``.

    P must be closed and nonempty.  Points are the vertices and rays the
    extreme rays of P cut down to the orthogonal complement of its lineality.
    """
    n = P.dim
    cons = list(P.constraints)
    lines = nullspace([c.normal for c in cons], n)
    zeros = [Fraction(0)] * len(lines)
    d = n - len(lines)
    points, rays = set(), set()
    for sub in combinations(cons, d):
        x = solve_square([c.normal for c in sub] + lines, [c.bound for c in sub] + zeros)
        if x is not None and all(c.holds(x) for c in cons):
            points.add(x)
    for sub in combinations(cons, d - 1) if d else ():
        ns = nullspace([c.normal for c in sub] + lines, n)
        if len(ns) != 1:
            continue
        for r in (ns[0], tuple(-v for v in ns[0])):
            if all(dot(c.normal, r) <= 0 for c in cons):
                rays.add(_primitive(r))
                break
    return sorted(points), sorted(rays), lines


def _hull_from_generators(n, points, rays, lines) -> Optional[EPolyhedron]:
    """H-representation of ``conv(points) + cone(rays) + span(lines)``.

    Facets are the extreme rays of the polar of the homogenised cone, found
    from the generator subsets they vanish on.  None when too many subsets.
    """
    one, zero = Fraction(1), Fraction(0)
    gens = [tuple(v) + (one,) for v in points] + [tuple(r) + (zero,) for r in rays]
    fixed = [tuple(l) + (zero,) for l in lines]
    N = n + 1
    eqs = nullspace(gens + fixed, N)
    need = (N - len(eqs)) - 1 - rank(fixed, N)
    if need < 0 or comb(len(gens), need) > MAX_FACET_SUBSETS:
        return None
    cons = []
    for m in eqs:
        cons.extend(equality(m[:n], -m[n]))
    found = set()
    for sub in combinations(gens, need):
        ns = nullspace(list(sub) + fixed + eqs, N)
        if len(ns) != 1:
            continue
        y = ns[0]
        vals = [dot(y, g) for g in gens]
        if all(v <= 0 for v in vals):
            pass
        elif all(v >= 0 for v in vals):
            y = tuple(-v for v in y)
        else:
            continue
        found.add(LinConstraint(y[:n], -y[n], WEAK).normalized())
    return simplify(EPolyhedron(n, tuple(cons) + tuple(found)))


def clconv(U: EUnion) -> EPolyhedron:
    """Closed convex hull of a finite union.

    Pools the generators of the piece closures and enumerates the facets of
    their hull; very large instances go through the lifted projection instead.
    """
    pieces = [closure(p) for p in U.pieces]
    pieces = [remove_redundant(p) for p in pieces if not p.is_canonical_empty()]
    n = U.dim
    if not pieces:
        return EPolyhedron.empty(n)
    if len(pieces) == 1:
        return pieces[0]
    points, rays, lines = set(), set(), []
    for p in pieces:
        ps, rs, ls = generators(p)
        points.update(ps)
        rays.update(rs)
        lines.extend(ls)
    lines = [lines[i] for i in _independent(lines, n)]
    H = _hull_from_generators(n, sorted(points), sorted(rays), lines)
    if H is not None:
        return remove_redundant(H)
    return _clconv_lifted(pieces, n)


def _independent(vectors, n) -> List[int]:
    """Indices of a maximal linearly independent subfamily, greedily."""
    keep = []
    for i, v in enumerate(vectors):
        if rank([vectors[j] for j in keep] + [v], n) > len(keep):
            keep.append(i)
    return keep


def _clconv_lifted(pieces, n) -> EPolyhedron:
    """Sum the homogenisation cones of the pieces (the lifted
    ``x = sum x_i,  A_i x_i <= t_i b_i,  sum t_i = 1`` system) and project."""
    k = len(pieces)
    lifted = n + (k - 1) * (n + 1)
    cons = []

    def row(x=None, blocks=None, ts=None):
        r = [Fraction(0)] * lifted
        if x is not None:
            r[:n] = x
        for i, v in (blocks or {}).items():
            r[n + i * (n + 1): n + i * (n + 1) + n] = v
        for i, v in (ts or {}).items():
            r[n + i * (n + 1) + n] = v
        return tuple(r)

    for i, p in enumerate(pieces[:-1]):
        for c in p.constraints:
            cons.append(LinConstraint(row(blocks={i: c.normal}, ts={i: -c.bound}), Fraction(0), WEAK))
        cons.append(LinConstraint(row(ts={i: Fraction(-1)}), Fraction(0), WEAK))
    last = pieces[-1]
    for c in last.constraints:
        neg = tuple(-v for v in c.normal)
        cons.append(LinConstraint(
            row(x=c.normal, blocks={i: neg for i in range(k - 1)}, ts={i: c.bound for i in range(k - 1)}),
            c.bound, WEAK))
    cons.append(LinConstraint(row(ts={i: Fraction(1) for i in range(k - 1)}), Fraction(1), WEAK))
    return remove_redundant(project(EPolyhedron(lifted, tuple(cons)), n))


def faces(P: EPolyhedron) -> List[Tuple[frozenset, RatVector, Fraction]]:
    """All nonempty proper faces of a closed polyhedron.

    Each face is reported as ``(active_rows, a_F, b_F)`` where ``a_F`` (the sum
    of the active normals) exposes exactly that face: on P, ``<a_F, x> <= b_F``
    with equality iff every active row is tight.
    """
    rows = list(P.constraints)

    def active(eqs):
        cons = list(P.constraints)
        for j in eqs:
            cons.extend(equality(rows[j].normal, rows[j].bound))
        F = EPolyhedron(P.dim, tuple(cons))
        ok, w = is_nonempty(F)
        if not ok:
            return None
        found = set(eqs)
        for j, r in enumerate(rows):
            if j in found or dot(r.normal, w) != r.bound:
                continue
            s = _sup_nonempty(F, tuple(-v for v in r.normal))
            if s.is_finite and s.value == -r.bound:
                found.add(j)
        return frozenset(found)

    base = active(frozenset())
    if base is None:
        return []
    seen = {base}
    stack = [base]
    while stack:
        I = stack.pop()
        for j in range(len(rows)):
            if j in I:
                continue
            J = active(I | {j})
            if J is not None and J not in seen:
                seen.add(J)
                stack.append(J)
    out = []
    for I in sorted(seen - {base}, key=lambda s: (len(s), sorted(s))):
        a = tuple(sum((rows[j].normal[i] for j in I), Fraction(0)) for i in range(P.dim))
        b = sum((rows[j].bound for j in I), Fraction(0))
        out.append((I, a, b))
    return out


def _misses(U: EUnion, a: RatVector, b: Fraction) -> bool:
    """True iff no point of U reaches ``<a, x> >= b``."""
    cut = LinConstraint(tuple(-v for v in a), -b, WEAK)
    return not any(nonempty(p.with_constraints((cut,))) for p in U.pieces)


def _check_supported(U: EUnion, max_dim):
    limit = MAX_DIM if max_dim is None else max_dim
    if U.dim > limit:
        raise UnsupportedInstance("exact hull limited to dim <= %d (got %d)" % (limit, U.dim))


@lru_cache(maxsize=256)
def _hull_data(U: EUnion):
    P = clconv(U)
    excluded = []
    for I, a, b in faces(P):
        if _misses(U, a, b):
            excluded.append((a, b))
    return P, tuple(excluded)


def eco_hull(C: EUnion, max_dim: Optional[int] = None, shortcut: bool = True) -> EPolyhedron:
    """Smallest e-convex set containing the union, as one e-polyhedron.

    The result is the weak system of ``cl conv C`` plus a strict cut for every
    face of it that misses C.  With ``shortcut`` a single piece is returned as
    is, being e-convex already.
    """
    U = C.normalized()
    if not U.pieces:
        return EPolyhedron.empty(C.dim)
    if shortcut and len(U.pieces) == 1:
        return U.pieces[0]
    _check_supported(U, max_dim)
    P, excluded = _hull_data(U)
    cuts = [LinConstraint(a, b, STRICT) for a, b in excluded]
    return simplify(P.with_constraints(cuts))


def eco_membership(C: EUnion, x0, max_dim: Optional[int] = None) -> Tuple[bool, Optional[RatVector]]:
    """Decide ``x0 in eco C``; excluded points come with a separating functional."""
    x0 = vec(x0)
    if len(x0) != C.dim:
        raise DimensionMismatch("point of dim %d, set of dim %d" % (len(x0), C.dim))
    U = C.normalized()
    if not U.pieces:
        return False, None
    _check_supported(U, max_dim)
    P, excluded = _hull_data(U)
    for c in P.constraints:
        if not c.holds(x0):
            return False, c.normal
    for a, b in excluded:
        if dot(a, x0) == b:
            return False, a
    return True, None


def boxplus(A: EUnion, B: EUnion, max_dim: Optional[int] = None) -> EPolyhedron:
    """``A [+] B = eco(A + B)`` with the sum taken piecewise."""
    if A.dim != B.dim:
        raise DimensionMismatch("dims %d and %d" % (A.dim, B.dim))
    A, B = A.normalized(), B.normalized()
    sums = [minkowski_sum(p, q) for p in A.pieces for q in B.pieces]
    return eco_hull(EUnion(A.dim, tuple(sums)), max_dim)


def single(P: EPolyhedron) -> EUnion:
    return EUnion(P.dim, (P,))


def verify_eco_associativity(A: EUnion, B: EUnion, C: EUnion, max_dim: Optional[int] = None) -> bool:
    """Associativity of [+] and ``eco(A + eco B) = eco(A + B)``, by mutual containment."""
    left = boxplus(A, single(boxplus(B, C, max_dim)), max_dim)
    right = boxplus(single(boxplus(A, B, max_dim)), C, max_dim)
    inner = boxplus(A, single(eco_hull(B, max_dim)), max_dim)
    plain = boxplus(A, B, max_dim)
    return contains(left, right) and contains(right, left) and contains(inner, plain) and contains(plain, inner)


def is_e_convex(C: EUnion, max_dim: Optional[int] = None) -> Tuple[bool, Optional[RatVector]]:
    """True iff the union equals its e-convex hull; otherwise a point of the gap."""
    U = C.normalized()
    if len(U.pieces) <= 1:
        return True, None
    H = eco_hull(U, max_dim)
    w = uncovered_point(H, U)
    return w is None, w
