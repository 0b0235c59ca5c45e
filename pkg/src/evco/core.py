"""Exact rational polyhedra with mixed strict/weak inequalities.

An :class:`EPolyhedron` is the solution set of finitely many constraints
``<a, x> < b`` or ``<a, x> <= b`` over ``Q^n``.  Such sets are exactly the
finitely representable evenly convex sets, and everything here is decided with
exact arithmetic: Fourier-Motzkin projection, strict feasibility, suprema with
attainment, closure and containment.
"""
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from . import lp
from .errors import DimensionMismatch

RatVector = Tuple[Fraction, ...]


def rat(v) -> Fraction:
    """Coerce ints, ``"p/q"`` strings and Fractions to Fraction.  Floats are refused."""
    if isinstance(v, float):
        raise TypeError("floating point values are not accepted: %r" % (v,))
    return Fraction(v)


def rat_str(v) -> str:
    """Always ``"p/q"``, also for integers."""
    v = Fraction(v)
    return "%d/%d" % (v.numerator, v.denominator)


def vec(*coords) -> RatVector:
    if len(coords) == 1 and isinstance(coords[0], (list, tuple)):
        coords = coords[0]
    return tuple(rat(c) for c in coords)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


class Kind(enum.Enum):
    STRICT = "strict"
    WEAK = "weak"


STRICT = Kind.STRICT
WEAK = Kind.WEAK


@dataclass(frozen=True)
class LinConstraint:
    """``<normal, x> < bound`` (STRICT) or ``<normal, x> <= bound`` (WEAK)."""

    normal: RatVector
    bound: Fraction
    kind: Kind = WEAK

    @property
    def strict(self) -> bool:
        return self.kind is STRICT

    @property
    def dim(self) -> int:
        return len(self.normal)

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = dot(self.normal, x)
        return lhs < self.bound if self.strict else lhs <= self.bound

    def weakened(self) -> "LinConstraint":
        return LinConstraint(self.normal, self.bound, WEAK)

    def negated(self) -> "LinConstraint":
        """The complementary half-space: not(<a,x> < b) is <-a,x> <= -b, and vice versa."""
        kind = WEAK if self.strict else STRICT
        return LinConstraint(tuple(-v for v in self.normal), -self.bound, kind)

    def normalized(self) -> "LinConstraint":
        """Positive rescaling making the normal a primitive integer vector."""
        if not any(self.normal):
            return self
        den = reduce(lambda acc, v: acc * v.denominator // math.gcd(acc, v.denominator), self.normal, 1)
        ints = [int(v * den) for v in self.normal]
        g = reduce(math.gcd, ints, 0)
        if den == 1 and g == 1:
            return self
        factor = Fraction(den, g)
        return LinConstraint(tuple(Fraction(v // g) for v in ints), self.bound * factor, self.kind)


def weak(normal, bound) -> LinConstraint:
    return LinConstraint(vec(normal), rat(bound), WEAK)


def strict(normal, bound) -> LinConstraint:
    return LinConstraint(vec(normal), rat(bound), STRICT)


def equality(normal, bound) -> List[LinConstraint]:
    n = vec(normal)
    b = rat(bound)
    return [LinConstraint(n, b, WEAK), LinConstraint(tuple(-v for v in n), -b, WEAK)]


@dataclass(frozen=True)
class EPolyhedron:
    dim: int
    constraints: Tuple[LinConstraint, ...] = ()

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be non-negative")
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for c in self.constraints:
            if c.dim != self.dim:
                raise DimensionMismatch("constraint of dim %d in polyhedron of dim %d" % (c.dim, self.dim))

    def __len__(self):
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)

    def __contains__(self, x):
        return eval_membership(self, x)

    def with_constraints(self, extra) -> "EPolyhedron":
        return EPolyhedron(self.dim, self.constraints + tuple(extra))

    @property
    def has_strict(self) -> bool:
        return any(c.strict for c in self.constraints)

    @classmethod
    def whole(cls, dim: int) -> "EPolyhedron":
        return cls(dim, ())

    @classmethod
    def empty(cls, dim: int) -> "EPolyhedron":
        return cls(dim, (LinConstraint((Fraction(0),) * dim, Fraction(-1), WEAK),))

    @classmethod
    def point(cls, x) -> "EPolyhedron":
        x = vec(x)
        cons = []
        for i in range(len(x)):
            e = [0] * len(x)
            e[i] = 1
            cons.extend(equality(e, x[i]))
        return cls(len(x), tuple(cons))

    @classmethod
    def box(cls, lower, upper, strict_sides=()) -> "EPolyhedron":
        """Axis box; ``strict_sides`` holds (axis, 'lo'|'hi') pairs that are open."""
        lower, upper = vec(lower), vec(upper)
        n = len(lower)
        cons = []
        for i in range(n):
            e = [Fraction(0)] * n
            e[i] = Fraction(1)
            ne = [-v for v in e]
            cons.append(LinConstraint(tuple(ne), -lower[i], STRICT if (i, "lo") in strict_sides else WEAK))
            cons.append(LinConstraint(tuple(e), upper[i], STRICT if (i, "hi") in strict_sides else WEAK))
        return cls(n, tuple(cons))

    def is_canonical_empty(self) -> bool:
        return self == EPolyhedron.empty(self.dim)


class SupportKind(enum.Enum):
    MINUS_INFINITY = "-inf"
    FINITE = "finite"
    PLUS_INFINITY = "+inf"


@dataclass(frozen=True)
class SupportValue:
    kind: SupportKind
    value: Optional[Fraction] = None
    attained: bool = False
    witness: Optional[RatVector] = field(default=None, compare=False)

    @classmethod
    def minus_infinity(cls):
        return cls(SupportKind.MINUS_INFINITY)

    @classmethod
    def plus_infinity(cls):
        return cls(SupportKind.PLUS_INFINITY)

    @classmethod
    def finite(cls, value, attained, witness=None):
        return cls(SupportKind.FINITE, rat(value), attained, witness)

    @property
    def is_finite(self) -> bool:
        return self.kind is SupportKind.FINITE

    def __str__(self):
        if self.kind is SupportKind.FINITE:
            return "%s%s" % (self.value, "" if self.attained else " (not attained)")
        return self.kind.value


def _check_dim(P: EPolyhedron, x) -> None:
    if len(x) != P.dim:
        raise DimensionMismatch("point of dim %d, polyhedron of dim %d" % (len(x), P.dim))


def eval_membership(P: EPolyhedron, x: Sequence) -> bool:
    _check_dim(P, x)
    x = vec(x)
    return all(c.holds(x) for c in P.constraints)


# -- normalisation ----------------------------------------------------------

def _trivial(c: LinConstraint) -> Optional[bool]:
    """True for a tautology, False for a contradiction, None otherwise."""
    if any(c.normal):
        return None
    return c.bound > 0 if c.strict else c.bound >= 0


def simplify(P: EPolyhedron) -> EPolyhedron:
    """Cheap syntactic cleanup: rescale, drop tautologies and duplicates.

    Of two constraints with the same normal only the tighter survives (strict
    wins a tie).  A contradictory constant row collapses P to the canonical
    empty polyhedron.  No LP is solved, so some empty systems survive.
    """
    best = {}
    for c in P.constraints:
        t = _trivial(c)
        if t is True:
            continue
        if t is False:
            return EPolyhedron.empty(P.dim)
        c = c.normalized()
        key = c.normal
        old = best.get(key)
        if old is None or c.bound < old.bound or (c.bound == old.bound and c.strict):
            best[key] = c
    cons = sorted(best.values(), key=_order_key)
    return EPolyhedron(P.dim, tuple(cons))


def _order_key(c: LinConstraint):
    return (c.normal, c.bound, c.kind is WEAK)


def sort_constraints(cons):
    """Deterministic lexicographic order on normals (then bound, strict first)."""
    return sorted(cons, key=_order_key)


# -- LP-backed decisions ----------------------------------------------------

def _as_lp(cons, extra_cols=0):
    A = [list(c.normal) + [Fraction(0)] * extra_cols for c in cons]
    b = [c.bound for c in cons]
    return A, b


@lru_cache(maxsize=1 << 16)
def is_nonempty(P: EPolyhedron) -> Tuple[bool, Optional[RatVector]]:
    """Strict feasibility of the mixed system, with a witness.

    Maximises a shared slack ``t <= 1`` subtracted from every strict row; the
    set is nonempty iff the optimum is positive.
    """
    n = P.dim
    cons = P.constraints
    for c in cons:
        if _trivial(c) is False:
            return False, None
    cons = [c for c in cons if _trivial(c) is None]
    if not cons:
        return True, (Fraction(0),) * n
    if not any(c.strict for c in cons):
        res = lp.solve(*_as_lp(cons), [Fraction(0)] * n)
        if res.status == lp.INFEASIBLE:
            return False, None
        return True, res.x
    A = []
    b = []
    for c in cons:
        A.append(list(c.normal) + [Fraction(1) if c.strict else Fraction(0)])
        b.append(c.bound)
    A.append([Fraction(0)] * n + [Fraction(1)])
    b.append(Fraction(1))
    res = lp.solve(A, b, [Fraction(0)] * n + [Fraction(1)])
    if res.status != lp.OPTIMAL or res.value <= 0:
        return False, None
    return True, res.x[:n]


def nonempty(P: EPolyhedron) -> bool:
    return is_nonempty(P)[0]


def _sup_nonempty(P: EPolyhedron, c: RatVector) -> SupportValue:
    """sup over a polyhedron already known to be nonempty."""
    cons = [k for k in P.constraints if _trivial(k) is None]
    if not any(c):
        w = is_nonempty(P)[1]
        return SupportValue.finite(0, True, w)
    if not cons:
        return SupportValue.plus_infinity()
    res = lp.solve(*_as_lp(cons), list(c))
    if res.status == lp.UNBOUNDED:
        return SupportValue.plus_infinity()
    if res.status == lp.INFEASIBLE:  # pragma: no cover - guarded by caller
        return SupportValue.minus_infinity()
    v = res.value
    if all(k.holds(res.x) for k in cons):
        return SupportValue.finite(v, True, res.x)
    face = P.with_constraints(equality(c, v))
    ok, w = is_nonempty(face)
    return SupportValue.finite(v, ok, w)


def sup_linear(P: EPolyhedron, c: Sequence) -> SupportValue:
    """Supremum of ``<x, c>`` over P, with attainment.

    For nonempty P the supremum equals the LP optimum over the weakened
    system; it is attained iff P meets the optimal hyperplane.
    """
    _check_dim(P, c)
    return _sup_cached(P, vec(c))


@lru_cache(maxsize=1 << 16)
def _sup_cached(P: EPolyhedron, c: RatVector) -> SupportValue:
    if not nonempty(P):
        return SupportValue.minus_infinity()
    return _sup_nonempty(P, c)


def closure(P: EPolyhedron) -> EPolyhedron:
    """Topological closure.  Weakening is only valid once P is known nonempty."""
    if not nonempty(P):
        return EPolyhedron.empty(P.dim)
    return EPolyhedron(P.dim, tuple(c.weakened() for c in P.constraints))


def _halfspace_contains(Q: EPolyhedron, c: LinConstraint) -> bool:
    """Q (nonempty) inside the half-space c."""
    s = _sup_nonempty(Q, c.normal)
    if s.kind is SupportKind.PLUS_INFINITY:
        return False
    if c.strict:
        return s.value < c.bound or (s.value == c.bound and not s.attained)
    return s.value <= c.bound


def contains(P: EPolyhedron, Q: EPolyhedron) -> bool:
    """True iff Q is a subset of P."""
    if P.dim != Q.dim:
        raise DimensionMismatch("dims %d and %d" % (P.dim, Q.dim))
    if not nonempty(Q):
        return True
    return all(_halfspace_contains(Q, c) for c in P.constraints)


def set_equal(P: EPolyhedron, Q: EPolyhedron) -> bool:
    return contains(P, Q) and contains(Q, P)


def normalize(P: EPolyhedron) -> EPolyhedron:
    """Canonical empty if P is empty, otherwise the simplified system."""
    P = simplify(P)
    if P.is_canonical_empty() or not nonempty(P):
        return EPolyhedron.empty(P.dim)
    return P


def remove_redundant(P: EPolyhedron) -> EPolyhedron:
    """Drop constraints implied by the remaining ones (LP based)."""
    P = simplify(P)
    if P.is_canonical_empty() or not nonempty(P):
        return EPolyhedron.empty(P.dim)
    cons = list(P.constraints)
    i = 0
    while i < len(cons):
        rest = EPolyhedron(P.dim, tuple(cons[:i] + cons[i + 1:]))
        if _halfspace_contains(rest, cons[i]):
            del cons[i]
        else:
            i += 1
    return EPolyhedron(P.dim, tuple(cons))


# -- Fourier-Motzkin ---------------------------------------------------------

def fm_step(constraints: Sequence[LinConstraint], i: int):
    """One elimination round, returning ``(constraint, parent_indices)`` pairs.

    The output lives in one dimension less.  A combination is strict as soon
    as one parent is strict.
    """
    pos, neg, out = [], [], []
    for k, c in enumerate(constraints):
        a = c.normal[i]
        rest = c.normal[:i] + c.normal[i + 1:]
        if a > 0:
            pos.append((k, c, a, rest))
        elif a < 0:
            neg.append((k, c, a, rest))
        else:
            out.append((LinConstraint(rest, c.bound, c.kind), (k,)))
    for kp, p, ap, rp in pos:
        for kn, q, aq, rq in neg:
            lam, mu = -aq, ap
            normal = tuple(lam * u + mu * v for u, v in zip(rp, rq))
            bound = lam * p.bound + mu * q.bound
            kind = STRICT if (p.strict or q.strict) else WEAK
            out.append((LinConstraint(normal, bound, kind), (kp, kn)))
    return out


def fm_eliminate(P: EPolyhedron, var_index: int) -> EPolyhedron:
    """Project P along coordinate ``var_index``."""
    if not 0 <= var_index < P.dim:
        raise IndexError("variable index %d out of range for dim %d" % (var_index, P.dim))
    cons = [c for c, _ in fm_step(P.constraints, var_index)]
    return simplify(EPolyhedron(P.dim - 1, tuple(cons)))


PRUNE_THRESHOLD = 24


def project(P: EPolyhedron, keep: int) -> EPolyhedron:
    """Project onto the first ``keep`` coordinates, pruning redundancy as it goes.

    Every row carries the set of input rows it was combined from; after t
    eliminations a row built from more than t + 1 inputs is implied by the
    others and is dropped without an LP.  Only exact duplicates are merged
    between LP prunings, since dropping implied rows voids that count.
    """
    Q = simplify(P)
    if Q.is_canonical_empty() or not nonempty(Q):
        return EPolyhedron.empty(keep)
    cons = list(Q.constraints)
    hist = [frozenset((k,)) for k in range(len(cons))]
    dim, steps = Q.dim, 0
    while dim > keep:
        # eliminate the trailing variable with the fewest pos*neg products
        best, best_cost = None, None
        for i in range(keep, dim):
            npos = sum(1 for c in cons if c.normal[i] > 0)
            nneg = sum(1 for c in cons if c.normal[i] < 0)
            cost = npos * nneg - npos - nneg
            if best is None or cost < best_cost:
                best, best_cost = i, cost
        steps += 1
        table = {}
        for c, parents in fm_step(cons, best):
            h = frozenset().union(*(hist[k] for k in parents))
            if len(h) > steps + 1:
                continue
            t = _trivial(c)
            if t is True:
                continue
            if t is False:
                return EPolyhedron.empty(keep)
            c = c.normalized()
            if c not in table or len(h) < len(table[c]):
                table[c] = h
        dim -= 1
        cons = sort_constraints(table)
        hist = [table[c] for c in cons]
        if len(cons) > PRUNE_THRESHOLD:
            # the history rule only holds for unpruned systems, so start afresh
            R = remove_redundant(EPolyhedron(dim, tuple(cons)))
            if R.is_canonical_empty():
                return EPolyhedron.empty(keep)
            cons = list(R.constraints)
            hist = [frozenset((k,)) for k in range(len(cons))]
            steps = 0
    return simplify(EPolyhedron(dim, tuple(cons)))


def substitute(P: EPolyhedron, start: int, values: Sequence[Fraction]) -> EPolyhedron:
    """Fix coordinates ``start .. start+len(values)`` to ``values``."""
    values = vec(values)
    stop = start + len(values)
    cons = []
    for c in P.constraints:
        fixed = dot(c.normal[start:stop], values)
        cons.append(LinConstraint(c.normal[:start] + c.normal[stop:], c.bound - fixed, c.kind))
    return EPolyhedron(P.dim - len(values), tuple(cons))


def embed(P: EPolyhedron, dim: int, offset: int) -> EPolyhedron:
    """Lift P into ``Q^dim`` acting on coordinates ``offset .. offset+P.dim``."""
    cons = []
    for c in P.constraints:
        normal = [Fraction(0)] * dim
        normal[offset:offset + P.dim] = c.normal
        cons.append(LinConstraint(tuple(normal), c.bound, c.kind))
    return EPolyhedron(dim, tuple(cons))


def intersect(*polys: EPolyhedron) -> EPolyhedron:
    dims = {p.dim for p in polys}
    if len(dims) != 1:
        raise DimensionMismatch("dims %s" % sorted(dims))
    return EPolyhedron(polys[0].dim, tuple(c for p in polys for c in p.constraints))


# -- small dense linear algebra ---------------------------------------------

def solve_square(M: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[RatVector]:
    """Gaussian elimination; None when M is singular."""
    n = len(M)
    A = [list(M[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [v / p for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return tuple(A[i][n] for i in range(n))


def nullspace(rows: Sequence[Sequence[Fraction]], n: int) -> List[RatVector]:
    """Basis of {v : <r, v> = 0 for every row r} in Q^n."""
    A = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((k for k in range(r, len(A)) if A[k][col] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][col]
        A[r] = [v / p for v in A[r]]
        for k in range(len(A)):
            if k != r and A[k][col] != 0:
                f = A[k][col]
                A[k] = [a - f * b for a, b in zip(A[k], A[r])]
        pivots.append(col)
        r += 1
        if r == len(A):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * n
        v[fcol] = Fraction(1)
        for k, pc in enumerate(pivots):
            v[pc] = -A[k][fcol]
        basis.append(tuple(v))
    return basis


def rank(rows: Sequence[Sequence[Fraction]], n: int) -> int:
    return n - len(nullspace(rows, n))


def vertices(P: EPolyhedron) -> List[RatVector]:
    """Vertices of the closure of P by brute-force basis enumeration.

    Meant for small bounded instances (cone generators, tests).
    """
    Q = closure(P)
    if Q.is_canonical_empty():
        return []
    cons = [c for c in simplify(Q).constraints]
    n = P.dim
    if n == 0:
        return [()]
    found = set()
    for subset in combinations(cons, n):
        x = solve_square([c.normal for c in subset], [c.bound for c in subset])
        if x is not None and all(c.holds(x) for c in cons):
            found.add(x)
    return sorted(found)
