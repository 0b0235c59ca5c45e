"""Brute-force oracles that share no code with the package.

They work directly on (normal, bound, strict) triples and plain Fractions.
"""
from fractions import Fraction
from itertools import combinations, product


def triples(P):
    return [(tuple(c.normal), c.bound, c.strict) for c in P.constraints]


def holds(t, x):
    a, b, s = t
    v = sum(ai * xi for ai, xi in zip(a, x))
    return v < b if s else v <= b


def member(P, x):
    return all(holds(t, x) for t in triples(P))


def gauss_solve(rows, rhs):
    """Unique solution of a square system, or None."""
    n = len(rows)
    M = [list(r) + [v] for r, v in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [u - f * v for u, v in zip(M[r], M[col])]
    return tuple(M[i][n] / M[i][i] for i in range(n))


def closed_vertices(P):
    """Vertices of the weakened system, by trying every square subsystem."""
    ts = [(a, b, False) for a, b, _ in triples(P)]
    n = P.dim
    found = set()
    for sub in combinations(ts, n):
        x = gauss_solve([t[0] for t in sub], [t[1] for t in sub])
        if x is not None and all(holds(t, x) for t in ts):
            found.add(x)
    return sorted(found)


def brute_max(P, c):
    """Max of <c, x> over the vertices of the weakened (bounded) system."""
    vs = closed_vertices(P)
    if not vs:
        return None
    return max(sum(ci * xi for ci, xi in zip(c, v)) for v in vs)


def lift_interval(P, i, y):
    """Is there t with (y[:i], t, y[i:]) in P?  Decided by interval arithmetic."""
    lo, lo_open, hi, hi_open = None, False, None, False
    for a, b, s in triples(P):
        rest = sum(a[j] * y[j if j < i else j - 1] for j in range(len(a)) if j != i)
        r = b - rest
        if a[i] == 0:
            if not (0 < r if s else 0 <= r):
                return False
            continue
        v = r / a[i]
        if a[i] > 0:
            if hi is None or v < hi:
                hi, hi_open = v, s
            elif v == hi:
                hi_open = hi_open or s
        else:
            if lo is None or v > lo:
                lo, lo_open = v, s
            elif v == lo:
                lo_open = lo_open or s
    if lo is None or hi is None:
        return True
    if lo < hi:
        return True
    return lo == hi and not lo_open and not hi_open


def grid(dim, values):
    return list(product(values, repeat=dim))


GRID11 = [Fraction(k, 2) for k in range(-5, 6)]
