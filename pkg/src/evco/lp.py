"""Exact rational simplex.

Solves ``max c.x  s.t.  A x <= b`` with ``x`` free, using a dense two-phase
tableau and Bland's rule so no cycling can occur.

The tableau is kept fraction-free: every entry is an integer equal to the true
rational entry times a shared positive denominator ``D`` (the current basis
determinant), and pivots use the Bareiss update, whose divisions are exact.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Sequence, Tuple

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Optional[Fraction] = None
    x: Optional[Tuple[Fraction, ...]] = None
    # feasible point plus improving direction when status is UNBOUNDED
    ray: Optional[Tuple[Fraction, ...]] = None


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def _integer_row(values) -> List[int]:
    values = [v if isinstance(v, Fraction) else Fraction(v) for v in values]
    den = 1
    for v in values:
        d = v.denominator
        if d != 1 and den % d:
            den = _lcm(den, d)
    return [v.numerator * (den // v.denominator) for v in values]


class _Tableau:
    def __init__(self, rows, basis):
        self.T = rows          # list of int rows, last entry is the rhs
        self.basis = basis
        self.D = 1

    def pivot(self, r, c, d):
        T = self.T
        D = self.D
        prow = T[r]
        p = prow[c]
        nz = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(T):
            if i == r:
                continue
            f = row[c]
            if f:
                new = [p * v for v in row]
                for j in nz:
                    new[j] -= f * prow[j]
                T[i] = [v // D for v in new] if D != 1 else new
            elif p != D:
                T[i] = [(p * v) // D for v in row] if D != 1 else [p * v for v in row]
        f = d[c]
        new = [p * v for v in d]
        if f:
            for j in nz:
                new[j] -= f * prow[j]
        d[:] = [v // D for v in new] if D != 1 else new
        self.D = p
        self.basis[r] = c
        if p < 0:
            self.D = -p
            for i in range(len(T)):
                T[i] = [-v for v in T[i]]
            d[:] = [-v for v in d]

    def run(self, d, allowed):
        """Primal simplex from a feasible basis.  Returns the unbounded column or None."""
        T = self.T
        basis = self.basis
        while True:
            enter = -1
            for j in allowed:
                if d[j] > 0:
                    enter = j
                    break
            if enter < 0:
                return None
            leave = -1
            for i, row in enumerate(T):
                a = row[enter]
                if a > 0:
                    if leave < 0:
                        leave = i
                        continue
                    lrow = T[leave]
                    # compare row[-1]/a with lrow[-1]/lrow[enter]
                    lhs = row[-1] * lrow[enter]
                    rhs = lrow[-1] * a
                    if lhs < rhs or (lhs == rhs and basis[i] < basis[leave]):
                        leave = i
            if leave < 0:
                return enter
            self.pivot(leave, enter, d)


def solve(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], c: Sequence[Fraction]) -> LPResult:
    m = len(A)
    n = len(c)
    zero = Fraction(0)
    if m == 0:
        if any(c):
            return LPResult(UNBOUNDED, x=(zero,) * n, ray=tuple(Fraction(v) for v in c))
        return LPResult(OPTIMAL, zero, (zero,) * n)

    # columns: x+ (n), x- (n), slacks (m), artificials
    n_struct = 2 * n + m
    neg_rows = [i for i in range(m) if b[i] < 0]
    width = n_struct + len(neg_rows)
    rows = []
    basis = []
    art = 0
    for i in range(m):
        ints = _integer_row(list(A[i]) + [b[i]])
        coeffs, rhs = ints[:-1], ints[-1]
        sgn = -1 if rhs < 0 else 1
        row = [0] * (width + 1)
        for k, v in enumerate(coeffs):
            if v:
                row[k] = sgn * v
                row[n + k] = -sgn * v
        row[2 * n + i] = sgn
        row[-1] = sgn * rhs
        if sgn < 0:
            col = n_struct + art
            art += 1
            row[col] = 1
            basis.append(col)
        else:
            basis.append(2 * n + i)
        rows.append(row)
    tab = _Tableau(rows, basis)

    if neg_rows:
        d = [0] * (width + 1)
        for i in neg_rows:
            d = [x + y for x, y in zip(d, rows[i])]
        for col in range(n_struct, width):
            d[col] = 0
        tab.run(d, range(width))
        if d[-1] > 0:
            return LPResult(INFEASIBLE)
        i = 0
        while i < len(tab.T):
            if tab.basis[i] >= n_struct:
                row = tab.T[i]
                j = next((j for j in range(n_struct) if row[j]), None)
                if j is None:
                    del tab.T[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, j, d)
            i += 1
        tab.T = [row[:n_struct] + [row[-1]] for row in tab.T]

    cint = _integer_row(list(c)) if n else []
    cscale = reduce(_lcm, (Fraction(v).denominator for v in c), 1)
    cost = cint + [-v for v in cint] + [0] * m
    D = tab.D
    d = [D * v for v in cost] + [0]
    for i, bv in enumerate(tab.basis):
        cb = cost[bv]
        if cb:
            row = tab.T[i]
            d = [x - cb * y for x, y in zip(d, row)]
    unbounded_col = tab.run(d, range(n_struct))

    D = tab.D
    vals = [0] * n_struct
    for i, bv in enumerate(tab.basis):
        vals[bv] = tab.T[i][-1]
    x = tuple(Fraction(vals[k] - vals[n + k], D) for k in range(n))
    if unbounded_col is not None:
        step = [0] * n_struct
        step[unbounded_col] = D
        for i, bv in enumerate(tab.basis):
            step[bv] = -tab.T[i][unbounded_col]
        ray = tuple(Fraction(step[k] - step[n + k], D) for k in range(n))
        return LPResult(UNBOUNDED, x=x, ray=ray)
    return LPResult(OPTIMAL, Fraction(-d[-1], D * cscale), x)
