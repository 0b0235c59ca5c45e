from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from evco import lp
from evco.core import (
    EPolyhedron, STRICT, SupportKind, WEAK, LinConstraint, closure, contains, eval_membership,
    fm_eliminate, fm_step, is_nonempty, nonempty, project, rat_str, set_equal, strict, sup_linear, weak,
)
from evco.errors import DimensionMismatch

import oracles


def P(dim, *cons):
    return EPolyhedron(dim, tuple(cons))


# -- lp ----------------------------------------------------------------------

def test_lp_simple_optimum():
    r = lp.solve([[F(1), F(1)], [F(-1), F(0)], [F(0), F(-1)]], [F(4), F(0), F(0)], [F(1), F(2)])
    assert r.status == lp.OPTIMAL
    assert r.value == 8 and r.x == (0, 4)


def test_lp_unbounded_and_infeasible():
    assert lp.solve([[F(-1)]], [F(0)], [F(1)]).status == lp.UNBOUNDED
    assert lp.solve([[F(1)], [F(-1)]], [F(-1), F(0)], [F(1)]).status == lp.INFEASIBLE


coef = st.integers(-4, 4).map(F)
bound = st.integers(-6, 6).map(F)


@st.composite
def boxed_lp(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(0, 4))
    A = [[draw(coef) for _ in range(n)] for _ in range(m)]
    b = [draw(bound) for _ in range(m)]
    for i in range(n):
        for s in (1, -1):
            row = [F(0)] * n
            row[i] = F(s)
            A.append(row)
            b.append(F(draw(st.integers(1, 5))))
    c = [draw(coef) for _ in range(n)]
    return A, b, c


@settings(max_examples=150, deadline=None)
@given(boxed_lp())
def test_lp_matches_vertex_enumeration(data):
    A, b, c = data
    Q = EPolyhedron(len(c), tuple(LinConstraint(tuple(a), v, WEAK) for a, v in zip(A, b)))
    best = oracles.brute_max(Q, c)
    r = lp.solve(A, b, c)
    if best is None:
        assert r.status == lp.INFEASIBLE
    else:
        assert r.status == lp.OPTIMAL and r.value == best
        assert oracles.member(Q, r.x)


# -- membership ----------------------------------------------------------------

def test_membership_examples():
    neg = P(1, strict([1], 0))
    assert eval_membership(neg, [-1])
    assert not eval_membership(neg, [0])
    assert eval_membership(P(1, weak([1], 0), weak([-1], 0)), [0])


def test_membership_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        eval_membership(P(1, strict([1], 0)), [0, 0])


# -- Fourier-Motzkin -------------------------------------------------------------

def test_fm_examples():
    R = fm_eliminate(P(2, weak([1, 1], 1), weak([0, -1], 0)), 1)
    assert set_equal(R, P(1, weak([1], 1)))
    assert not nonempty(fm_eliminate(P(1, strict([1], 0), strict([-1], 0)), 0))
    R = fm_eliminate(P(2, strict([1, -1], 0), weak([0, 1], 2)), 1)
    assert set_equal(R, P(1, strict([1], 2)))
    for x in range(-3, 4):
        assert eval_membership(R, [x]) == (x < 2)


def test_fm_strictness_follows_parents():
    cons = [strict([1, 1], 1), weak([1, -1], 0), weak([-1, 1], 3), weak([2, 0], 5)]
    for c, parents in fm_step(cons, 1):
        assert c.strict == any(cons[k].strict for k in parents)


@st.composite
def mixed_system(draw, max_dim=3):
    n = draw(st.integers(1, max_dim))
    m = draw(st.integers(1, 6))
    cons = []
    for _ in range(m):
        a = tuple(F(draw(st.integers(-3, 3))) for _ in range(n))
        cons.append(LinConstraint(a, F(draw(st.integers(-6, 6)), draw(st.integers(1, 3))),
                                  STRICT if draw(st.booleans()) else WEAK))
    return EPolyhedron(n, tuple(cons))


@settings(max_examples=100, deadline=None)
@given(mixed_system(), st.data())
def test_fm_agrees_with_interval_lift(Q, data):
    i = data.draw(st.integers(0, Q.dim - 1))
    R = fm_eliminate(Q, i)
    for y in oracles.grid(Q.dim - 1, oracles.GRID11[::2]):
        assert eval_membership(R, y) == oracles.lift_interval(Q, i, y)


@settings(max_examples=60, deadline=None)
@given(mixed_system(max_dim=4), st.data())
def test_project_matches_one_variable_at_a_time(Q, data):
    keep = data.draw(st.integers(0, Q.dim - 1))
    R = Q
    while R.dim > keep:
        R = fm_eliminate(R, R.dim - 1)
    assert set_equal(project(Q, keep), R)


def test_project_drops_combined_rows_without_changing_the_set():
    # the shadow of a square pyramid; the strict row is implied there
    Q = P(3, weak([1, 0, 1], 1), weak([-1, 0, 1], 1), weak([0, 1, 1], 1), weak([0, -1, 1], 1),
          weak([0, 0, -1], 0), strict([1, 1, 0], 3))
    R = project(Q, 2)
    assert set_equal(R, P(2, weak([1, 0], 1), weak([-1, 0], 1), weak([0, 1], 1), weak([0, -1], 1)))


# -- nonemptiness and sup ----------------------------------------------------------

def test_nonempty_examples():
    assert is_nonempty(P(1, strict([1], 0), strict([-1], 0))) == (False, None)
    ok, w = is_nonempty(P(1, weak([1], 0), weak([-1], 0)))
    assert ok and w == (0,)
    Q = P(1, strict([1], 1), strict([-1], 1))
    ok, w = is_nonempty(Q)
    assert ok and eval_membership(Q, w)


def test_sup_examples():
    s = sup_linear(P(1, strict([1], 0)), [1])
    assert (s.kind, s.value, s.attained) == (SupportKind.FINITE, 0, False)
    s = sup_linear(P(1, weak([1], 0)), [1])
    assert (s.value, s.attained) == (0, True)
    s = sup_linear(P(2, strict([-1, 0], 0), weak([1, -1], 0)), [0, -1])
    assert (s.value, s.attained) == (0, False)


def test_sup_infinite_cases():
    assert sup_linear(P(1, strict([1], 0), strict([-1], 0)), [1]).kind is SupportKind.MINUS_INFINITY
    assert sup_linear(P(1, strict([-1], 0)), [1]).kind is SupportKind.PLUS_INFINITY


@settings(max_examples=150, deadline=None)
@given(mixed_system())
def test_sup_witness_and_epsilon_approach(Q):
    c = tuple(F(v) for v in range(1, Q.dim + 1))
    s = sup_linear(Q, c)
    if s.kind is SupportKind.MINUS_INFINITY:
        assert not nonempty(Q)
        return
    if s.kind is SupportKind.PLUS_INFINITY:
        assert nonempty(Q.with_constraints([strict([-v for v in c], -1000)]))
        return
    # nothing above the sup
    assert not nonempty(Q.with_constraints([strict([-v for v in c], -s.value)]))
    if s.attained:
        assert eval_membership(Q, s.witness)
        assert sum(a * b for a, b in zip(c, s.witness)) == s.value
    else:
        assert not nonempty(Q.with_constraints([weak([-v for v in c], -s.value)]))
        for k in (1, 2, 3):
            assert nonempty(Q.with_constraints([strict([-v for v in c], -(s.value - F(1, 2 ** k)))]))


# -- closure and containment ---------------------------------------------------------

def test_closure_examples():
    assert closure(P(1, strict([1], 0))) == P(1, weak([1], 0))
    assert closure(P(1, strict([1], 0), strict([-1], 0))).is_canonical_empty()
    Q = P(2, weak([0, 1], 0), weak([0, -1], 0), strict([1, 0], 0))
    assert closure(Q) == P(2, weak([0, 1], 0), weak([0, -1], 0), weak([1, 0], 0))


def test_closure_segment_density():
    Q = P(2, strict([1, 1], 1), strict([-1, 0], 0), weak([0, -1], 0))
    _, q = is_nonempty(Q)
    for p in oracles.closed_vertices(Q):
        for k in (1, 2, 3):
            t = F(1, 2 ** k)
            assert eval_membership(Q, [(1 - t) * a + t * b for a, b in zip(q, p)])


def test_contains_examples():
    assert contains(P(1, weak([1], 0)), P(1, strict([1], 0)))
    assert not contains(P(1, strict([1], 0)), P(1, weak([1], 0)))
    assert contains(P(1, strict([1], 0)), P(1, strict([1], 0), strict([1], 1)))


@settings(max_examples=60, deadline=None)
@given(mixed_system(2), mixed_system(2), mixed_system(2))
def test_contains_is_a_preorder(A, B, C):
    if not (A.dim == B.dim == C.dim):
        return
    assert contains(A, A)
    if contains(A, B) and contains(B, C):
        assert contains(A, C)


def test_rationals_print_as_p_over_q():
    assert rat_str(F(3)) == "3/1"
    assert rat_str(F(-2, 4)) == "-1/2"


def test_floats_are_refused():
    with pytest.raises(TypeError):
        weak([0.5], 1)
