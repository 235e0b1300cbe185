from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pglines.bincode import code_from_points, dual_weight_distribution, weight_distribution
from pglines.construct import line_spread
from pglines.linesys import point_expansion
from pglines.lp import RationalLP, check_farkas, check_solution, code_lp, solve


def vertex_optimum(A, b, c):
    """max c.x over {x >= 0, A x <= b} in two variables by enumerating vertices."""
    rows = [list(map(Fraction, a)) + [Fraction(bi)] for a, bi in zip(A, b)]
    rows += [[Fraction(1), Fraction(0), Fraction(0)], [Fraction(0), Fraction(1), Fraction(0)]]
    kinds = ["le"] * len(A) + ["ge0", "ge0"]
    best = None
    for (r1, k1), (r2, k2) in combinations(zip(rows, kinds), 2):
        det = r1[0] * r2[1] - r1[1] * r2[0]
        if det == 0:
            continue
        x = (r1[2] * r2[1] - r1[1] * r2[2]) / det
        y = (r1[0] * r2[2] - r1[2] * r2[0]) / det
        if x < 0 or y < 0 or any(a[0] * x + a[1] * y > bi for a, bi in zip(A, b)):
            continue
        val = c[0] * x + c[1] * y
        best = val if best is None else max(best, val)
    return best


def build(A, b, c):
    lp = RationalLP()
    lp.add_variable("x")
    lp.add_variable("y")
    for (a0, a1), bi in zip(A, b):
        lp.add_constraint({"x": a0, "y": a1}, "<=", bi)
    lp.set_objective({"x": c[0], "y": c[1]})
    return lp


coef = st.integers(-4, 6)


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.tuples(st.tuples(st.integers(0, 6), st.integers(0, 6)), st.integers(-3, 12)), min_size=1, max_size=5),
    st.tuples(coef, coef),
)
def test_matches_vertex_enumeration_bounded(rows, c):
    A = [a for a, _ in rows] + [(1, 1)]
    b = [bi for _, bi in rows] + [20]
    lp = build(A, b, c)
    res = solve(lp)
    want = vertex_optimum(A, b, c)
    if want is None:
        assert res.status == "infeasible"
        assert check_farkas(lp, res.certificate)
    elif c == (0, 0):
        # a zero objective is a pure feasibility question
        assert res.status == "feasible" and check_solution(lp, res.x)
    else:
        assert res.status == "optimal"
        assert res.objective == want
        assert check_solution(lp, res.x)


def test_unbounded():
    lp = build([(1, -1)], [1], (1, 1))
    assert solve(lp).status == "unbounded"


def test_equalities_and_ge():
    lp = RationalLP()
    for v in "abc":
        lp.add_variable(v)
    lp.add_constraint({"a": 1, "b": 1, "c": 1}, "==", 1)
    lp.add_constraint({"a": 1, "b": -1}, ">=", Fraction(1, 3))
    lp.set_objective({"b": 1, "c": 2}, maximize=False)
    res = solve(lp)
    assert res.status == "optimal" and res.objective == 0
    assert res.x["a"] == 1 and check_solution(lp, res.x)


def test_infeasible_certificate():
    lp = RationalLP()
    lp.add_variable("x")
    lp.add_constraint({"x": 1}, "<=", 1)
    lp.add_constraint({"x": 1}, ">=", 2)
    res = solve(lp)
    assert not res.feasible
    assert check_farkas(lp, res.certificate)
    assert not check_farkas(lp, [Fraction(0), Fraction(0)])


def test_bad_input():
    lp = RationalLP()
    lp.add_variable("x")
    with pytest.raises(ValueError):
        lp.add_variable("x")
    with pytest.raises(ValueError):
        lp.add_constraint({"y": 1}, "<=", 0)
    with pytest.raises(ValueError):
        lp.add_constraint({"x": 1}, "<", 0)


def test_code_lp_feasible_for_real_code():
    code = code_from_points(point_expansion(line_spread(4)))
    wd = weight_distribution(code)
    lp = code_lp(code.n, code.k, [8])
    x = {f"A{w}": Fraction(c) for w, c in wd.A.items() if w}
    assert check_solution(lp, x)
    assert dual_weight_distribution(code).A.get(1, 0) == 0
    res = solve(lp)
    assert res.feasible


def test_code_lp_infeasible_weight_set():
    # no [7,3] code with B_1 = 0 has all nonzero weights equal to 2
    lp = code_lp(7, 3, [2])
    res = solve(lp)
    assert not res.feasible and check_farkas(lp, res.certificate)
