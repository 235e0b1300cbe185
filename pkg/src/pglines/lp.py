"""Exact rational linear programming (dense two-phase simplex, Bland's rule).

Variables are nonnegative.  Infeasible programs come back with a Farkas
certificate that :func:`check_farkas` verifies independently of the solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .bincode import krawtchouk

try:  # exact rationals; gmpy2 is only a faster drop-in for Fraction
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

SENSES = ("<=", ">=", "==")


@dataclass
class Constraint:
    coeffs: Dict[str, Fraction]
    sense: str
    rhs: Fraction
    name: str = ""


@dataclass
class RationalLP:
    variables: List[str] = field(default_factory=list)
    constraints: List[Constraint] = field(default_factory=list)
    objective: Dict[str, Fraction] = field(default_factory=dict)
    maximize: bool = True

    def add_variable(self, name: str) -> str:
        if name in self.variables:
            raise ValueError(f"duplicate variable {name}")
        self.variables.append(name)
        return name

    def add_constraint(self, coeffs: Mapping[str, object], sense: str, rhs, name: str = "") -> None:
        if sense not in SENSES:
            raise ValueError(f"unknown sense {sense!r}")
        unknown = set(coeffs) - set(self.variables)
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)}")
        self.constraints.append(
            Constraint({v: Fraction(c) for v, c in coeffs.items() if c}, sense, Fraction(rhs), name)
        )

    def set_objective(self, coeffs: Mapping[str, object], maximize: bool = True) -> None:
        self.objective = {v: Fraction(c) for v, c in coeffs.items() if c}
        self.maximize = maximize


@dataclass
class LPResult:
    status: str  # "feasible", "optimal", "infeasible", "unbounded"
    x: Optional[Dict[str, Fraction]] = None
    objective: Optional[Fraction] = None
    certificate: Optional[List[Fraction]] = None  # one multiplier per constraint

    @property
    def feasible(self) -> bool:
        return self.status in ("feasible", "optimal", "unbounded")


def _pivot(tab: List[List[Fraction]], row: int, col: int) -> None:
    piv = tab[row][col]
    tab[row] = [v / piv for v in tab[row]]
    prow = tab[row]
    for i, other in enumerate(tab):
        if i != row and other[col]:
            f = other[col]
            tab[i] = [a - f * b for a, b in zip(other, prow)]


def _simplex(tab: List[List[Fraction]], basis: List[int], allowed: Sequence[bool]) -> str:
    """Minimize the cost row tab[-1] (stored as reduced costs); Bland's rule."""
    m = len(basis)
    ncols = len(tab[0]) - 1
    while True:
        cost = tab[-1]
        col = next((j for j in range(ncols) if allowed[j] and cost[j] < 0), None)
        if col is None:
            return "optimal"
        best = None
        for i in range(m):
            a = tab[i][col]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(tab, best[1], col)
        basis[best[1]] = col


def solve(lp: RationalLP) -> LPResult:
    names = lp.variables
    nv = len(names)
    index = {v: j for j, v in enumerate(names)}
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    flips: List[int] = []
    slack_cols: List[Tuple[int, int]] = []  # (row, sign)
    for i, c in enumerate(lp.constraints):
        row = [_Q(0)] * nv
        for v, a in c.coeffs.items():
            row[index[v]] = _Q(a.numerator, a.denominator)
        b = _Q(c.rhs.numerator, c.rhs.denominator)
        sign = 1
        if b < 0:
            row = [-a for a in row]
            b = -b
            sign = -1
        rows.append(row)
        rhs.append(b)
        flips.append(sign)
        if c.sense == "<=":
            slack_cols.append((i, sign))
        elif c.sense == ">=":
            slack_cols.append((i, -sign))
    m = len(rows)
    ns = len(slack_cols)
    # columns: originals | slacks | artificials | rhs
    width = nv + ns + m
    tab: List[List[Fraction]] = []
    for i in range(m):
        t = rows[i] + [_Q(0)] * (ns + m) + [rhs[i]]
        tab.append(t)
    for j, (i, sg) in enumerate(slack_cols):
        tab[i][nv + j] = _Q(sg)
    for i in range(m):
        tab[i][nv + ns + i] = _Q(1)
    basis = [nv + ns + i for i in range(m)]
    # phase 1: minimize sum of artificials, expressed in reduced costs
    cost = [_Q(0)] * (width + 1)
    for j in range(nv + ns, width):
        cost[j] = _Q(1)
    for i in range(m):
        cost = [a - b for a, b in zip(cost, tab[i])]
    tab.append(cost)
    _simplex(tab, basis, [True] * width)
    phase1 = -tab[-1][-1]
    if phase1 > 0:
        # duals u_i = 1 - reduced cost of artificial i; certificate y = -u in original row signs
        u = [1 - tab[-1][nv + ns + i] for i in range(m)]
        y = [_F(-u[i] * flips[i]) for i in range(m)]
        return LPResult("infeasible", certificate=y)
    # drive remaining artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= nv + ns:
            col = next((j for j in range(nv + ns) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, i, col)
                basis[i] = col
    allowed = [j < nv + ns for j in range(width)]
    if not lp.objective:
        x = _extract(tab, basis, names)
        return LPResult("feasible", x=x)
    sign = -1 if lp.maximize else 1
    cost = [_Q(0)] * (width + 1)
    for v, a in lp.objective.items():
        cost[index[v]] = _Q(sign * a.numerator, a.denominator)
    for i in range(m):
        cb = cost[basis[i]]
        if cb:
            cost = [a - cb * b for a, b in zip(cost, tab[i])]
    tab[-1] = cost
    status = _simplex(tab, basis, allowed)
    x = _extract(tab, basis, names)
    if status == "unbounded":
        return LPResult("unbounded", x=x)
    value = sum(lp.objective.get(v, 0) * x[v] for v in names)
    return LPResult("optimal", x=x, objective=value)


def _extract(tab, basis, names) -> Dict[str, Fraction]:
    x = {v: Fraction(0) for v in names}
    for i, b in enumerate(basis):
        if b < len(names):
            x[names[b]] = _F(tab[i][-1])
    return x


def _F(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


lp_feasible = solve


def check_farkas(lp: RationalLP, y: Sequence[Fraction]) -> bool:
    """True iff ``y`` proves infeasibility.

    Needs y_i >= 0 on <= rows, y_i <= 0 on >= rows, y^T A >= 0 columnwise and
    y^T b < 0.  For feasible x >= 0 this would give 0 <= y^T A x <= y^T b < 0.
    """
    if len(y) != len(lp.constraints):
        return False
    for yi, c in zip(y, lp.constraints):
        if c.sense == "<=" and yi < 0:
            return False
        if c.sense == ">=" and yi > 0:
            return False
    for v in lp.variables:
        if sum(yi * c.coeffs.get(v, 0) for yi, c in zip(y, lp.constraints)) < 0:
            return False
    return sum(yi * c.rhs for yi, c in zip(y, lp.constraints)) < 0


def check_solution(lp: RationalLP, x: Mapping[str, Fraction]) -> bool:
    if any(x.get(v, 0) < 0 for v in lp.variables):
        return False
    for c in lp.constraints:
        lhs = sum(a * x.get(v, 0) for v, a in c.coeffs.items())
        if c.sense == "<=" and lhs > c.rhs:
            return False
        if c.sense == ">=" and lhs < c.rhs:
            return False
        if c.sense == "==" and lhs != c.rhs:
            return False
    return True


def code_lp(
    n: int,
    k: int,
    weights: Sequence[int],
    *,
    full_length: bool = True,
    max_dual_index: Optional[int] = None,
) -> RationalLP:
    """LP relaxation for a [n, k]_2 code whose nonzero weights lie in ``weights``.

    Variables A_w; constraints: sum A_w = 2^k - 1, MacWilliams B_i >= 0 for
    0 < i <= max_dual_index (default n), and B_1 = 0 when ``full_length``.
    """
    weights = sorted(set(w for w in weights if 0 < w <= n))
    lp = RationalLP()
    for w in weights:
        lp.add_variable(f"A{w}")
    lp.add_constraint({f"A{w}": 1 for w in weights}, "==", 2**k - 1, "count")
    top = n if max_dual_index is None else max_dual_index
    for i in range(1, top + 1):
        coeffs = {f"A{w}": krawtchouk(n, i, w) for w in weights}
        # 2^k B_i = K_i(0) + sum_w K_i(w) A_w
        if i == 1 and full_length:
            lp.add_constraint(coeffs, "==", -n, "B1")
        else:
            lp.add_constraint(coeffs, ">=", -comb(n, i), f"B{i}")
    return lp

