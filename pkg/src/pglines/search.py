"""ILP models for (n, r, s) systems, a small exhaustive maximizer, and orbit models.

Model: integer x_L >= 0 per line L, sum_{L <= H} x_L <= s for every hyperplane
H, and either maximize sum x_L or require sum x_L = n.  Variable ``x_T_L``
is the line with RREF basis rows T > L (bitmasks, bit 0 = coordinate 1);
row ``h_D`` is the hyperplane with dual vector D.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

from .construct import gf_mul
from .gf2geom import DomainError, Line, apply_matrix, bits_from_str, invert_matrix, iter_lines, rank, transpose
from .linesys import LineSystem, verify_system

FORMATS = ("lp", "mps")
MAX_GROUP_ORDER = 10**6
TERMS_PER_LINE = 8


class SearchLimitError(DomainError):
    pass


# --------------------------------------------------------------------------
# generic model


@dataclass(frozen=True)
class IlpModel:
    """Rows over (possibly orbit-aggregated) line variables."""

    r: int
    s: int
    n: Optional[int]
    variables: Tuple[str, ...]
    weights: Tuple[int, ...]  # lines represented by each variable
    rows: Tuple[Tuple[str, Tuple[Tuple[int, int], ...]], ...]  # (name, ((var index, coeff), ...))
    members: Tuple[Tuple[Line, ...], ...]

    @property
    def maximize(self) -> bool:
        return self.n is None

    def write(self, handle: TextIO, fmt: str = "lp") -> None:
        if fmt == "lp":
            _write_lp(self, handle)
        elif fmt == "mps":
            _write_mps(self, handle)
        else:
            raise ValueError(f"unsupported model format {fmt!r}; choose from {FORMATS}")

    def text(self, fmt: str = "lp") -> str:
        import io

        buf = io.StringIO()
        self.write(buf, fmt)
        return buf.getvalue()

    def lift(self, values: Sequence[int]) -> LineSystem:
        """Expand a solution (one value per variable) to a line system."""
        counts: Counter = Counter()
        for members, y in zip(self.members, values):
            for line in members:
                counts[line] += y
        return LineSystem(self.r, {l: m for l, m in counts.items() if m})


def _terms(coeffs: Iterable[Tuple[str, int]]) -> List[str]:
    out = []
    for k, (name, c) in enumerate(coeffs):
        sign = "-" if c < 0 else ("+" if k else "")
        mag = "" if abs(c) == 1 else f"{abs(c)} "
        out.append(f"{sign} {mag}{name}".strip())
    return out


def _wrap(prefix: str, terms: List[str], handle: TextIO) -> None:
    for start in range(0, len(terms), TERMS_PER_LINE):
        lead = prefix if start == 0 else " " * len(prefix)
        handle.write(lead + " ".join(terms[start : start + TERMS_PER_LINE]) + "\n")


def _write_lp(model: IlpModel, handle: TextIO) -> None:
    names = model.variables
    handle.write(f"\\ line systems in PG({model.r - 1},2): r={model.r} s={model.s}")
    handle.write(f" n={model.n}\n" if model.n is not None else " maximize n\n")
    handle.write("Maximize\n")
    _wrap(" obj: ", _terms(zip(names, model.weights)), handle)
    handle.write("Subject To\n")
    for name, coeffs in model.rows:
        terms = _terms((names[j], c) for j, c in coeffs)
        if not terms:
            continue
        _wrap(f" {name}: ", terms[:-1] + [terms[-1] + f" <= {model.s}"], handle)
    if model.n is not None:
        terms = _terms(zip(names, model.weights))
        _wrap(" total: ", terms[:-1] + [terms[-1] + f" = {model.n}"], handle)
    handle.write("Bounds\n")
    for v in names:
        handle.write(f" 0 <= {v} <= {model.s}\n")
    handle.write("General\n")
    _wrap(" ", list(names), handle)
    handle.write("End\n")


def _write_mps(model: IlpModel, handle: TextIO) -> None:
    names = model.variables
    handle.write(f"NAME          PGLINES_R{model.r}_S{model.s}\n")
    handle.write("* objective negated: minimize -sum of lines\n")
    handle.write("ROWS\n N  obj\n")
    live = [(name, coeffs) for name, coeffs in model.rows if coeffs]
    for name, _ in live:
        handle.write(f" L  {name}\n")
    if model.n is not None:
        handle.write(" E  total\n")
    by_var: Dict[int, List[Tuple[str, int]]] = {j: [] for j in range(len(names))}
    for name, coeffs in live:
        for j, c in coeffs:
            by_var[j].append((name, c))
    handle.write("COLUMNS\n")
    handle.write("    MARKER                 'MARKER'                 'INTORG'\n")
    for j, v in enumerate(names):
        entries = [("obj", -model.weights[j])] + by_var[j]
        if model.n is not None:
            entries.append(("total", model.weights[j]))
        for row, c in entries:
            handle.write(f"    {v:<20} {row:<20} {c}\n")
    handle.write("    MARKER                 'MARKER'                 'INTEND'\n")
    handle.write("RHS\n")
    for name, _ in live:
        handle.write(f"    RHS                  {name:<20} {model.s}\n")
    if model.n is not None:
        handle.write(f"    RHS                  {'total':<20} {model.n}\n")
    handle.write("BOUNDS\n")
    for v in names:
        handle.write(f" UP BND                  {v:<20} {model.s}\n")
    handle.write("ENDATA\n")


def _var(line: Line) -> str:
    return f"x_{line.top}_{line.low}"


def _check_model_args(r: int, s: int, n: Optional[int]) -> None:
    if not 3 <= r <= 12:
        raise DomainError(f"ILP export supports 3 <= r <= 12, got r={r}")
    if s < 1 or (n is not None and n < 1):
        raise DomainError("s and n must be positive")


def build_model(r: int, s: int, n: Optional[int] = None) -> IlpModel:
    _check_model_args(r, s, n)
    lines = list(iter_lines(r))
    index = {l: j for j, l in enumerate(lines)}
    rows = []
    for h in range(1, 1 << r):
        coeffs = tuple(
            (index[l], 1) for l in lines if not (l.top & h).bit_count() & 1 and not (l.low & h).bit_count() & 1
        )
        rows.append((f"h{h}", coeffs))
    return IlpModel(
        r, s, n, tuple(_var(l) for l in lines), (1,) * len(lines), tuple(rows), tuple((l,) for l in lines)
    )


def export_ilp(r: int, s: int, n: Optional[int] = None, fmt: str = "lp") -> str:
    """Model text; cost grows like 4^r lines times 2^r rows, so r <= 8 is practical."""
    if fmt not in FORMATS:
        raise ValueError(f"unsupported model format {fmt!r}; choose from {FORMATS}")
    return build_model(r, s, n).text(fmt)


# --------------------------------------------------------------------------
# exhaustive maximization


@dataclass(frozen=True)
class SearchResult:
    n: int
    witness: Optional[LineSystem]
    nodes: int
    complete: bool  # False if stopped early at the cap


def _within_limits(r: int, s: int) -> bool:
    return 3 <= r <= 5 or (r == 6 and s <= 2)


def exhaustive_max(r: int, s: int, n_cap: Optional[int] = None) -> SearchResult:
    """Exact maximum n <= n_cap of a spanning system with every hyperplane holding <= s lines.

    Depth-first over lines in canonical order trying multiplicity 1, then 0,
    then higher values; the first line is forced (the group acts transitively on
    lines).  Stops as soon as ``n_cap`` (default: the Griesmer upper bound) is
    reached.  The witness is the first optimum met in this order.
    """
    if not _within_limits(r, s):
        raise SearchLimitError(f"exhaustive search limited to r <= 5, or r = 6 with s <= 2 (got r={r}, s={s})")
    from .bounds import griesmer_upper_bound

    cap = griesmer_upper_bound(r, s) if n_cap is None else n_cap
    lines = list(iter_lines(r))
    hyper = [[h for h in range(1, 1 << r) if not (l.top & h).bit_count() & 1 and not (l.low & h).bit_count() & 1]
             for l in lines]
    per_line = 2 ** (r - 2) - 1
    budget = [s] * (1 << r)
    budget[0] = 0
    total_budget = s * ((1 << r) - 1)
    mult = [0] * len(lines)
    best = [0, None]
    nodes = [0]
    done = [False]

    def dfs(i: int, cur: int, slack: int) -> None:
        nodes[0] += 1
        if cur > best[0] and cur > s:
            best[0], best[1] = cur, list(mult)
            if cur >= cap:
                done[0] = True
                return
        if i == len(lines) or done[0]:
            return
        if cur + slack // per_line <= best[0]:
            return
        hs = hyper[i]
        room = min(budget[h] for h in hs)
        # simple lines first: optima tend to have small multiplicities
        order = [m for m in (1, 0) if m <= room] + list(range(2, room + 1))
        if i == 0:
            order = [m for m in order if m > 0]
        for m in order:
            for h in hs:
                budget[h] -= m
            mult[i] = m
            dfs(i + 1, cur + m, slack - m * per_line)
            mult[i] = 0
            for h in hs:
                budget[h] += m
            if done[0]:
                return

    dfs(0, 0, total_budget)
    witness = None
    if best[1] is not None:
        witness = LineSystem(r, {l: m for l, m in zip(lines, best[1]) if m})
        report = verify_system(witness)
        if report.s_max > s or not report.spanning or report.n != best[0]:
            raise AssertionError(f"search witness failed verification: {report.as_dict()}")
    return SearchResult(best[0], witness, nodes[0], not done[0] or best[0] >= cap)


# --------------------------------------------------------------------------
# prescribed automorphisms


def mat_mul(a: Sequence[int], b: Sequence[int], r: int) -> Tuple[int, ...]:
    """Row masks of A B (apply B first)."""
    out = []
    for i in range(r):
        acc = 0
        for j in range(r):
            if a[i] >> j & 1:
                acc ^= b[j]
        out.append(acc)
    return tuple(out)


def identity(r: int) -> Tuple[int, ...]:
    return tuple(1 << i for i in range(r))


def group_closure(generators: Sequence[Sequence[int]], r: int, limit: int = MAX_GROUP_ORDER) -> List[Tuple[int, ...]]:
    gens = [tuple(g) for g in generators]
    for g in gens:
        if rank(g) != r:
            raise DomainError("singular generator matrix")
    elems = {identity(r)}
    frontier = [identity(r)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mat_mul(g, x, r)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
                    if len(elems) > limit:
                        raise DomainError(f"group order exceeds {limit}")
        frontier = nxt
    return sorted(elems)


def singer_generator(r: int) -> Tuple[int, ...]:
    """Multiplication by the class of X in GF(2^r), least irreducible modulus."""
    cols = [gf_mul(2, 1 << j, r) for j in range(r)]
    return tuple(sum(((cols[j] >> i) & 1) << j for j in range(r)) for i in range(r))


def frobenius_generator(r: int) -> Tuple[int, ...]:
    """The squaring map of GF(2^r) in the polynomial basis."""
    cols = [gf_mul(1 << j, 1 << j, r) for j in range(r)]
    return tuple(sum(((cols[j] >> i) & 1) << j for j in range(r)) for i in range(r))


def _orbits(items: List, act) -> List[List]:
    seen = set()
    out = []
    for x in items:
        if x in seen:
            continue
        orbit = [x]
        seen.add(x)
        k = 0
        while k < len(orbit):
            for y in act(orbit[k]):
                if y not in seen:
                    seen.add(y)
                    orbit.append(y)
            k += 1
        out.append(sorted(orbit))
    return sorted(out, key=lambda o: o[0])


def line_orbits(generators: Sequence[Sequence[int]], r: int) -> List[List[Line]]:
    gens = [tuple(g) for g in generators]
    for g in gens:
        if rank(g) != r:
            raise DomainError("singular generator matrix")

    def act(line: Line):
        return [Line.through(apply_matrix(g, line.top), apply_matrix(g, line.low), r) for g in gens]

    return _orbits(list(iter_lines(r)), act)


def hyperplane_orbits(generators: Sequence[Sequence[int]], r: int) -> List[List[int]]:
    # v in H_h iff <v, h> = 0; then g v lies in H_{g^-T h}
    duals = [transpose(invert_matrix(g, r), r) for g in generators]

    def act(h: int):
        return [apply_matrix(d, h) for d in duals]

    return _orbits(list(range(1, 1 << r)), act)


def orbit_model(
    r: int, s: int, generators: Sequence[Sequence[int]], n: Optional[int] = None
) -> IlpModel:
    """Model with one variable per line orbit and one row per hyperplane orbit."""
    _check_model_args(r, s, n)
    group_closure(generators, r)
    lorbs = line_orbits(generators, r)
    horbs = hyperplane_orbits(generators, r)
    rows = []
    for orbit in horbs:
        h = orbit[0]
        coeffs = []
        for j, lo in enumerate(lorbs):
            c = sum(1 for l in lo if not (l.top & h).bit_count() & 1 and not (l.low & h).bit_count() & 1)
            if c:
                coeffs.append((j, c))
        rows.append((f"h{h}", tuple(coeffs)))
    return IlpModel(
        r,
        s,
        n,
        tuple(_var(o[0]) for o in lorbs),
        tuple(len(o) for o in lorbs),
        tuple(rows),
        tuple(tuple(o) for o in lorbs),
    )


def orbit_max(model: IlpModel, limit_vars: int = 40) -> Tuple[int, Optional[Tuple[int, ...]]]:
    """Exhaustive search over orbit variables (few orbits only).

    Maximizes sum weight_j y_j, or with ``model.n`` set looks for any point
    reaching exactly n; returns (-1, None) when there is none.
    """
    k = len(model.variables)
    if k > limit_vars:
        raise SearchLimitError(f"orbit_max handles at most {limit_vars} orbit variables, got {k}")
    cols: List[List[Tuple[int, int]]] = [[] for _ in range(k)]
    for ri, (_, coeffs) in enumerate(model.rows):
        for j, c in coeffs:
            cols[j].append((ri, c))
    budget = [model.s] * len(model.rows)
    y = [0] * k
    best: List = [-1, None]
    target = model.n

    def dfs(j: int, cur: int) -> bool:
        if j == k:
            if (target is None and cur > best[0]) or cur == target:
                best[0], best[1] = cur, tuple(y)
            return cur == target
        room = min([model.s] + [budget[ri] // c for ri, c in cols[j]])
        for m in range(room, -1, -1):
            for ri, c in cols[j]:
                budget[ri] -= m * c
            y[j] = m
            found = dfs(j + 1, cur + m * model.weights[j])
            y[j] = 0
            for ri, c in cols[j]:
                budget[ri] += m * c
            if found:
                return True
        return False

    dfs(0, 0)
    return best[0], best[1]


def parse_generators(text: str, r: int) -> List[Tuple[int, ...]]:
    """Matrices as ``r`` binary rows each, separated by blank lines; ``#`` starts a comment."""
    mats: List[Tuple[int, ...]] = []
    block: List[int] = []
    for raw in text.splitlines() + [""]:
        body = raw.split("#", 1)[0].strip()
        if body:
            if len(body) != r:
                raise ValueError(f"generator row {body!r} does not have length {r}")
            block.append(bits_from_str(body))
            continue
        if block:
            if len(block) != r:
                raise ValueError(f"generator with {len(block)} rows, expected {r}")
            if rank(block) != r:
                raise DomainError("singular generator matrix")
            mats.append(tuple(block))
            block = []
    return mats
