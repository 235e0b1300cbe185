"""Upper bounds on n_{r/2}(s), asymptotic formulas, and table assembly."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .bincode import GRIESMER_ONLY, NminTable, griesmer
from .gf2geom import DomainError

OPEN_DASH = "–"


def _data(name: str):
    return resources.files("pglines").joinpath("data", name)


def default_nmin_table() -> NminTable:
    return NminTable.parse(_data("nmin.txt").read_text(), "pglines:data/nmin.txt")


def _check(r: int, s: int) -> None:
    if r <= 2 or s < 1:
        raise DomainError(f"bounds need r > 2 and s >= 1 (got r={r}, s={s})")


def griesmer_scan_limit(r: int, s: int) -> int:
    """No n above this satisfies g(r, 2(n - s)) <= 3n, since g(r, d) >= d (2 - 2^(1-r))."""
    return s * (2**r - 1) // (2 ** (r - 2) - 1)


def griesmer_upper_bound(r: int, s: int) -> int:
    """Largest n with g(r, 2(n - s)) <= 3n."""
    _check(r, s)
    return max(n for n in range(s, griesmer_scan_limit(r, s) + 1) if griesmer(r, 2 * (n - s)) <= 3 * n)


def weak_coding_upper_bound(r: int, s: int, table: Optional[NminTable] = None) -> Tuple[int, bool]:
    """(n, griesmer_limited): ascending scan stopping before the first excluded length.

    ``griesmer_limited`` is True when the stopping exclusion comes from the
    Griesmer bound alone, i.e. the table had nothing sharper to say there.
    """
    _check(r, s)
    table = table or default_nmin_table()
    n = s
    while True:
        n += 1
        d = 2 * (n - s)
        if table.excludes(3 * n, r, d):
            return n - 1, griesmer(r, d) > 3 * n or not table.known(r, d)


@dataclass(frozen=True)
class AsymptoticFormula:
    r: int
    residue: int
    period: int
    n_period: int
    n_i: int

    @property
    def offset(self) -> int:
        return self.n_period - self.n_i

    def value(self, t: int) -> Tuple[int, int]:
        """(s, n) for parameter t."""
        return self.period * t - self.residue, self.n_period * t - self.offset

    def __str__(self) -> str:
        k = str(self.r // 2) if self.r % 2 == 0 else f"{self.r / 2:g}"
        left = f"{self.period}t" + (f"-{self.residue}" if self.residue else "")
        right = f"{self.n_period}t" + (f"-{self.offset}" if self.offset else "")
        return f"n_{{{k}}}({left})={right}"


def periods(r: int) -> Tuple[int, int]:
    """(s-period, n-period) = ((2^(r-2) - 1), (2^r - 1)) / (2^gcd(r,2) - 1)."""
    g = 2 ** gcd(r, 2) - 1
    return (2 ** (r - 2) - 1) // g, (2**r - 1) // g


def asymptotic_formulas(r: int) -> List[AsymptoticFormula]:
    if not 3 <= r <= 16:
        raise DomainError(f"asymptotic formulas need 3 <= r <= 16, got {r}")
    p, big = periods(r)
    return [AsymptoticFormula(r, i, p, big, griesmer_upper_bound(r, p - i)) for i in range(p)]


def lower_bound_closure(seeds: Mapping[int, int], s_max: int) -> List[Optional[int]]:
    """Lower bounds LB[0..s_max] from seeds, unions (LB[a] + LB[b]) and adding a line."""
    lb: List[Optional[int]] = [None] * (s_max + 1)
    for s in range(1, s_max + 1):
        cands = []
        if s in seeds:
            cands.append(seeds[s])
        if s > 1 and lb[s - 1] is not None:
            cands.append(lb[s - 1] + 1)
        for a in range(1, s // 2 + 1):
            if lb[a] is not None and lb[s - a] is not None:
                cands.append(lb[a] + lb[s - a])
        lb[s] = max(cands) if cands else None
    return lb


@dataclass(frozen=True)
class Fact:
    r: int
    s: int
    upper: int
    citation: str


def parse_facts(text: str) -> List[Fact]:
    rows = [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    out = []
    for row in csv.reader(rows):
        if row[0].strip() == "r":
            continue
        if len(row) < 4:
            raise ValueError(f"facts row needs r,s,upper,citation: {row}")
        out.append(Fact(int(row[0]), int(row[1]), int(row[2]), ",".join(row[3:]).strip()))
    return out


def load_facts(path=None) -> List[Fact]:
    text = Path(path).read_text() if path else _data("facts.csv").read_text()
    return parse_facts(text)


def linear_lower_bounds(r: int) -> Dict[int, int]:
    """Lengths reached by quaternary linear codes (packaged for r = 8 only)."""
    if r != 8:
        return {}
    rows = [l for l in _data("linear_r8.csv").read_text().splitlines() if l and not l.startswith("#")]
    return {int(row["s"]): int(row["n"]) for row in csv.DictReader(rows)}


def fixture_seeds(r: int) -> Dict[int, int]:
    """(s_max, n) of every packaged explicit system that verifies as spanning."""
    from .paperdata import datasets, verify_fixture

    out: Dict[int, int] = {}
    for fix in datasets():
        if fix.r != r:
            continue
        res = verify_fixture(fix)
        if res.report is not None and res.report.spanning and not res.code_failures:
            s, n = res.report.s_max, res.report.n
            out[s] = max(out.get(s, 0), n)
    return out


def construction_seeds(r: int, s_values: Iterable[int]) -> Dict[int, int]:
    """Griesmer-attaining (s, n) whose chain type is realized directly (family member t = 0)."""
    from .construct import NotPartitionable, asymptotic_family

    out = {}
    for s in s_values:
        n = griesmer_upper_bound(r, s)
        if n <= s:
            continue
        try:
            fam = asymptotic_family(n, r, s)
            if fam.min_t() == 0:
                out[s] = n
        except (NotPartitionable, DomainError):
            continue
    return out


@dataclass(frozen=True)
class BoundTableRow:
    s: int
    lower: Optional[int]
    lower_source: str
    upper: int
    upper_source: str
    griesmer: int
    weak: int
    citation: str = ""

    @property
    def resolved(self) -> bool:
        return self.lower == self.upper

    @property
    def consistent(self) -> bool:
        return self.lower is None or self.lower <= self.upper

    def cell(self) -> str:
        if self.lower is None:
            return f"?{OPEN_DASH}{self.upper}"
        return str(self.upper) if self.resolved else f"{self.lower}{OPEN_DASH}{self.upper}"

    def as_dict(self) -> dict:
        out = asdict(self)
        out["resolved"] = self.resolved
        return out


def nks_table(
    r: int,
    s_values: Sequence[int],
    seeds: Optional[Mapping[int, Tuple[int, str]]] = None,
    facts: Optional[Sequence[Fact]] = None,
    nmin: Optional[NminTable] = None,
) -> List[BoundTableRow]:
    """Rows of lower/upper bounds for n_{r/2}(s).

    ``seeds`` maps s to (n, source); by default the linear-code lengths, the
    packaged explicit systems and the directly realized chain types.
    """
    s_values = list(s_values)
    s_max = max(s_values)
    if seeds is None:
        seeds = {}
        for source, table in (
            ("linear-fixture", linear_lower_bounds(r)),
            ("construction", construction_seeds(r, range(1, s_max + 1))),
            ("paper-fixture", fixture_seeds(r)),
        ):
            for s, n in table.items():
                if s <= s_max and n > seeds.get(s, (0, ""))[0]:
                    seeds[s] = (n, source)
    facts = load_facts() if facts is None else facts
    nmin = default_nmin_table() if nmin is None else nmin
    lb = lower_bound_closure({s: n for s, (n, _) in seeds.items()}, s_max)
    rows = []
    for s in s_values:
        g = griesmer_upper_bound(r, s)
        w, _ = weak_coding_upper_bound(r, s, nmin)
        upper, source, cite = g, "griesmer", ""
        if w < upper:
            upper, source = w, "weak-coding"
        for fact in facts:
            if (fact.r, fact.s) == (r, s) and fact.upper < upper:
                upper, source, cite = fact.upper, "external-fact", fact.citation
        lower = lb[s]
        if lower is None:
            lsrc = "none"
        elif s in seeds and seeds[s][0] == lower:
            lsrc = seeds[s][1]
        else:
            lsrc = "union-closure"
        rows.append(BoundTableRow(s, lower, lsrc, upper, source, g, w, cite))
    return rows


def format_rows(rows: Sequence[BoundTableRow], fmt: str = "human") -> str:
    if fmt == "json":
        return json.dumps([r.as_dict() for r in rows], indent=1, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        fields = ["s", "lower", "upper", "resolved", "griesmer", "weak", "lower_source", "upper_source", "citation"]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            d = r.as_dict()
            writer.writerow({k: "" if d[k] is None else d[k] for k in fields})
        return buf.getvalue()
    if fmt != "human":
        raise ValueError(f"unknown format {fmt!r}")
    head = f"{'s':>3}  {'n(s)':>9}  {'Griesmer':>8}  {'weak':>5}  lower source / upper source"
    out = [head, "-" * len(head)]
    for r in rows:
        flag = "" if r.resolved else "  open"
        if not r.consistent:
            flag = "  CONFLICT"
        weak = "" if r.weak == r.griesmer else str(r.weak)
        out.append(
            f"{r.s:>3}  {r.cell():>9}  {r.griesmer:>8}  {weak:>5}  {r.lower_source} / {r.upper_source}{flag}"
        )
    return "\n".join(out) + "\n"


def format_formulas(formulas: Sequence[AsymptoticFormula], fmt: str = "human") -> str:
    if fmt == "json":
        data = [
            {"r": f.r, "i": f.residue, "period": f.period, "n_period": f.n_period, "n_i": f.n_i,
             "offset": f.offset, "formula": str(f)}
            for f in formulas
        ]
        return json.dumps(data, indent=1, sort_keys=True) + "\n"
    if fmt == "csv":
        lines = ["r,i,period,n_period,n_i,offset,formula"]
        lines += [f"{f.r},{f.residue},{f.period},{f.n_period},{f.n_i},{f.offset},{f}" for f in formulas]
        return "\n".join(lines) + "\n"
    if fmt != "human":
        raise ValueError(f"unknown format {fmt!r}")
    return "".join(f"{f}  (t large)\n" for f in formulas)


__all__ = [
    "AsymptoticFormula",
    "BoundTableRow",
    "Fact",
    "GRIESMER_ONLY",
    "asymptotic_formulas",
    "default_nmin_table",
    "format_formulas",
    "format_rows",
    "griesmer_upper_bound",
    "load_facts",
    "lower_bound_closure",
    "nks_table",
    "weak_coding_upper_bound",
]
