import csv
import io
import json
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pglines.bincode import GRIESMER_ONLY, NminTable, griesmer
from pglines.bounds import (
    OPEN_DASH,
    asymptotic_formulas,
    default_nmin_table,
    format_formulas,
    format_rows,
    griesmer_upper_bound,
    linear_lower_bounds,
    load_facts,
    lower_bound_closure,
    nks_table,
    parse_facts,
    periods,
    weak_coding_upper_bound,
)
from pglines.gf2geom import DomainError


def naive_griesmer_upper(r, s):
    """Scan far past the analytic limit; the last admissible n wins."""
    return max(n for n in range(s, 8 * s + 20) if griesmer(r, 2 * (n - s)) <= 3 * n)


def naive_closure(seeds, s):
    """Best sum over all ways to split s into seeded parts plus single added lines."""

    @lru_cache(maxsize=None)
    def best(t):
        if t == 0:
            return 0
        out = None
        for part in range(1, t + 1):
            rest = best(t - part)
            if rest is None:
                continue
            gains = [seeds[part]] if part in seeds else []
            if part == 1 and t - part >= 1:
                gains.append(1)
            for g in gains:
                out = rest + g if out is None else max(out, rest + g)
        return out

    return best(s)


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 9), st.integers(1, 60))
def test_griesmer_upper_bound_matches_long_scan(r, s):
    assert griesmer_upper_bound(r, s) == naive_griesmer_upper(r, s)


def test_griesmer_upper_bound_domain():
    with pytest.raises(DomainError):
        griesmer_upper_bound(2, 3)
    with pytest.raises(DomainError):
        griesmer_upper_bound(8, 0)


def test_weak_bound_without_table_is_griesmer():
    for s in range(3, 30):
        n, limited = weak_coding_upper_bound(8, s, GRIESMER_ONLY)
        assert n == griesmer_upper_bound(8, s) and limited


def test_weak_bound_uses_table():
    table = NminTable({(8, 10): 25})
    n, limited = weak_coding_upper_bound(8, 3, table)
    assert n == 7 and not limited
    # an exclusion above the Griesmer limit changes nothing
    n, _ = weak_coding_upper_bound(8, 3, NminTable({(8, 20): 60}))
    assert n == 9


@pytest.mark.parametrize("r", range(3, 11))
def test_periods(r):
    p, big = periods(r)
    step = 3 if r % 2 == 0 else 1
    assert (p, big) == ((2 ** (r - 2) - 1) // step, (2**r - 1) // step)


@pytest.mark.parametrize("r", [5, 6, 7, 8])
def test_formula_offsets_are_griesmer_values(r):
    fs = asymptotic_formulas(r)
    p, big = periods(r)
    assert len(fs) == p
    for f in fs:
        for t in (1, 2, 5):
            s, n = f.value(t)
            if s >= 1:
                assert n == naive_griesmer_upper(r, s)


def test_formula_text():
    f = asymptotic_formulas(8)[18]
    assert str(f) == "n_{4}(21t-18)=85t-76"
    assert str(asymptotic_formulas(7)[0]) == "n_{3.5}(31t)=127t"
    with pytest.raises(DomainError):
        asymptotic_formulas(17)


def test_formula_formats():
    fs = asymptotic_formulas(6)
    data = json.loads(format_formulas(fs, "json"))
    assert [d["offset"] for d in data] == [f.offset for f in fs]
    rows = list(csv.DictReader(io.StringIO(format_formulas(fs, "csv"))))
    assert len(rows) == len(fs)
    assert format_formulas(fs).count("\n") == len(fs)
    with pytest.raises(ValueError):
        format_formulas(fs, "xml")


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.integers(1, 12), st.integers(1, 60), max_size=5), st.integers(1, 14))
def test_closure_matches_partition_search(seeds, s_max):
    lb = lower_bound_closure(seeds, s_max)
    for s in range(1, s_max + 1):
        assert lb[s] == naive_closure(seeds, s)


def test_closure_examples():
    lb = lower_bound_closure({3: 7}, 6)
    assert lb[3] == 7 and lb[4] == 8 and lb[6] == 14
    assert lb[1] is None and lb[2] is None


def test_facts_parse():
    facts = parse_facts('r,s,upper,citation\n# note\n8,15,56,"a, b"\n7,3,7,x\n')
    assert [(f.r, f.s, f.upper) for f in facts] == [(8, 15, 56), (7, 3, 7)]
    assert facts[0].citation == "a, b"
    with pytest.raises(ValueError):
        parse_facts("8,15\n")
    assert any((f.r, f.s) == (8, 15) for f in load_facts())


def test_linear_lower_bounds():
    lin = linear_lower_bounds(8)
    assert min(lin) == 3 and max(lin) == 60
    assert linear_lower_bounds(7) == {}


def test_default_table_entries():
    t = default_nmin_table()
    assert t.min_length(8, 10) == 25
    assert all(k in (7, 8) for k, _ in t.entries)


R8_TABLE = {
    3: "5", 4: "10", 5: "17", 6: "18", 7: "23", 8: "28", 9: "33", 10: "36",
    11: "40", 12: "44", 13: "49", 14: "54", 15: f"55{OPEN_DASH}56",
    28: f"108{OPEN_DASH}110", 29: f"113{OPEN_DASH}115",
}


def test_nks_table_r8():
    rows = nks_table(8, sorted(R8_TABLE))
    assert {r.s: r.cell() for r in rows} == R8_TABLE
    assert all(r.consistent for r in rows)
    by_s = {r.s: r for r in rows}
    assert by_s[15].upper_source == "external-fact"
    assert by_s[6].upper_source == "weak-coding"


def test_nks_table_custom_seeds_and_formats():
    rows = nks_table(8, [3, 6], seeds={3: (5, "x")}, facts=[], nmin=GRIESMER_ONLY)
    assert [r.lower for r in rows] == [5, 10]
    assert [r.lower_source for r in rows] == ["x", "union-closure"]
    assert [r.upper for r in rows] == [9, 22]
    text = format_rows(rows)
    assert "open" in text
    data = json.loads(format_rows(rows, "json"))
    assert data[0]["resolved"] is False
    assert format_rows(rows, "csv").splitlines()[0].startswith("s,lower,upper")
    with pytest.raises(ValueError):
        format_rows(rows, "yaml")


def test_nks_table_unknown_lower():
    rows = nks_table(8, [1], seeds={}, facts=[], nmin=GRIESMER_ONLY)
    assert rows[0].lower is None and rows[0].cell().startswith("?")
