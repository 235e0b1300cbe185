from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pglines.gf2geom import (
    DomainError,
    Hyperplane,
    Line,
    apply_matrix,
    bits_from_str,
    bits_to_str,
    chain_subspace,
    enumerate_hyperplanes,
    enumerate_lines,
    enumerate_points,
    invert_matrix,
    line_count,
    line_in_hyperplane,
    rank,
    rref,
    rref_rows,
    span,
    walsh_hadamard,
)


def brute_lines(r):
    """All 2-spaces as frozensets of three points, found by pairing points."""
    out = set()
    for p, q in combinations(range(1, 1 << r), 2):
        out.add(frozenset((p, q, p ^ q)))
    return out


def naive_rank(rows, r):
    """Textbook elimination on explicit 0/1 lists."""
    m = [[(v >> j) & 1 for j in range(r)] for v in rows]
    rk = 0
    for col in range(r):
        piv = next((i for i in range(rk, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        for i in range(len(m)):
            if i != rk and m[i][col]:
                m[i] = [a ^ b for a, b in zip(m[i], m[rk])]
        rk += 1
    return rk


@pytest.mark.parametrize("r,count", [(2, 3), (7, 127), (8, 255)])
def test_point_counts(r, count):
    pts = enumerate_points(r)
    assert len(pts) == count
    assert pts == sorted(pts) and 0 not in pts


@pytest.mark.parametrize("r,count", [(2, 1), (3, 7), (4, 35), (5, 155)])
def test_line_counts_match_pairing(r, count):
    lines = enumerate_lines(r)
    assert len(lines) == count == line_count(r)
    assert {frozenset(l.points) for l in lines} == brute_lines(r)
    assert lines == sorted(lines)


@pytest.mark.parametrize("r", [4, 7, 8])
def test_hyperplane_counts(r):
    hs = enumerate_hyperplanes(r)
    assert len(hs) == 2**r - 1
    for h in hs[:5]:
        assert sum(h.contains_point(p) for p in range(1, 1 << r)) == 2 ** (r - 1) - 1


@pytest.mark.parametrize("bad", [1, 32, 0])
def test_dimension_limits(bad):
    with pytest.raises(DomainError):
        enumerate_points(bad)
    with pytest.raises(DomainError):
        enumerate_hyperplanes(bad)


def test_line_enumeration_limit():
    with pytest.raises(DomainError):
        enumerate_lines(17)


def test_bit_strings_leftmost_is_first_coordinate():
    assert bits_from_str("1000000") == 1
    assert bits_from_str("0000001") == 1 << 6
    assert bits_to_str(5, 4) == "1010"
    with pytest.raises(ValueError):
        bits_from_str("10a")


def test_rref_examples():
    e1, e2 = 1, 2
    sub = rref([e1, e2, e1 ^ e2], 3)
    assert sub.dim == 2 and set(sub.basis) == {e1, e2}
    assert rref([0], 3).dim == 0
    assert rref([1 << i for i in range(7)], 7).dim == 7
    with pytest.raises(DomainError):
        rref([1 << 5], 3)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 127), min_size=1, max_size=9))
def test_rank_matches_textbook(rows):
    assert rank(rows) == naive_rank(rows, 7)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 255), min_size=1, max_size=6), st.data())
def test_rref_canonical_under_row_operations(rows, data):
    basis = rref_rows(rows)
    assert rref_rows(basis) == basis
    shuffled = data.draw(st.permutations(rows))
    assert rref_rows(shuffled) == basis
    i = data.draw(st.integers(0, len(rows) - 1))
    j = data.draw(st.integers(0, len(rows) - 1))
    if i != j:
        mixed = list(rows)
        mixed[i] ^= mixed[j]
        assert rref_rows(mixed) == basis
    # span preserved
    assert set(span(basis)) == set(span(list(rows)))


def test_line_in_hyperplane_examples():
    e1, e2, e3 = 1, 2, 4
    h = Hyperplane(3, e3)
    assert line_in_hyperplane(Line.through(e1, e2, 3), h)
    assert not line_in_hyperplane(Line.through(e1, e3, 3), h)
    with pytest.raises(DomainError):
        line_in_hyperplane(Line.through(e1, e2, 3), Hyperplane(4, e3))


def test_line_meets_hyperplane_in_one_or_three_points():
    for line, h in product(enumerate_lines(4), enumerate_hyperplanes(4)):
        inside = sum(h.contains_point(p) for p in line.points)
        assert inside in (1, 3)
        assert (inside == 3) == line_in_hyperplane(line, h)


@pytest.mark.parametrize("r", range(3, 9))
def test_hyperplanes_through_a_line(r):
    lines = enumerate_lines(r)
    step = max(1, len(lines) // 40)
    for line in lines[::step]:
        assert sum(Hyperplane(r, h).contains_line(line) for h in range(1, 1 << r)) == 2 ** (r - 2) - 1


@pytest.mark.parametrize("r", range(2, 7))
def test_lines_through_a_point(r):
    counts = np.zeros(1 << r, dtype=int)
    for line in enumerate_lines(r):
        for p in line.points:
            counts[p] += 1
    assert set(counts[1:]) == {2 ** (r - 1) - 1}


def test_line_canonical_form():
    for line in enumerate_lines(5):
        a, b, c = line.points
        assert a ^ b == c
        assert Line.through(b, c, 5) == line == Line.through(c, a, 5)
        assert line.low == min(line.points)
    with pytest.raises(DomainError):
        Line.through(3, 3, 4)


def test_chain_subspace():
    s3 = chain_subspace(3, 6)
    assert s3.points() == list(range(1, 8))
    assert chain_subspace(2, 6).is_contained_in(s3)


def test_walsh_hadamard_matches_definition():
    rng = np.random.default_rng(7)
    vals = rng.integers(-5, 6, size=32)
    got = walsh_hadamard(vals)
    want = [sum(int(vals[p]) * (-1) ** bin(p & h).count("1") for p in range(32)) for h in range(32)]
    assert list(got) == want


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 31), min_size=5, max_size=5))
def test_matrix_inverse(rows):
    if rank(rows) < 5:
        with pytest.raises(DomainError):
            invert_matrix(rows, 5)
        return
    inv = invert_matrix(rows, 5)
    for v in range(32):
        assert apply_matrix(inv, apply_matrix(rows, v)) == v
