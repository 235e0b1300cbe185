"""Multisets of lines in PG(r-1, 2) and their hyperplane statistics.

An (n, r, s) system is a multiset of n lines such that every hyperplane
contains at most s of them and some hyperplane contains exactly s.

Text format (read and written by :func:`parse_system` / :func:`format_system`)::

    # comment
    r=7
    1100000/0010000
    0100100 0010101

Each entry holds the two rows of a 2 x r generator matrix; the leftmost
character of a row is coordinate 1.  Repeated entries add multiplicity.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from .gf2geom import (
    DomainError,
    Hyperplane,
    Line,
    bits_from_str,
    rank,
    walsh_hadamard,
)


class SystemParseError(ValueError):
    pass


class DegenerateGeneratorError(SystemParseError):
    def __init__(self, index: int, entry: str):
        super().__init__(f"entry {index}: degenerate generator {entry!r} has rank < 2")
        self.index = index
        self.entry = entry


@dataclass(frozen=True)
class LineSystem:
    r: int
    lines: Mapping[Line, int]

    def __post_init__(self):
        if not 2 <= self.r <= 20:
            raise DomainError(f"ambient dimension r={self.r} outside [2, 20]")
        for line, mult in self.lines.items():
            if line.r != self.r:
                raise DomainError(f"{line} does not live in PG({self.r - 1},2)")
            if mult < 1:
                raise ValueError(f"non-positive multiplicity {mult} for {line}")
        if not self.lines:
            raise ValueError("a line system needs at least one line")
        object.__setattr__(self, "lines", dict(sorted(self.lines.items())))

    @classmethod
    def from_lines(cls, lines: Iterable[Line], r: Optional[int] = None) -> "LineSystem":
        counts = Counter(lines)
        if r is None:
            r = next(iter(counts)).r
        return cls(r, counts)

    @property
    def n(self) -> int:
        return sum(self.lines.values())

    def __len__(self) -> int:
        return self.n

    def items(self):
        return self.lines.items()

    def multiplicity(self, line: Line) -> int:
        return self.lines.get(line, 0)

    def expanded(self) -> List[Line]:
        """Lines listed with repetition, in canonical order."""
        return [line for line, m in self.lines.items() for _ in range(m)]

    def is_spanning_by_rank(self) -> bool:
        return rank(v for line in self.lines for v in line.basis) == self.r


@dataclass(frozen=True)
class PointMultiset:
    r: int
    counts: Mapping[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def max_multiplicity(self) -> int:
        return max(self.counts.values(), default=0)

    def as_array(self) -> np.ndarray:
        arr = np.zeros(1 << self.r, dtype=np.int64)
        for p, m in self.counts.items():
            arr[p] = m
        return arr

    def hyperplane_point_counts(self) -> np.ndarray:
        """Entry h: total multiplicity of points orthogonal to h (entry 0 unused)."""
        arr = self.as_array()
        return (arr.sum() + walsh_hadamard(arr)) // 2


@dataclass(frozen=True)
class SystemReport:
    n: int
    r: int
    s_max: int
    spanning: bool
    achieving_hyperplanes: int
    max_point_multiplicity: int
    expected_n: Optional[int] = None
    expected_s: Optional[int] = None
    mismatches: Tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "n": self.n,
            "s_max": self.s_max,
            "spanning": self.spanning,
            "achieving_hyperplanes": self.achieving_hyperplanes,
            "max_point_multiplicity": self.max_point_multiplicity,
            "expected_n": self.expected_n,
            "expected_s": self.expected_s,
            "passed": self.passed,
            "mismatches": list(self.mismatches),
        }


def _split_entry(entry: str) -> Tuple[str, str]:
    parts = entry.replace("/", " ").split()
    if len(parts) != 2:
        raise SystemParseError(f"expected two rows, got {entry!r}")
    return parts[0], parts[1]


def parse_system(text: str, r: Optional[int] = None) -> LineSystem:
    """Parse the text format; ``r`` may come from the argument or an ``r=`` header."""
    entries: List[Tuple[int, str]] = []
    header_r = None
    for raw in text.splitlines():
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if body.lower().startswith("r="):
            header_r = int(body[2:])
            continue
        entries.append((len(entries), body))
    if r is None:
        r = header_r
    elif header_r is not None and header_r != r:
        raise SystemParseError(f"header says r={header_r} but r={r} was requested")
    if r is None:
        raise SystemParseError("ambient dimension unknown: no r= header and no r argument")
    lines: Counter = Counter()
    for idx, entry in entries:
        a, b = _split_entry(entry)
        if len(a) != r or len(b) != r:
            raise SystemParseError(f"entry {idx}: rows must have length {r}: {entry!r}")
        u, v = bits_from_str(a), bits_from_str(b)
        if rank((u, v)) < 2:
            raise DegenerateGeneratorError(idx, entry)
        lines[Line.through(u, v, r)] += 1
    if not lines:
        raise SystemParseError("no entries")
    return LineSystem(r, lines)


def format_system(system: LineSystem, header: str | None = None) -> str:
    out = []
    if header:
        out += [f"# {h}" for h in header.splitlines()]
    out.append(f"r={system.r}")
    for line in system.expanded():
        a, b = line.rows()
        out.append(f"{a}/{b}")
    return "\n".join(out) + "\n"


def point_expansion(system: LineSystem) -> PointMultiset:
    counts: Counter = Counter()
    for line, m in system.items():
        for p in line.points:
            counts[p] += m
    return PointMultiset(system.r, dict(sorted(counts.items())))


def hyperplane_count_array(system: LineSystem) -> np.ndarray:
    """Line counts per hyperplane dual vector (index 0 unused, set to -1).

    A line lies in H iff all three of its points do, so
    pointcount(H) = n + 2 * linecount(H).
    """
    pc = point_expansion(system).hyperplane_point_counts()
    counts = (pc - system.n) // 2
    counts[0] = -1
    return counts


def hyperplane_counts(system: LineSystem) -> List[Tuple[Hyperplane, int]]:
    if system.r > 16:
        raise DomainError("hyperplane enumeration limited to r <= 16")
    counts = hyperplane_count_array(system)
    return [(Hyperplane(system.r, h), int(counts[h])) for h in range(1, 1 << system.r)]


def verify_system(
    system: LineSystem,
    expected_n: Optional[int] = None,
    expected_s: Optional[int] = None,
) -> SystemReport:
    """Compute the report; mismatches against expectations are listed, not raised."""
    counts = hyperplane_count_array(system)[1:]
    s_max = int(counts.max())
    n = system.n
    spanning = system.is_spanning_by_rank()
    mismatches = []
    if spanning != (s_max < n):
        mismatches.append(f"rank spanning={spanning} disagrees with s_max<n ({s_max}<{n})")
    if expected_n is not None and n != expected_n:
        mismatches.append(f"n={n}, expected {expected_n}")
    if expected_s is not None and s_max != expected_s:
        mismatches.append(f"s_max={s_max}, expected {expected_s}")
    if (expected_n is not None or expected_s is not None) and not spanning:
        mismatches.append("system is not spanning")
    return SystemReport(
        n=n,
        r=system.r,
        s_max=s_max,
        spanning=spanning,
        achieving_hyperplanes=int((counts == s_max).sum()),
        max_point_multiplicity=point_expansion(system).max_multiplicity,
        expected_n=expected_n,
        expected_s=expected_s,
        mismatches=tuple(mismatches),
    )


def union(first: LineSystem, second: LineSystem) -> LineSystem:
    if first.r != second.r:
        raise DomainError(f"cannot unite systems in r={first.r} and r={second.r}")
    merged: Dict[Line, int] = Counter(first.lines)
    merged.update(second.lines)
    return LineSystem(first.r, merged)


def add_line(system: LineSystem, line: Line) -> LineSystem:
    if line.r != system.r:
        raise DomainError("line lives in a different ambient space")
    merged = Counter(system.lines)
    merged[line] += 1
    return LineSystem(system.r, merged)


def scale(system: LineSystem, factor: int) -> LineSystem:
    if factor < 1:
        raise ValueError("factor must be positive")
    return LineSystem(system.r, {line: m * factor for line, m in system.items()})
