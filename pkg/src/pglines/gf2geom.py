"""Bit-level GF(2) linear algebra and the projective geometry PG(r-1, 2).

Vectors of F_2^r are plain Python ints: bit ``i`` holds coordinate ``i + 1``.
When a vector is written as a binary string the leftmost character is
coordinate 1, i.e. bit 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple

import numpy as np

MAX_DIM = 31
MAX_LINE_DIM = 16


class DomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


def _check_dim(r: int, lo: int = 2, hi: int = MAX_DIM) -> None:
    if not isinstance(r, int) or not lo <= r <= hi:
        raise DomainError(f"ambient dimension r={r!r} outside [{lo}, {hi}]")


def parity(x: int) -> int:
    return x.bit_count() & 1


def dot(u: int, v: int) -> int:
    """Standard bilinear form over GF(2)."""
    return (u & v).bit_count() & 1


def bits_from_str(text: str) -> int:
    text = text.strip()
    if not text or any(c not in "01" for c in text):
        raise ValueError(f"not a binary string: {text!r}")
    return sum(1 << i for i, c in enumerate(text) if c == "1")


def bits_to_str(v: int, r: int) -> str:
    return "".join("1" if (v >> i) & 1 else "0" for i in range(r))


def rref_rows(rows: Iterable[int]) -> Tuple[int, ...]:
    """Reduced row-echelon basis, rows sorted by decreasing leading bit."""
    basis: List[int] = []
    for v in rows:
        for b in basis:
            if v >> (b.bit_length() - 1) & 1:
                v ^= b
        if v:
            lead = v.bit_length() - 1
            basis = [b ^ v if b >> lead & 1 else b for b in basis]
            basis.append(v)
    basis.sort(reverse=True)
    return tuple(basis)


def rank(rows: Iterable[int]) -> int:
    return len(rref_rows(rows))


def reduce_vector(v: int, basis: Sequence[int]) -> int:
    """Reduce ``v`` modulo the span of an RREF ``basis``."""
    for b in basis:
        if v >> (b.bit_length() - 1) & 1:
            v ^= b
    return v


def span(rows: Sequence[int]) -> List[int]:
    """All vectors of the span, including zero."""
    out = [0]
    for b in rows:
        out += [x ^ b for x in out]
    return out


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_2^r held by its canonical RREF basis."""

    r: int
    basis: Tuple[int, ...]

    @classmethod
    def spanned_by(cls, rows: Iterable[int], r: int) -> "Subspace":
        rows = list(rows)
        for v in rows:
            if v < 0 or v >> r:
                raise DomainError(f"vector {v} does not fit ambient dimension {r}")
        return cls(r, rref_rows(rows))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: int) -> bool:
        return reduce_vector(v, self.basis) == 0

    def points(self) -> List[int]:
        return sorted(span(self.basis)[1:])

    def is_contained_in(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)


def rref(rows: Sequence[int], r: int | None = None) -> Subspace:
    """Canonicalize ``rows``; all rows must fit in ``r`` bits."""
    if r is None:
        r = max((v.bit_length() for v in rows), default=1)
    _check_dim(r, 1)
    return Subspace.spanned_by(rows, r)


@dataclass(frozen=True, order=True)
class Line:
    """A 2-space, keyed by its RREF basis ``(top, low)`` with ``top > low``."""

    r: int
    top: int
    low: int

    @classmethod
    def through(cls, u: int, v: int, r: int) -> "Line":
        basis = rref_rows((u, v))
        if len(basis) != 2:
            raise DomainError(f"vectors {u}, {v} do not span a line")
        if basis[0] >> r:
            raise DomainError(f"vectors {u}, {v} do not fit ambient dimension {r}")
        return cls(r, basis[0], basis[1])

    @property
    def basis(self) -> Tuple[int, int]:
        return (self.top, self.low)

    @property
    def points(self) -> Tuple[int, int, int]:
        return tuple(sorted((self.top, self.low, self.top ^ self.low)))  # type: ignore[return-value]

    def as_subspace(self) -> Subspace:
        return Subspace(self.r, self.basis)

    def rows(self) -> Tuple[str, str]:
        return bits_to_str(self.top, self.r), bits_to_str(self.low, self.r)


@dataclass(frozen=True, order=True)
class Hyperplane:
    """The points orthogonal to the nonzero dual vector ``dual``."""

    r: int
    dual: int

    def contains_point(self, p: int) -> bool:
        return dot(p, self.dual) == 0

    def contains_line(self, line: Line) -> bool:
        return dot(line.top, self.dual) == 0 and dot(line.low, self.dual) == 0


def line_in_hyperplane(line: Line, hyperplane: Hyperplane) -> bool:
    if line.r != hyperplane.r:
        raise DomainError("line and hyperplane live in different ambient spaces")
    return hyperplane.contains_line(line)


def enumerate_points(r: int) -> List[int]:
    _check_dim(r)
    return list(range(1, 1 << r))


def enumerate_hyperplanes(r: int) -> List[Hyperplane]:
    _check_dim(r)
    return [Hyperplane(r, h) for h in range(1, 1 << r)]


def iter_lines(r: int) -> Iterator[Line]:
    """Lines of PG(r-1, 2) in ascending order of ``(top, low)``.

    ``low`` is the smallest point of the line; ``top`` has bit ``lead(low)``
    cleared and a strictly higher leading bit.
    """
    _check_dim(r, 2, MAX_LINE_DIM)
    for top in range(2, 1 << r):
        hi = top.bit_length() - 1
        for low in range(1, 1 << hi):
            if not top >> (low.bit_length() - 1) & 1:
                yield Line(r, top, low)


def enumerate_lines(r: int) -> List[Line]:
    return list(iter_lines(r))


def line_count(r: int) -> int:
    return ((1 << r) - 1) * ((1 << (r - 1)) - 1) // 3


def chain_subspace(i: int, r: int) -> Subspace:
    """The canonical i-space spanned by the first i unit vectors."""
    return Subspace(r, tuple(1 << j for j in reversed(range(i))))


def apply_matrix(rows: Sequence[int], v: int) -> int:
    """Image ``M v`` where ``rows[i]`` is row i of M as a bitmask."""
    out = 0
    for i, row in enumerate(rows):
        if (row & v).bit_count() & 1:
            out |= 1 << i
    return out


def transpose(rows: Sequence[int], r: int) -> Tuple[int, ...]:
    return tuple(sum(((rows[i] >> j) & 1) << i for i in range(len(rows))) for j in range(r))


def invert_matrix(rows: Sequence[int], r: int) -> Tuple[int, ...]:
    """Inverse of an r x r GF(2) matrix; raises DomainError when singular."""
    aug = [(rows[i] & ((1 << r) - 1)) | (1 << (r + i)) for i in range(r)]
    for col in range(r):
        piv = next((i for i in range(col, r) if aug[i] >> col & 1), None)
        if piv is None:
            raise DomainError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        for i in range(r):
            if i != col and aug[i] >> col & 1:
                aug[i] ^= aug[col]
    return tuple(a >> r for a in aug)


def map_line(rows: Sequence[int], line: Line) -> Line:
    return Line.through(apply_matrix(rows, line.top), apply_matrix(rows, line.low), line.r)


def walsh_hadamard(values):
    """Unnormalized Walsh-Hadamard transform of a length-2^r integer vector.

    ``out[h] = sum_p values[p] * (-1)^<p,h>``.
    """
    a = np.array(values, dtype=np.int64)
    n = a.shape[0]
    h = 1
    while h < n:
        a = a.reshape(-1, 2, h)
        a = np.stack((a[:, 0] + a[:, 1], a[:, 0] - a[:, 1]), axis=1)
        h *= 2
    return a.reshape(n)
