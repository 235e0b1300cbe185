"""Binary linear codes attached to point multisets, and exact code invariants.

The code of a spanning point multiset in PG(k-1, 2) has one generator column
per point occurrence.  Everything here is exact integer or rational
arithmetic.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .gf2geom import DomainError, rank, rref_rows, walsh_hadamard
from .linesys import LineSystem, PointMultiset, point_expansion, verify_system

MAX_ENUM_DIM = 20


class InvalidDistributionError(ValueError):
    """A weight distribution violates an identity every linear code satisfies."""


# --------------------------------------------------------------------------
# codes


@dataclass(frozen=True)
class BinaryCode:
    """A [n, k] binary code given by k independent generator rows of n bits."""

    n: int
    generator: Tuple[int, ...]

    def __post_init__(self):
        if not self.generator:
            raise DomainError("a code needs at least one generator row")
        if rank(self.generator) != len(self.generator):
            raise DomainError("generator rows are linearly dependent")
        if any(row >> self.n for row in self.generator):
            raise DomainError("generator row longer than n")

    @property
    def k(self) -> int:
        return len(self.generator)

    def columns(self) -> List[int]:
        """Column j as a k-bit integer (bit i = entry of row i)."""
        return [
            sum(((row >> j) & 1) << i for i, row in enumerate(self.generator))
            for j in range(self.n)
        ]

    def column_counts(self) -> np.ndarray:
        if self.k > MAX_ENUM_DIM:
            raise DomainError(f"k={self.k} exceeds enumeration limit {MAX_ENUM_DIM}")
        counts = np.zeros(1 << self.k, dtype=np.int64)
        for c in self.columns():
            counts[c] += 1
        return counts

    def encode(self, message: int) -> int:
        word = 0
        for i, row in enumerate(self.generator):
            if message >> i & 1:
                word ^= row
        return word

    def contains(self, word: int) -> bool:
        return rank(self.generator + (word,)) == self.k


def code_from_columns(columns: Sequence[int], k: int) -> BinaryCode:
    rows = tuple(
        sum(((c >> i) & 1) << j for j, c in enumerate(columns)) for i in range(k)
    )
    return BinaryCode(len(columns), rows)


def code_from_points(points: PointMultiset) -> BinaryCode:
    """One generator column per point occurrence, columns in ascending point order."""
    if points.r > MAX_ENUM_DIM:
        raise DomainError(f"r={points.r} exceeds {MAX_ENUM_DIM}")
    if points.total > 10**6:
        raise DomainError("point multiset too large")
    columns = [p for p, m in sorted(points.counts.items()) for _ in range(m)]
    if rank(columns) < points.r:
        raise DomainError("point multiset is not spanning; the code would lose dimension")
    return code_from_columns(columns, points.r)


# --------------------------------------------------------------------------
# weight distributions


@dataclass(frozen=True)
class WeightDistribution:
    n: int
    k: int
    A: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "A", {w: c for w, c in sorted(self.A.items()) if c})

    @property
    def min_distance(self) -> int:
        return min((w for w in self.A if w > 0), default=0)

    @property
    def max_weight(self) -> int:
        return max(self.A)

    @property
    def divisibility(self) -> int:
        """Largest power of two dividing every weight."""
        g = 0
        for w in self.A:
            g = np.gcd(g, w)
        g = int(g)
        return g & -g if g else 0

    def vector(self) -> List[int]:
        return [self.A.get(i, 0) for i in range(self.n + 1)]


def weight_distribution(code: BinaryCode) -> WeightDistribution:
    """Exact distribution over all 2^k codewords.

    The codeword of message m has weight sum_c count(c) [<m,c> = 1], which is
    (n - W(m)) / 2 for the Walsh-Hadamard transform W of the column counts.
    """
    counts = code.column_counts()
    weights = (code.n - walsh_hadamard(counts)) // 2
    return WeightDistribution(code.n, code.k, Counter(int(w) for w in weights))


def dual_weight_distribution(code: BinaryCode) -> WeightDistribution:
    """Distribution of the dual code by counting column subsets that sum to zero.

    Dynamic program over distinct columns; state = (partial column sum, size).
    Never uses the MacWilliams transform.
    """
    k, n = code.k, code.n
    if k > 12:
        raise DomainError("dual enumeration limited to k <= 12")
    size = 1 << k
    table = [[0] * (n + 1) for _ in range(size)]
    table[0][0] = 1
    used = 0
    for col, mult in sorted(Counter(code.columns()).items()):
        even = [comb(mult, j) if j % 2 == 0 else 0 for j in range(mult + 1)]
        odd = [comb(mult, j) if j % 2 == 1 else 0 for j in range(mult + 1)]
        new = [[0] * (n + 1) for _ in range(size)]
        for syn in range(size):
            row = table[syn]
            if not any(row):
                continue
            for w in range(used + 1):
                x = row[w]
                if not x:
                    continue
                tgt_e, tgt_o = new[syn], new[syn ^ col]
                for j in range(mult + 1):
                    if even[j]:
                        tgt_e[w + j] += x * even[j]
                    elif odd[j]:
                        tgt_o[w + j] += x * odd[j]
        table = new
        used += mult
    return WeightDistribution(n, n - k, {w: c for w, c in enumerate(table[0]) if c})


def griesmer(k: int, d: int) -> int:
    """g(k, d) = sum_{i<k} ceil(d / 2^i)."""
    if k < 1 or d < 0:
        raise DomainError("griesmer needs k >= 1 and d >= 0")
    return sum(-(-d >> i) for i in range(k))


# --------------------------------------------------------------------------
# the system -> code contract


@dataclass(frozen=True)
class CodeContractResult:
    code: BinaryCode
    distribution: WeightDistribution
    n_lines: int
    s_max: int
    failures: Tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def check_code_contract(system: LineSystem) -> CodeContractResult:
    """Build the code of a spanning system and check its promised parameters.

    Expected: length 3n, dimension r, minimum distance exactly 2(n - s),
    all weights even, maximum weight <= 2n, and g(r, 2(n - s)) <= 3n.
    """
    report = verify_system(system)
    if not report.spanning:
        raise DomainError("system is not spanning")
    if system.r <= 2:
        raise DomainError("needs r > 2")
    n, s, r = report.n, report.s_max, system.r
    code = code_from_points(point_expansion(system))
    wd = weight_distribution(code)
    failures = []
    if code.n != 3 * n:
        failures.append(f"length {code.n} != 3n = {3 * n}")
    if code.k != r:
        failures.append(f"dimension {code.k} != r = {r}")
    if wd.min_distance != 2 * (n - s):
        failures.append(f"min distance {wd.min_distance} != 2(n-s) = {2 * (n - s)}")
    if any(w % 2 for w in wd.A):
        failures.append("code is not 2-divisible")
    if wd.max_weight > 2 * n:
        failures.append(f"max weight {wd.max_weight} > 2n = {2 * n}")
    if griesmer(r, 2 * (n - s)) > 3 * n:
        failures.append("Griesmer bound violated")
    return CodeContractResult(code, wd, n, s, tuple(failures))


# --------------------------------------------------------------------------
# residual codes and divisibility


def residual_params(n: int, k: int, d: int, w: int) -> Tuple[int, int, int]:
    """Parameters (n - w, k - 1, lower bound on d) of a residual code."""
    if 2 * d <= w:
        raise DomainError(f"residual bound needs d > w/2 (d={d}, w={w})")
    return n - w, k - 1, d - w // 2


def residual(code: BinaryCode, word: int) -> BinaryCode:
    """Restrict the generator to the zero coordinates of ``word`` and re-rank."""
    if not code.contains(word):
        raise DomainError("word is not a codeword")
    zeros = [j for j in range(code.n) if not word >> j & 1]
    rows = []
    for row in code.generator:
        rows.append(sum(((row >> j) & 1) << t for t, j in enumerate(zeros)))
    return BinaryCode(len(zeros), rref_rows(rows))


def ward_divisibility(n: int, k: int, d: int) -> Optional[int]:
    """2^e with 2^e || d when the code meets the Griesmer bound, else None."""
    if n != griesmer(k, d):
        return None
    return d & -d


# --------------------------------------------------------------------------
# MacWilliams machinery


def krawtchouk(n: int, i: int, j: int) -> int:
    if not (0 <= i <= n and 0 <= j <= n):
        raise DomainError("Krawtchouk index out of range")
    return sum((-1) ** t * comb(n - j, i - t) * comb(j, t) for t in range(i + 1))


def _as_vector(A, n: int) -> List[int]:
    if isinstance(A, WeightDistribution):
        A = A.A
    if isinstance(A, Mapping):
        vec = [0] * (n + 1)
        for w, c in A.items():
            if not 0 <= w <= n:
                raise InvalidDistributionError(f"weight {w} outside [0, {n}]")
            vec[w] = c
        return vec
    vec = list(A)
    return vec + [0] * (n + 1 - len(vec))


def macwilliams_transform(A, n: int, k: int, strict: bool = True) -> Dict[int, Fraction]:
    """B_i = 2^-k sum_j K_i(j) A_j for the dual of a [n, k] code.

    With ``strict`` a negative or non-integral B_i raises
    InvalidDistributionError; otherwise the raw rationals are returned.
    """
    vec = _as_vector(A, n)
    if sum(vec) != 2**k:
        raise InvalidDistributionError(f"distribution sums to {sum(vec)}, not 2^{k}")
    out = {}
    for i in range(n + 1):
        b = Fraction(sum(krawtchouk(n, i, j) * a for j, a in enumerate(vec) if a), 2**k)
        if strict and (b < 0 or b.denominator != 1):
            raise InvalidDistributionError(f"B_{i} = {b} is not a nonnegative integer")
        if b:
            out[i] = b
    return out


def first_identities_check(A, n: int, k: int) -> Tuple[Fraction, Fraction]:
    """Check the first two power-moment identities and solve for (B_2, B_3).

    Assumes B_1 = 0.  Uses
      sum_{i>0} A_i = 2^k - 1,
      sum i A_i = 2^(k-1) n,
      sum i^2 A_i = 2^(k-1) (B_2 + n(n+1)/2),
      sum i^3 A_i = 2^(k-2) (3(B_2 n - B_3) + n^2(n+3)/2).
    """
    vec = _as_vector(A, n)
    if sum(vec[1:]) != 2**k - 1:
        raise InvalidDistributionError(f"sum of A_i (i>0) is {sum(vec[1:])}, not 2^k - 1")
    p1, p2, p3 = (sum(i**m * a for i, a in enumerate(vec)) for m in (1, 2, 3))
    if p1 * 2 != 2**k * n:
        raise InvalidDistributionError(f"sum i A_i = {p1}, expected 2^(k-1) n")
    b2 = Fraction(p2 * 2, 2**k) - Fraction(n * (n + 1), 2)
    b3 = b2 * n - (Fraction(p3 * 4, 2**k) - Fraction(n * n * (n + 3), 2)) / 3
    return b2, b3


# --------------------------------------------------------------------------
# divisible codes: count of codewords divisible by 2 Delta


@dataclass(frozen=True)
class DivisibleCount:
    T: int
    k: int
    a: int
    case1_divisor: int
    case1_ok: bool
    case: int  # 1: middle range only, 2: T small, 3: T large
    t: Optional[int]
    shape_ok: bool
    subcode: Optional[Tuple[Optional[int], int, int]]  # (length, dim, delta)

    @property
    def admissible(self) -> bool:
        return self.case1_ok and self.shape_ok


def divisible_count_check(A, k: int, a: int, n: Optional[int] = None) -> DivisibleCount:
    """Constraints on T = #codewords with weight divisible by 2^(a+1).

    The code must have all weights divisible by Delta = 2^a.
    """
    dist = A.A if isinstance(A, WeightDistribution) else dict(A)
    if n is None and isinstance(A, WeightDistribution):
        n = A.n
    delta = 2**a
    bad = [w for w, c in dist.items() if c and w % delta]
    if bad:
        raise DomainError(f"weights {bad} not divisible by {delta}")
    T = sum(c for w, c in dist.items() if w % (2 * delta) == 0)
    divisor = 2 ** ((k - 1) // (a + 1))
    alpha = min(k - a - 1, a + 1)
    beta = (k - a + 1) // 2
    tmax = max(alpha, beta)
    even = [w for w, c in dist.items() if c and w > 0 and w % (2 * delta) == 0]
    dmin = min(even) if even else 0
    t = None
    sub = None
    shape_ok = True
    if T < 2 ** (k - a):
        case = 2
        gap = 2 ** (k - a) - T
        shape_ok = gap > 0 and gap & (gap - 1) == 0
        if shape_ok:
            t = (k - a) - (gap.bit_length() - 1)
            shape_ok = 1 <= t <= tmax
            dim = k - a - 2 if t > beta else k - a - t
            sub = (n, dim, dmin)
    elif T > 2**k - 2 ** (k - a):
        case = 3
        gap = T - (2**k - 2 ** (k - a))
        shape_ok = gap & (gap - 1) == 0
        if shape_ok:
            t = (k - a) - (gap.bit_length() - 1)
            shape_ok = 0 <= t <= tmax
            if a == 1:
                dim = k - t
            elif t == a + 1 <= k - a - 1:
                dim = k - 2
            else:
                dim = k - 1
            sub = (n, dim, dmin)
    else:
        case = 1
    return DivisibleCount(T, k, a, divisor, T % divisor == 0, case, t, shape_ok, sub)


# --------------------------------------------------------------------------
# minimal-length oracle and constraint profiles


class NminTable:
    """Known lower bounds on the minimal length n(k, d) of binary codes.

    An entry ``k,d,n_min`` asserts that no [n, k, d]_2 code exists for
    n < n_min.  Missing entries fall back to the Griesmer bound.
    """

    def __init__(self, entries: Optional[Mapping[Tuple[int, int], int]] = None, source: str = ""):
        self.entries: Dict[Tuple[int, int], int] = dict(entries or {})
        self.source = source

    @classmethod
    def parse(cls, text: str, source: str = "") -> "NminTable":
        entries = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            body = raw.split("#", 1)[0].strip()
            if not body:
                continue
            try:
                k, d, nmin = (int(x) for x in body.split(","))
            except ValueError:
                raise ValueError(f"{source or 'table'}:{lineno}: expected 'k,d,n_min': {raw!r}")
            entries[(k, d)] = max(nmin, entries.get((k, d), 0))
        return cls(entries, source)

    @classmethod
    def load(cls, path) -> "NminTable":
        path = Path(path)
        return cls.parse(path.read_text(), str(path))

    def known(self, k: int, d: int) -> bool:
        return (k, d) in self.entries

    def min_length(self, k: int, d: int) -> int:
        return max(griesmer(k, d), self.entries.get((k, d), 0))

    def excludes(self, n: int, k: int, d: int) -> bool:
        return n < self.min_length(k, d)


GRIESMER_ONLY = NminTable(source="griesmer")


@dataclass(frozen=True)
class CodeConstraintProfile:
    n_lines: int
    r: int
    s: int
    length: int
    dimension: int
    min_dist: int
    max_weight: int
    divisibility: int
    candidate_weights: Tuple[int, ...]
    excluded_weights: FrozenSet[int]
    max_point_multiplicity: int
    min_point_multiplicity: int
    notes: Mapping[str, str] = field(default_factory=dict)

    @property
    def point_multiplicity_exact(self) -> Optional[int]:
        if self.max_point_multiplicity == self.min_point_multiplicity:
            return self.max_point_multiplicity
        return None

    def summary(self) -> str:
        parts = [
            f"{self.divisibility}-divisible [{self.length},{self.dimension},{self.min_dist}]_2",
            f"max weight {self.max_weight}",
        ]
        ex = sorted(self.excluded_weights)
        parts.append("excluded weights {" + ",".join(map(str, ex)) + "}" if ex else "no excluded weights")
        exact = self.point_multiplicity_exact
        if exact is not None:
            parts.append(f"point multiplicity exactly {exact}")
        else:
            parts.append(
                f"point multiplicity in [{self.min_point_multiplicity},{self.max_point_multiplicity}]"
            )
        return ", ".join(parts)

    def as_dict(self) -> dict:
        return {
            "n": self.n_lines,
            "r": self.r,
            "s": self.s,
            "length": self.length,
            "dimension": self.dimension,
            "min_dist": self.min_dist,
            "max_weight": self.max_weight,
            "divisibility": self.divisibility,
            "candidate_weights": list(self.candidate_weights),
            "excluded_weights": sorted(self.excluded_weights),
            "max_point_multiplicity": self.max_point_multiplicity,
            "min_point_multiplicity": self.min_point_multiplicity,
            "notes": dict(self.notes),
        }


def derive_constraints(n: int, r: int, s: int, oracle: Optional[NminTable] = None) -> CodeConstraintProfile:
    """Parameter sheet of the binary code a hypothetical (n, r, s) system would induce."""
    if r <= 2 or n <= s:
        raise DomainError("needs r > 2 and n > s")
    oracle = oracle or GRIESMER_ONLY
    length, d = 3 * n, 2 * (n - s)
    notes = {
        "length": "point-count: 3 points per line",
        "min_dist": "hyperplane with s lines has weight 2(n-s)",
        "max_weight": "every hyperplane meets each line; weight <= 2n",
    }
    ward = ward_divisibility(length, r, d)
    if ward is not None and ward > 2:
        delta = ward
        notes["divisibility"] = f"Ward: length equals g({r},{d}) = {length}"
    else:
        delta = 2
        notes["divisibility"] = "even: weights are 2(n - i)"
    max_w = (2 * n) // delta * delta
    cands = tuple(w for w in range(d, max_w + 1, delta))
    excluded = set()
    for w in cands:
        if 2 * d <= w:
            continue
        rn, rk, rd = residual_params(length, r, d, w)
        if oracle.excludes(rn, rk, rd):
            excluded.add(w)
    tag = "Griesmer-residual" if not oracle.entries else "Griesmer-residual + external-table"
    notes["excluded_weights"] = tag
    # a point of multiplicity m leaves a [3n - m, r - 1, >= d] code after projection
    cap = length - oracle.min_length(r - 1, d)
    floor = -(-length // ((1 << r) - 1))
    notes["max_point_multiplicity"] = f"projection from a point needs a [{length}-m,{r - 1},{d}] code"
    notes["min_point_multiplicity"] = f"{length} columns over {(1 << r) - 1} points"
    return CodeConstraintProfile(
        n_lines=n,
        r=r,
        s=s,
        length=length,
        dimension=r,
        min_dist=d,
        max_weight=max_w,
        divisibility=delta,
        candidate_weights=cands,
        excluded_weights=frozenset(excluded),
        max_point_multiplicity=cap,
        min_point_multiplicity=floor,
        notes=notes,
    )
