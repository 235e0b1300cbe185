"""Constructions of line systems: spreads, vector space partitions, partition types.

Partition types ``sigma[r] - sum eps_i [i]`` always refer to the canonical
chain S_i = span(e_1, ..., e_i), i.e. the low ``i`` bits.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .bincode import griesmer
from .gf2geom import DomainError, Line, Subspace, enumerate_lines, iter_lines
from .linesys import LineSystem, hyperplane_count_array, point_expansion, verify_system


class NotPartitionable(ValueError):
    """The requested partition type violates a necessary condition."""


# --------------------------------------------------------------------------
# GF(2^m)


def _poly_mod(a: int, b: int) -> int:
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


@lru_cache(maxsize=None)
def least_irreducible(m: int) -> int:
    """Lexicographically least irreducible polynomial of degree m over GF(2)."""
    if not 1 <= m <= 20:
        raise DomainError(f"field degree {m} outside [1, 20]")
    for f in range(1 << m, 1 << (m + 1)):
        if all(_poly_mod(f, g) for g in range(2, 1 << (m // 2 + 1))):
            return f
    raise AssertionError("unreachable")


def gf_mul(a: int, b: int, m: int) -> int:
    poly = least_irreducible(m)
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> m:
            a ^= poly
    return out


# --------------------------------------------------------------------------
# helpers on bit layouts


def _reverse_bits(v: int, r: int) -> int:
    return int(format(v, f"0{r}b")[::-1], 2)


def _counter_sub(big: Counter, small: Counter, times: int = 1) -> None:
    for line, m in small.items():
        big[line] -= m * times
        if big[line] < 0:
            raise AssertionError("multiset subtraction went negative")
        if big[line] == 0:
            del big[line]


# --------------------------------------------------------------------------
# spreads and vector space partitions


@dataclass(frozen=True)
class VectorSpacePartition:
    r: int
    members: Tuple[Subspace, ...]

    def type_signature(self) -> Dict[int, int]:
        return dict(sorted(Counter(m.dim for m in self.members).items()))

    def lines(self) -> List[Line]:
        return [Line(self.r, *m.basis) for m in self.members if m.dim == 2]

    def coverage(self) -> Counter:
        cov: Counter = Counter()
        for m in self.members:
            cov.update(m.points())
        return cov

    def is_partition(self) -> bool:
        cov = self.coverage()
        return len(cov) == (1 << self.r) - 1 and set(cov.values()) == {1}


def _gf4_scalar(p: int) -> int:
    """The map (a, b) -> (b, a + b) on every coordinate pair; satisfies T^2 + T + 1 = 0."""
    even = 0x5555_5555
    a = p & even
    b = (p >> 1) & even
    return b | ((a ^ b) << 1)


def spread_lines(r: int, ambient: Optional[int] = None) -> List[Line]:
    """Desarguesian line spread of the low-``r``-bit subspace."""
    if r % 2 or r < 2:
        raise DomainError(f"line spreads need even r >= 2, got {r}")
    ambient = ambient or r
    seen = set()
    out = []
    for p in range(1, 1 << r):
        if p in seen:
            continue
        q = _gf4_scalar(p)
        seen.update((p, q, p ^ q))
        out.append(Line.through(p, q, ambient))
    return sorted(out)


def line_spread(r: int) -> LineSystem:
    if r % 2 or not 4 <= r <= 16:
        raise DomainError(f"line_spread needs even r in [4, 16], got {r}")
    return LineSystem.from_lines(spread_lines(r), r)


def mrd_lifted_partition(r: int) -> VectorSpacePartition:
    """2^(r-2) lines from a lifted MRD code plus the (r-2)-space on bits 2..r-1.

    Line for x in GF(2^(r-2)) has generator rows (1, 0 | x) and (0, 1 | g x)
    with g the class of the indeterminate; distinct x give rank-2 differences.
    """
    if not 4 < r <= 16:
        raise DomainError(f"mrd_lifted_partition needs 4 < r <= 16, got {r}")
    m = r - 2
    members = [Subspace.spanned_by((1 | (x << 2), 2 | (gf_mul(2, x, m) << 2)), r) for x in range(1 << m)]
    members.append(Subspace.spanned_by((1 << i for i in range(2, r)), r))
    return VectorSpacePartition(r, tuple(members))


def _vsp_tail(r: int, a: int) -> Tuple[List[Tuple[int, int]], int]:
    """Line bases of a 2^t a^1 partition whose a-space is the top ``a`` bits."""
    vsp = mrd_lifted_partition(r)
    lines = [m.basis for m in vsp.members if m.dim == 2]
    if a == r - 2:
        return lines, a
    sub, _ = _vsp_tail(r - 2, a)
    lines += [(u << 2, v << 2) for u, v in sub]
    return lines, a


def vsp_2a(r: int, a: int, chain_aligned: bool = False) -> VectorSpacePartition:
    """Vector space partition of type 2^t a^1 with t = 2^a (2^(r-a) - 1) / 3.

    By default the a-space is spanned by the top ``a`` coordinates; with
    ``chain_aligned`` coordinates are reversed so that it is S_a.
    """
    if not (r > a > 2) or (r - a) % 2 or r > 16:
        raise DomainError(f"vsp_2a needs r > a > 2, r = a mod 2, r <= 16 (got r={r}, a={a})")
    bases, _ = _vsp_tail(r, a)
    top_a = [1 << i for i in range(r - a, r)]
    if chain_aligned:
        bases = [(_reverse_bits(u, r), _reverse_bits(v, r)) for u, v in bases]
        top_a = [1 << i for i in range(a)]
    members = [Subspace.spanned_by(b, r) for b in bases]
    members.append(Subspace.spanned_by(top_a, r))
    return VectorSpacePartition(r, tuple(members))


@dataclass(frozen=True)
class PartialSpreadSystem:
    system: LineSystem
    s: int
    s_on_a: int
    a_space: Subspace
    s_observed: int
    s_on_a_observed: Tuple[int, ...]


def partial_spread_system(r: int, a: int) -> PartialSpreadSystem:
    """Lines of a 2^t a^1 partition; hyperplanes through the a-space hold fewer lines."""
    vsp = vsp_2a(r, a)
    system = LineSystem.from_lines(vsp.lines(), r)
    s = 2 ** (a - 2) * (2 ** (r - a) - 1) // 3
    a_space = next(m for m in vsp.members if m.dim == a)
    counts = hyperplane_count_array(system)
    through_a = [
        int(counts[h]) for h in range(1, 1 << r) if all((h & b).bit_count() % 2 == 0 for b in a_space.basis)
    ]
    return PartialSpreadSystem(
        system, s, s - 2 ** (a - 2), a_space, int(counts[1:].max()), tuple(sorted(set(through_a)))
    )


# --------------------------------------------------------------------------
# partition types


_TERM = re.compile(r"\s*([+-]?)\s*(\*|\d*)\s*\[\s*(\d+)\s*\]")


@dataclass(frozen=True)
class PartitionType:
    """sigma[r] - sum_i eps_i [i]; ``sigma`` None means unspecified (STAR).

    ``eps`` holds eps_1 .. eps_{r-1}.
    """

    r: int
    sigma: Optional[int]
    eps: Tuple[int, ...]

    def __post_init__(self):
        if self.r < 2:
            raise DomainError("r must be at least 2")
        eps = tuple(self.eps) + (0,) * (self.r - 1 - len(self.eps))
        if len(eps) != self.r - 1:
            raise DomainError(f"expected {self.r - 1} eps values, got {len(self.eps)}")
        object.__setattr__(self, "eps", eps)

    def eps_of(self, i: int) -> int:
        return self.eps[i - 1]

    @classmethod
    def parse(cls, text: str) -> "PartitionType":
        pos = 0
        terms = []
        text = text.strip()
        while pos < len(text):
            m = _TERM.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse partition type at {text[pos:]!r}")
            terms.append(m.groups())
            pos = m.end()
        if not terms or terms[0][0] == "-":
            raise ValueError(f"type must start with the ambient term: {text!r}")
        sign0, coef0, r = terms[0]
        r = int(r)
        sigma = None if coef0 == "*" else int(coef0 or 1)
        eps = [0] * (r - 1)
        for sign, coef, dim in terms[1:]:
            dim = int(dim)
            if coef == "*":
                raise ValueError("only the ambient term may be '*'")
            if not 1 <= dim < r:
                raise ValueError(f"subspace dimension {dim} outside [1, {r - 1}]")
            value = int(coef or 1)
            eps[dim - 1] += value if sign == "-" else -value
        return cls(r, sigma, tuple(eps))

    def __str__(self) -> str:
        head = "*" if self.sigma is None else str(self.sigma)
        out = f"{head}[{self.r}]"
        for i in range(self.r - 1, 0, -1):
            e = self.eps[i - 1]
            if e:
                out += f"{'-' if e > 0 else '+'}{abs(e)}[{i}]"
        return out

    def with_sigma(self, sigma: int) -> "PartitionType":
        return PartitionType(self.r, sigma, self.eps)

    def multiplicity(self, point: int) -> int:
        """sigma - sum_{i: point in S_i} eps_i."""
        if self.sigma is None:
            raise ValueError("STAR type has no concrete multiplicity")
        lead = point.bit_length()  # point lies in S_i iff i >= lead
        return self.sigma - sum(self.eps[i - 1] for i in range(max(lead, 1), self.r))


@dataclass(frozen=True)
class TypeParameters:
    n: int
    s: int
    s_profile: Tuple[int, ...]  # s_1 .. s_r


def _type_counts(ptype: PartitionType) -> Tuple[int, List[int]]:
    """(n, [s_1..s_r]) from the counting formulas; only integrality is checked."""
    if ptype.sigma is None:
        raise ValueError("type_parameters needs a concrete sigma")
    r, sigma, eps = ptype.r, ptype.sigma, ptype.eps
    if eps[0] % 2:
        raise NotPartitionable(f"eps_1 = {eps[0]} must be even")
    points = sigma * (2**r - 1) - sum(e * (2**i - 1) for i, e in enumerate(eps, 1))
    if points % 3:
        raise NotPartitionable(
            f"sum eps_i (2^i - 1) = {sigma * (2**r - 1) - points} is not congruent to "
            f"sigma (2^r - 1) = {sigma * (2**r - 1)} mod 3"
        )
    s1 = (
        Fraction(sigma * (2 ** (r - 2) - 1))
        - sum(e * (2 ** (i - 2) - 1) for i, e in enumerate(eps[1:], 2))
        + Fraction(eps[0], 2)
    ) / 3
    profile = [s1 - sum(Fraction(eps[i - 1] * 2**i, 4) for i in range(1, j)) for j in range(1, r + 1)]
    if any(x.denominator != 1 for x in profile):
        raise NotPartitionable(f"non-integral hyperplane counts {profile}")
    return points // 3, [int(x) for x in profile]


def type_parameters(ptype: PartitionType) -> TypeParameters:
    """Line count and hyperplane statistics implied by a concrete type."""
    n, profile = _type_counts(ptype)
    if n < 1 or min(profile) < 0:
        raise NotPartitionable(f"type gives n={n}, hyperplane counts {profile}")
    return TypeParameters(n, max(profile), tuple(profile))


def sigma_step(r: int) -> int:
    """Increment of sigma between realizable types with equal eps: 1 (even r), 3 (odd r)."""
    return 3 // (2 ** gcd(r, 2) - 1)


def packing_ok(r: int, eps: Sequence[int]) -> bool:
    """sum_{i>=2} eps_i (2^i - 1) = 0 mod 2^gcd(r,2) - 1; ``eps`` indexed from eps_1."""
    mod = 2 ** gcd(r, 2) - 1
    return sum(e * (2**i - 1) for i, e in enumerate(eps, 1) if i >= 2) % mod == 0


# --------------------------------------------------------------------------
# realization of types on the canonical chain


def _cover_multiplicity(i: int) -> int:
    return 1 if i % 2 == 0 else 3


@lru_cache(maxsize=None)
def _cover(i: int) -> Tuple[Tuple[int, int, int], ...]:
    """Lines of S_i covering each point of S_i once (i even) or 3 times (i odd)."""
    if i == 2:
        return ((2, 1, 1),)
    if i % 2 == 0:
        return tuple((l.top, l.low, 1) for l in spread_lines(i))
    if i == 3:
        return tuple((l.top, l.low, 1) for l in enumerate_lines(3))
    piece = Counter({(t, l): 3 for t, l, _ in _piece(i, 3)})
    for t, l, _ in _cover(3):
        piece[(t, l)] += 1
    return tuple((t, l, m) for (t, l), m in sorted(piece.items()))


@lru_cache(maxsize=None)
def _piece(b: int, a: int) -> Tuple[Tuple[int, int, int], ...]:
    """Lines of S_b covering S_b minus S_a once (b = a mod 2, b > a >= 2)."""
    if a == 2:
        return tuple((l.top, l.low, 1) for l in spread_lines(b) if (l.top, l.low) != (2, 1))
    vsp = vsp_2a(b, a, chain_aligned=True)
    return tuple((m.basis[0], m.basis[1], 1) for m in vsp.members if m.dim == 2)


@lru_cache(maxsize=None)
def _all_lines(r: int) -> Tuple[Tuple[int, int, int], ...]:
    return tuple((l.top, l.low, 1) for l in iter_lines(r))


def _add(bag: Counter, block, times: int = 1) -> None:
    for t, l, m in block:
        bag[(t, l)] += m * times


def _sub(bag: Counter, block, times: int = 1) -> None:
    _counter_sub(bag, Counter({(t, l): m for t, l, m in block}), times)


def _contains(bag: Counter, block) -> bool:
    return all(bag.get((t, l), 0) >= m for t, l, m in block)


@dataclass(frozen=True)
class Realization:
    system: LineSystem
    ptype: PartitionType  # with the concrete sigma that was realized


def _realize_star(r: int, eps: Tuple[int, ...]) -> Tuple[Counter, int]:
    if r < 3:
        raise DomainError("realization needs r >= 3")
    if eps[0] != 0:
        raise NotPartitionable("the chain construction needs eps_1 = 0")
    if not packing_ok(r, eps):
        raise NotPartitionable(
            f"sum eps_i (2^i - 1) is not divisible by {2 ** gcd(r, 2) - 1}"
        )
    e = {i: eps[i - 1] for i in range(2, r)}
    bag: Counter = Counter()
    sigma = 0
    # negative eps_i: add full covers of S_i
    for i in range(2, r):
        if e[i] < 0:
            c = _cover_multiplicity(i)
            times = -(-(-e[i]) // c)
            _add(bag, _cover(i), times)
            e[i] += times * c
    # sigma[r]-sigma[i] pieces, or pieces inside S_{r-1} feeding eps_{r-1}
    for i in range(2, r - 1):
        if e[i] == 0:
            continue
        if (r - i) % 2 == 0:
            _add(bag, _piece(r, i), e[i])
            sigma += e[i]
        else:
            _add(bag, _piece(r - 1, i), e[i])
            e[r - 1] += e[i]
        e[i] = 0
    top = e[r - 1]
    if top:
        _add(bag, _all_lines(r), top)
        sigma += top * (2 ** (r - 1) - 1)
        if r % 2:
            _sub(bag, tuple((l.top, l.low, 1) for l in spread_lines(r - 1)), top)
        else:
            if top % 3:
                raise NotPartitionable(f"eps_{r - 1} = {top} must be divisible by 3 for even r")
            _sub(bag, _cover(r - 1), top // 3)
    full = _cover(r)
    c = _cover_multiplicity(r)
    if sigma == 0:
        _add(bag, full)
        sigma = c
    # peel off whole covers while something nonempty remains
    for block, step in ((_all_lines(r), 2 ** (r - 1) - 1), (full, c)):
        while sigma - step >= 1 and _contains(bag, block):
            _sub(bag, block)
            sigma -= step
    return bag, sigma


def realize_type(ptype: PartitionType) -> Realization:
    """Realize sigma[r] - sum eps_i [i] (eps_1 = 0) as a multiset of lines.

    For a STAR type the sigma produced by the construction is returned; a
    concrete sigma is reached by adding whole covers of the ambient space.
    """
    r = ptype.r
    bag, sigma0 = _realize_star(r, ptype.eps)
    sigma = sigma0
    if ptype.sigma is not None:
        step = sigma_step(r)
        if ptype.sigma < sigma0 or (ptype.sigma - sigma0) % step:
            raise NotPartitionable(
                f"construction reaches sigma = {sigma0} + {step} t only; {ptype.sigma} requested"
            )
        _add(bag, _cover(r), (ptype.sigma - sigma0) // step)
        sigma = ptype.sigma
    lines = {Line(r, t, l): m for (t, l), m in bag.items() if m}
    return Realization(LineSystem(r, lines), ptype.with_sigma(sigma))


def minimal_sigma(eps: Sequence[int], r: int) -> Tuple[int, int]:
    """(sigma produced by :func:`realize_type` for the STAR type, sigma step).

    ``eps`` lists eps_2 .. eps_{r-1}.
    """
    full = (0,) + tuple(eps) + (0,) * (r - 2 - len(eps))
    if len(full) != r - 1:
        raise DomainError(f"expected at most {r - 2} values for eps_2..eps_{r - 1}")
    _, sigma = _realize_star(r, full)
    return sigma, sigma_step(r)


def type_defects(system: LineSystem, ptype: PartitionType) -> Dict[int, Tuple[int, int]]:
    """Points whose multiplicity differs from the type: point -> (actual, expected)."""
    counts = point_expansion(system).counts
    out = {}
    for p in range(1, 1 << system.r):
        want = ptype.multiplicity(p)
        have = counts.get(p, 0)
        if have != want:
            out[p] = (have, want)
    return out


# --------------------------------------------------------------------------
# Griesmer parameterization and the asymptotic family


def griesmer_rep(k: int, d: int) -> Tuple[int, Tuple[int, ...]]:
    """Unique (sigma, eps_1..eps_{k-1}) with d = sigma 2^(k-1) - sum eps_i 2^(i-1), eps_i in {0,1}."""
    if k < 1 or d < 1:
        raise DomainError("griesmer_rep needs k >= 1 and d >= 1")
    top = 2 ** (k - 1)
    sigma = -(-d // top)
    rest = sigma * top - d
    return sigma, tuple((rest >> (i - 1)) & 1 for i in range(1, k))


def surplus(n: int, r: int, s: int) -> int:
    """theta(n, r, s) = 3n - g(r, 2(n - s))."""
    if not (n > s >= 1) or r <= 2:
        raise DomainError("surplus needs n > s >= 1 and r > 2")
    return 3 * n - griesmer(r, 2 * (n - s))


@dataclass(frozen=True)
class TypeFamily:
    r: int
    n: int
    s: int
    base: PartitionType  # the t = 0 member, sigma'[r] - sum eps'_i [i]

    @property
    def sigma_step(self) -> int:
        return sigma_step(self.r)

    @property
    def n_step(self) -> int:
        return (2**self.r - 1) // (2 ** gcd(self.r, 2) - 1)

    @property
    def s_step(self) -> int:
        return (2 ** (self.r - 2) - 1) // (2 ** gcd(self.r, 2) - 1)

    def parameters(self, t: int) -> Tuple[int, int]:
        return self.n + t * self.n_step, self.s + t * self.s_step

    def ptype(self, t: int) -> PartitionType:
        return self.base.with_sigma(self.base.sigma + t * self.sigma_step)

    def min_t(self) -> int:
        sigma0, step = minimal_sigma(self.base.eps[1:], self.r)
        return max(0, -(-(sigma0 - self.base.sigma) // step))

    def instantiate(self, t: int) -> LineSystem:
        """Realize member t and check it is an (n_t, r, s_t) system."""
        real = realize_type(self.ptype(t))
        n_t, s_t = self.parameters(t)
        report = verify_system(real.system, n_t, s_t)
        if not report.passed:
            raise AssertionError(f"family member t={t} failed: {report.mismatches}")
        return real.system


def asymptotic_family(n: int, r: int, s: int) -> TypeFamily:
    theta = surplus(n, r, s)
    if theta < 0:
        raise DomainError(f"({n},{r},{s}) exceeds the Griesmer upper bound (surplus {theta})")
    sigma, eps = griesmer_rep(r, 2 * (n - s))
    if eps[0]:
        raise AssertionError("even minimum distance forces eps_1 = 0")
    eps = list(eps)
    eps[r - 2] += 2 * theta
    base = PartitionType(r, sigma + theta, tuple(eps))
    # the t = 0 member may have negative multiplicities; only its counts must match
    n0, profile = _type_counts(base)
    if (n0, max(profile)) != (n, s):
        raise AssertionError(f"base type {base} gives n={n0}, s={max(profile)}, expected n={n}, s={s}")
    return TypeFamily(r, n, s, base)
