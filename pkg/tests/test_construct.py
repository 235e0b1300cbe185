import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pglines.construct import (
    NotPartitionable,
    PartitionType,
    asymptotic_family,
    gf_mul,
    griesmer_rep,
    least_irreducible,
    line_spread,
    minimal_sigma,
    mrd_lifted_partition,
    packing_ok,
    partial_spread_system,
    realize_type,
    sigma_step,
    surplus,
    type_defects,
    type_parameters,
    vsp_2a,
)
from pglines.gf2geom import DomainError
from pglines.linesys import verify_system


def coverage(system):
    cov = Counter()
    for line, m in system.items():
        for p in line.points:
            cov[p] += m
    return cov


def brute_s(system):
    r = system.r
    return max(
        sum(m for line, m in system.items() if all(bin(p & h).count("1") % 2 == 0 for p in line.points))
        for h in range(1, 1 << r)
    )


def chain_multiplicity(ptype, p):
    """sigma minus eps_i for every chain space S_i (low i bits) containing p."""
    return ptype.sigma - sum(ptype.eps_of(i) for i in range(1, ptype.r) if p < (1 << i))


def is_irreducible(poly):
    deg = poly.bit_length() - 1
    for d in range(2, 1 << (deg // 2 + 1)):
        a = poly
        while a.bit_length() >= d.bit_length():
            a ^= d << (a.bit_length() - d.bit_length())
        if a == 0:
            return False
    return True


@pytest.mark.parametrize("m", range(2, 12))
def test_least_irreducible(m):
    poly = least_irreducible(m)
    assert poly.bit_length() == m + 1 and is_irreducible(poly)
    smaller = [q for q in range(1 << m, poly) if q & 1 and is_irreducible(q)]
    assert smaller == []


@pytest.mark.parametrize("m", [2, 3, 5, 8])
def test_gf_mul_is_a_field(m):
    elems = range(1, 1 << m)
    for a in elems:
        assert sum(gf_mul(a, b, m) == 1 for b in elems) == 1
    rng = random.Random(m)
    for _ in range(200):
        a, b, c = (rng.randrange(1 << m) for _ in range(3))
        assert gf_mul(a, b ^ c, m) == gf_mul(a, b, m) ^ gf_mul(a, c, m)
        assert gf_mul(gf_mul(a, b, m), c, m) == gf_mul(a, gf_mul(b, c, m), m)


@pytest.mark.parametrize("r", [4, 6, 8])
def test_line_spread(r):
    sp = line_spread(r)
    cov = coverage(sp)
    assert len(cov) == 2**r - 1 and set(cov.values()) == {1}
    assert sp.n == (2**r - 1) // 3
    assert brute_s(sp) == (2 ** (r - 2) - 1) // 3


@pytest.mark.parametrize("r", [3, 5, 18, 2])
def test_line_spread_domain(r):
    with pytest.raises(DomainError):
        line_spread(r)


@pytest.mark.parametrize("r", [5, 6, 7, 8, 10])
def test_mrd_lifted_partition(r):
    vsp = mrd_lifted_partition(r)
    assert vsp.is_partition()
    assert vsp.type_signature() == {2: 2 ** (r - 2), r - 2: 1}
    cov = Counter(p for m in vsp.members for p in m.points())
    assert len(cov) == 2**r - 1 and set(cov.values()) == {1}


def test_mrd_domain():
    with pytest.raises(DomainError):
        mrd_lifted_partition(4)


@pytest.mark.parametrize("r,a", [(7, 3), (8, 4), (9, 3), (10, 4), (8, 6)])
def test_vsp_2a(r, a):
    for aligned in (False, True):
        vsp = vsp_2a(r, a, chain_aligned=aligned)
        assert vsp.is_partition()
        t = 2**a * (2 ** (r - a) - 1) // 3
        assert vsp.type_signature() == {2: t, a: 1}
    aligned = vsp_2a(r, a, chain_aligned=True)
    space = next(m for m in aligned.members if m.dim == a)
    assert set(space.points()) == set(range(1, 1 << a))


@pytest.mark.parametrize("r,a", [(7, 4), (5, 2), (3, 3)])
def test_vsp_domain(r, a):
    with pytest.raises(DomainError):
        vsp_2a(r, a)


@pytest.mark.parametrize("r,a,s,s_a", [(7, 3, 10, 8), (6, 4, 4, 0), (8, 4, 20, 16)])
def test_partial_spread_system(r, a, s, s_a):
    ps = partial_spread_system(r, a)
    assert (ps.s, ps.s_on_a) == (s, s_a)
    assert ps.s_observed == s == brute_s(ps.system)
    assert ps.s_on_a_observed == (s_a,)


def test_type_parse_and_print():
    t = PartitionType.parse("3[7] - [4] - 1[2]")
    assert (t.r, t.sigma, t.eps) == (7, 3, (0, 1, 0, 1, 0, 0))
    assert str(t) == "3[7]-1[4]-1[2]"
    star = PartitionType.parse("*[7]-2[6]+1[3]")
    assert star.sigma is None and str(star) == "*[7]-2[6]+1[3]"
    for bad in ("-1[4]", "3[7]-*[3]", "3[7]-1[7]", "3[7] x"):
        with pytest.raises(ValueError):
            PartitionType.parse(bad)


@pytest.mark.parametrize(
    "text,n,s",
    [("3[7]-1[4]-1[2]", 121, 30), ("1[4]", 5, 1), ("3[5]", 31, 7), ("1[6]-1[4]", 16, 4)],
)
def test_type_parameters(text, n, s):
    p = type_parameters(PartitionType.parse(text))
    assert (p.n, p.s) == (n, s)


@pytest.mark.parametrize("text", ["1[5]", "1[4]-1[1]", "1[6]-1[5]"])
def test_type_parameters_reject(text):
    with pytest.raises(NotPartitionable):
        type_parameters(PartitionType.parse(text))


def check_realization(ptype):
    real = realize_type(ptype)
    done = real.ptype
    cov = coverage(real.system)
    for p in range(1, 1 << ptype.r):
        assert cov.get(p, 0) == chain_multiplicity(done, p)
    assert type_defects(real.system, done) == {}
    return real, done


@pytest.mark.parametrize(
    "text", ["*[6]-3[5]", "*[7]-1[4]-1[2]", "129[7]-1[4]-1[2]", "*[8]+3[3]", "*[5]-1[3]-1[2]", "*[7]-1[6]"]
)
def test_realize_examples(text):
    real, done = check_realization(PartitionType.parse(text))
    params = type_parameters(done)
    assert real.system.n == params.n
    if min(done.eps) >= 0:
        assert brute_s(real.system) == params.s
    else:
        assert brute_s(real.system) <= params.s


def test_realize_rejects():
    with pytest.raises(NotPartitionable):
        realize_type(PartitionType.parse("*[6]-1[5]"))
    with pytest.raises(NotPartitionable):
        realize_type(PartitionType.parse("*[6]-2[1]"))
    with pytest.raises(NotPartitionable):
        realize_type(PartitionType.parse("*[8]+2[3]"))
    with pytest.raises(NotPartitionable):
        realize_type(PartitionType.parse("3[7]-1[4]-1[2]"))
    sigma0, step = minimal_sigma([0, 1, 0, 0, 0], 7)
    with pytest.raises(NotPartitionable):
        realize_type(PartitionType(7, sigma0 + 1, (0, 0, 1)))


def test_sigma_step_and_packing():
    assert [sigma_step(r) for r in range(3, 9)] == [3, 1, 3, 1, 3, 1]
    assert packing_ok(7, (0, 1, 0, 1, 0, 0))
    assert not packing_ok(6, (0, 0, 1, 0, 0))
    assert packing_ok(6, (0, 0, 0, 1, 0))
    assert packing_ok(6, (0, 0, 0, 0, 3))


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 7), st.data())
def test_realize_random_packing_types(r, data):
    eps = [0] + [data.draw(st.integers(-2, 3)) for _ in range(r - 2)]
    if not packing_ok(r, eps):
        with pytest.raises(NotPartitionable):
            realize_type(PartitionType(r, None, tuple(eps)))
        return
    real, done = check_realization(PartitionType(r, None, tuple(eps)))
    if min(eps) >= 0:
        assert verify_system(real.system).s_max == type_parameters(done).s


@pytest.mark.parametrize("k,d", [(7, 50), (8, 164), (3, 4), (5, 1), (8, 256)])
def test_griesmer_rep(k, d):
    sigma, eps = griesmer_rep(k, d)
    assert d == sigma * 2 ** (k - 1) - sum(e * 2 ** (i - 1) for i, e in enumerate(eps, 1))
    assert set(eps) <= {0, 1}


def test_surplus():
    assert surplus(110, 8, 28) == 0
    assert surplus(121, 7, 30) >= 0
    with pytest.raises(DomainError):
        surplus(5, 8, 5)


@pytest.mark.parametrize("n,r,s", [(121, 7, 30), (127, 7, 31), (85, 8, 21), (22, 6, 6)])
def test_asymptotic_family(n, r, s):
    fam = asymptotic_family(n, r, s)
    t = fam.min_t()
    if t <= 3:
        system = fam.instantiate(t)
        n_t, s_t = fam.parameters(t)
        assert system.n == n_t and brute_s(system) == s_t
    else:
        real = realize_type(fam.ptype(t))
        assert (real.system.n, verify_system(real.system).s_max) == fam.parameters(t)
    nxt = type_parameters(fam.ptype(t + 1))
    assert (nxt.n, nxt.s) == fam.parameters(t + 1)


def test_asymptotic_family_over_griesmer():
    with pytest.raises(DomainError):
        asymptotic_family(200, 7, 30)
