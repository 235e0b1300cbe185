"""Spreads, partitions and chain types, each checked by direct verification."""

from pglines.construct import (
    PartitionType,
    asymptotic_family,
    line_spread,
    mrd_lifted_partition,
    partial_spread_system,
    realize_type,
    type_defects,
    type_parameters,
    vsp_2a,
)
from pglines.linesys import verify_system


def main():
    print("line spreads")
    for r in (4, 6, 8):
        rep = verify_system(line_spread(r))
        print(f"  r={r}: n={rep.n} s={rep.s_max}")

    print("\nvector space partitions")
    for r in (6, 8, 10):
        vsp = mrd_lifted_partition(r)
        print(f"  lifted MRD r={r}: {vsp.type_signature()} exact={vsp.is_partition()}")
    for r, a in ((7, 3), (8, 4)):
        vsp = vsp_2a(r, a)
        print(f"  2^t {a}^1 in r={r}: {vsp.type_signature()} exact={vsp.is_partition()}")

    ps = partial_spread_system(7, 3)
    print(f"\nlines of the r=7 partition: s={ps.s_observed}, through the 3-space {ps.s_on_a_observed}")

    print("\nchain types")
    for text in ("3[7]-1[4]-1[2]", "1[6]-1[4]"):
        p = type_parameters(PartitionType.parse(text))
        print(f"  {text}: n={p.n} s={p.s} profile={p.s_profile}")
    for text in ("*[6]-3[5]", "*[7]-1[4]-1[2]"):
        real = realize_type(PartitionType.parse(text))
        rep = verify_system(real.system)
        defects = type_defects(real.system, real.ptype)
        print(f"  realized {real.ptype}: n={rep.n} s={rep.s_max} point defects={len(defects)}")

    fam = asymptotic_family(121, 7, 30)
    t = fam.min_t()
    print(f"\nfamily through (121,7,30): steps ({fam.n_step},{fam.s_step}), first realized member t={t}"
          f" with parameters {fam.parameters(t)}")


if __name__ == "__main__":
    main()
