"""Bounds on n_4(s) for small s and the periodic formulas for r = 7 and 8."""

from pglines.bincode import derive_constraints
from pglines.bounds import asymptotic_formulas, format_formulas, format_rows, nks_table


def main():
    rows = nks_table(8, list(range(3, 16)) + [28, 29])
    print(format_rows(rows))
    for f in asymptotic_formulas(8)[:4]:
        print(f)
    print("...")
    print(format_formulas(asymptotic_formulas(7)[-2:]), end="")
    print()
    for n, s in ((110, 28), (115, 29)):
        print(f"({n},8,{s}):", derive_constraints(n, 8, s).summary())


if __name__ == "__main__":
    main()
