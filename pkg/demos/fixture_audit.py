"""Verify every packaged explicit system and show what fails and why."""

from pglines.paperdata import verify_all


def main():
    rep = verify_all()
    for res in rep.results:
        d = res.as_dict()
        mark = "ok  " if res.passed else "FAIL"
        extra = f" dup={d['duplicate_entries']}" if d["duplicate_entries"] else ""
        print(f"{mark} r={d['r']} s={d['s']:>2} n={d['n']:>3} claimed {d['expected_n']:>3}{extra}")
        for p in res.problems():
            print(f"       {p}")
    print(f"{rep.pass_count}/{len(rep.results)} verify")


if __name__ == "__main__":
    main()
