"""Exact small maxima by backtracking, and a model reduced by a Singer cycle."""

import time

from pglines.search import exhaustive_max, frobenius_generator, orbit_max, orbit_model, singer_generator
from pglines.linesys import verify_system


def main():
    for r, s in ((3, 1), (3, 2), (4, 1), (4, 2), (5, 3), (6, 2)):
        start = time.perf_counter()
        res = exhaustive_max(r, s)
        print(f"r={r} s={s}: max n={res.n} nodes={res.nodes} ({time.perf_counter() - start:.2f}s)")

    gens = [singer_generator(6), frobenius_generator(6)]
    model = orbit_model(6, 5, gens)
    n, y = orbit_max(model)
    rep = verify_system(model.lift(y))
    print(f"\nr=6 s=5 under Singer+Frobenius: {len(model.variables)} orbit variables, "
          f"best n={n}, verified s={rep.s_max}")
    print(model.text("lp").splitlines()[0])


if __name__ == "__main__":
    main()
