"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import bounds, construct, paperdata, search
from .bincode import (
    InvalidDistributionError,
    NminTable,
    check_code_contract,
    derive_constraints,
    dual_weight_distribution,
    first_identities_check,
    macwilliams_transform,
)
from .gf2geom import DomainError, bits_to_str
from .linesys import SystemParseError, format_system, parse_system, point_expansion, verify_system

NMIN_ENV = "PGLINES_NMIN_TABLE"
OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(payload: dict, fmt: str, human: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=1, sort_keys=True, default=str) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k in sorted(payload):
            v = payload[k]
            w.writerow([k, json.dumps(v, sort_keys=True, default=str) if isinstance(v, (list, dict)) else v])
        return buf.getvalue()
    return human


def _read_system(path: str, r: Optional[int] = None):
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return parse_system(p.read_text(), r)


def _nmin(path: Optional[str]) -> NminTable:
    path = path or os.environ.get(NMIN_ENV)
    if path:
        if not Path(path).is_file():
            raise UsageError(f"no such n_min table: {path}")
        return NminTable.load(path)
    return bounds.default_nmin_table()


def _write_or_return(text: str, out: Optional[str]) -> str:
    if out:
        Path(out).write_text(text)
        return ""
    return text


# --------------------------------------------------------------------------
# subcommands; each returns (exit code, stdout text)


def cmd_verify(a):
    system = _read_system(a.file, a.r)
    rep = verify_system(system, a.n, a.s)
    human = (
        f"r={rep.r} n={rep.n} s={rep.s_max} spanning={rep.spanning} "
        f"hyperplanes attaining s: {rep.achieving_hyperplanes}, max point multiplicity {rep.max_point_multiplicity}\n"
    )
    human += "".join(f"MISMATCH: {m}\n" for m in rep.mismatches) or "OK\n"
    return (OK if rep.passed else FAILED), _emit(rep.as_dict(), a.format, human)


def cmd_expand(a):
    system = _read_system(a.file, a.r)
    pts = point_expansion(system)
    rows = [(bits_to_str(p, system.r), m) for p, m in pts.counts.items()]
    if a.format == "json":
        text = json.dumps({"r": system.r, "total": pts.total, "points": [{"point": p, "multiplicity": m} for p, m in rows]},
                          indent=1, sort_keys=True) + "\n"
    elif a.format == "csv":
        text = "point,multiplicity\n" + "".join(f"{p},{m}\n" for p, m in rows)
    else:
        text = f"# {pts.total} points (with multiplicity), r={system.r}\n" + "".join(f"{p} {m}\n" for p, m in rows)
    return OK, text


def cmd_bounds(a):
    if a.facts and not Path(a.facts).is_file():
        raise UsageError(f"no such facts file: {a.facts}")
    facts = bounds.load_facts(a.facts) if a.facts else None
    if a.s_min > a.s_max:
        raise UsageError("--s-min exceeds --s-max")
    rows = bounds.nks_table(a.r, range(a.s_min, a.s_max + 1), facts=facts, nmin=_nmin(a.nmin_table))
    code = OK if all(r.consistent for r in rows) else FAILED
    return code, bounds.format_rows(rows, a.format)


def cmd_formulas(a):
    return OK, bounds.format_formulas(bounds.asymptotic_formulas(a.r), a.format)


def cmd_construct(a):
    kind = a.kind
    if kind == "spread":
        system = construct.line_spread(a.r)
        label = f"Desarguesian line spread of PG({a.r - 1},2)"
    elif kind in ("vsp", "partial"):
        if a.a is None:
            raise UsageError(f"construct {kind} needs --a")
        ps = construct.partial_spread_system(a.r, a.a)
        system = ps.system
        label = f"lines of a 2^t {a.a}^1 partition of PG({a.r - 1},2); s={ps.s}, s on the {a.a}-space={ps.s_on_a}"
    elif kind == "mrd":
        vsp = construct.mrd_lifted_partition(a.r)
        from .linesys import LineSystem

        system = LineSystem.from_lines(vsp.lines(), a.r)
        label = f"lines of the lifted MRD partition of PG({a.r - 1},2) (plus one {a.r - 2}-space, not listed)"
    else:
        raise UsageError(f"unknown construction {kind!r}")
    rep = verify_system(system)
    if a.format == "human" or a.out:
        text = format_system(system, f"{label}\nverified: n={rep.n} s={rep.s_max} spanning={rep.spanning}")
        return OK, _write_or_return(text, a.out)
    return OK, _emit({"construction": kind, **rep.as_dict()}, a.format, "")


def _ptype(text: str) -> construct.PartitionType:
    try:
        return construct.PartitionType.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_type_params(a):
    t = _ptype(a.type)
    if t.sigma is None:
        raise UsageError("type-params needs a concrete sigma (use realize for '*')")
    try:
        p = construct.type_parameters(t)
    except construct.NotPartitionable as exc:
        return FAILED, _emit({"type": str(t), "valid": False, "reason": str(exc)}, a.format, f"not a valid type: {exc}\n")
    payload = {"type": str(t), "valid": True, "n": p.n, "s": p.s, "s_profile": list(p.s_profile)}
    human = f"{t}: n={p.n} s={p.s} (s_1..s_{t.r} = {', '.join(map(str, p.s_profile))})\n"
    return OK, _emit(payload, a.format, human)


def cmd_realize(a):
    t = _ptype(a.type)
    try:
        real = construct.realize_type(t)
    except construct.NotPartitionable as exc:
        return FAILED, _emit({"type": str(t), "realized": False, "reason": str(exc)}, a.format, f"not partitionable: {exc}\n")
    defects = construct.type_defects(real.system, real.ptype)
    params = construct.type_parameters(real.ptype)
    rep = verify_system(real.system, params.n)
    ok = not defects and rep.passed and rep.s_max <= params.s
    payload = {"type": str(real.ptype), "n": rep.n, "s": rep.s_max, "formula_s": params.s,
               "point_defects": len(defects), "passed": ok}
    if a.out:
        header = f"realization of {real.ptype}; n={rep.n} s={rep.s_max}"
        Path(a.out).write_text(format_system(real.system, header))
    human = f"{real.ptype}: n={rep.n} s={rep.s_max} (formula {params.s}), point identity {'holds' if not defects else 'FAILS'}\n"
    return (OK if ok else FAILED), _emit(payload, a.format, human)


def cmd_ilp(a):
    if a.generators:
        if not Path(a.generators).is_file():
            raise UsageError(f"no such generator file: {a.generators}")
        gens = search.parse_generators(Path(a.generators).read_text(), a.r)
        model = search.orbit_model(a.r, a.s, gens, a.n)
    else:
        model = search.build_model(a.r, a.s, a.n)
    if a.out:
        with open(a.out, "w", encoding="utf-8") as fh:
            model.write(fh, a.format)
        return OK, ""
    return OK, model.text(a.format)


def cmd_search(a):
    res = search.exhaustive_max(a.r, a.s, a.n_cap)
    payload = {"r": a.r, "s": a.s, "n": res.n, "nodes": res.nodes, "complete": res.complete}
    human = f"r={a.r} s={a.s}: maximum n = {res.n} ({res.nodes} nodes)\n"
    if res.witness is not None:
        human += format_system(res.witness, "witness")
        payload["witness"] = [f"{t}/{l}" for t, l in (line.rows() for line in res.witness.expanded())]
    return OK, _emit(payload, a.format, human)


def cmd_fixtures(a):
    if a.export:
        paths = paperdata.export_fixtures(a.export)
        return OK, "".join(f"{p}\n" for p in paths)
    fixtures = paperdata.datasets()
    if not a.all:
        if a.r is None or a.s is None:
            raise UsageError("fixtures needs --all or both --r and --s")
        fixtures = [paperdata.fixture(a.r, a.s)]
    results = [paperdata.verify_fixture(f) for f in fixtures]
    ok = all(r.passed for r in results)
    if a.format == "json":
        payload = {"passed": ok, "pass_count": sum(r.passed for r in results), "total": len(results),
                   "fixtures": [r.as_dict() for r in results]}
        text = json.dumps(payload, indent=1, sort_keys=True) + "\n"
    elif a.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "s", "expected_n", "n", "s_max", "spanning", "passed", "problems"])
        for r in results:
            d = r.as_dict()
            w.writerow([d["r"], d["s"], d["expected_n"], d["n"], d["s_max"], d["spanning"], d["passed"], "; ".join(d["problems"])])
        text = buf.getvalue()
    else:
        lines = []
        for r in results:
            d = r.as_dict()
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"r={d['r']} s={d['s']:>2} n={d['n']} (claimed {d['expected_n']}) s_max={d['s_max']} {status}"
                         + (f"  {'; '.join(d['problems'])}" if d["problems"] else ""))
        lines.append(f"{sum(r.passed for r in results)}/{len(results)} pass")
        text = "\n".join(lines) + "\n"
    return (OK if ok else FAILED), text


def cmd_code_analyze(a):
    system = _read_system(a.file, a.r)
    res = check_code_contract(system)
    wd = res.distribution
    payload = {
        "n_lines": res.n_lines,
        "s": res.s_max,
        "length": res.code.n,
        "dimension": res.code.k,
        "min_distance": wd.min_distance,
        "max_weight": wd.max_weight,
        "divisibility": wd.divisibility,
        "A": {str(w): c for w, c in wd.A.items()},
        "contract_failures": list(res.failures),
    }
    try:
        B = macwilliams_transform(wd, res.code.n, res.code.k)
        payload["B"] = {str(i): int(b) for i, b in B.items()}
        b2, b3 = first_identities_check(wd, res.code.n, res.code.k)
        payload["B2_B3_from_identities"] = [str(b2), str(b3)]
        if res.code.k <= 12 and not a.skip_dual:
            dual = dual_weight_distribution(res.code)
            payload["dual_enumeration_agrees"] = {i: int(b) for i, b in B.items()} == dict(dual.A)
    except InvalidDistributionError as exc:
        payload["macwilliams_error"] = str(exc)
    ok = not res.failures and payload.get("dual_enumeration_agrees", True) and "macwilliams_error" not in payload
    human = (
        f"[{res.code.n},{res.code.k},{wd.min_distance}]_2 code from an ({res.n_lines},{system.r},{res.s_max}) system; "
        f"{wd.divisibility}-divisible, max weight {wd.max_weight}\n"
        f"A: {' '.join(f'{w}:{c}' for w, c in wd.A.items())}\n"
    )
    if "B" in payload:
        human += f"B: {' '.join(f'{i}:{b}' for i, b in payload['B'].items())}\n"
    if "dual_enumeration_agrees" in payload:
        human += f"dual enumeration agrees: {payload['dual_enumeration_agrees']}\n"
    human += "".join(f"FAILED: {f}\n" for f in res.failures)
    return (OK if ok else FAILED), _emit(payload, a.format, human)


def cmd_derive_constraints(a):
    prof = derive_constraints(a.n, a.r, a.s, _nmin(a.nmin_table))
    human = prof.summary() + "\n" + "".join(f"  {k}: {v}\n" for k, v in sorted(prof.notes.items()))
    return OK, _emit(prof.as_dict(), a.format, human)


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("human", "csv", "json"), default="human")
    p = argparse.ArgumentParser(prog="pglines", description="Line systems in PG(r-1,2) and their codes.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, parents=(fmt,)):
        sp = sub.add_parser(name, help=help_text, parents=list(parents))
        sp.set_defaults(func=func)
        return sp

    sp = add("verify", cmd_verify, "verify a line system file")
    sp.add_argument("file")
    sp.add_argument("--r", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--s", type=int)

    sp = add("expand", cmd_expand, "point expansion of a system")
    sp.add_argument("file")
    sp.add_argument("--r", type=int)

    sp = add("bounds", cmd_bounds, "table of bounds for n_{r/2}(s)")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s-max", type=int, required=True)
    sp.add_argument("--s-min", type=int, default=1)
    sp.add_argument("--nmin-table")
    sp.add_argument("--facts")

    sp = add("formulas", cmd_formulas, "periodic formulas for large s")
    sp.add_argument("--r", type=int, required=True)

    sp = add("construct", cmd_construct, "spreads and vector space partitions")
    sp.add_argument("kind", choices=("spread", "vsp", "partial", "mrd"))
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--a", type=int)
    sp.add_argument("--out")

    sp = add("type-params", cmd_type_params, "n and s of a partition type")
    sp.add_argument("type")

    sp = add("realize", cmd_realize, "realize a partition type by lines")
    sp.add_argument("type")
    sp.add_argument("--out")

    sp = add("ilp", cmd_ilp, "export the ILP model", parents=())
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--format", choices=search.FORMATS, default="lp")
    sp.add_argument("--generators", help="file of generator matrices for an orbit model")
    sp.add_argument("--out")

    sp = add("search", cmd_search, "exhaustive maximum for small r")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--n-cap", type=int)

    sp = add("fixtures", cmd_fixtures, "verify the packaged explicit systems")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--r", type=int)
    sp.add_argument("--s", type=int)
    sp.add_argument("--export", metavar="DIR")

    sp = add("code-analyze", cmd_code_analyze, "binary code of a system")
    sp.add_argument("file")
    sp.add_argument("--r", type=int)
    sp.add_argument("--skip-dual", action="store_true", help="skip the direct dual enumeration")

    sp = add("derive-constraints", cmd_derive_constraints, "constraints on the code of a putative system")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--nmin-table")
    return p


def run(argv: Sequence[str]) -> tuple[int, str, str]:
    """(exit code, stdout, stderr) without touching the real streams."""
    parser = build_parser()
    err = io.StringIO()
    try:
        old = sys.stderr
        sys.stderr = err
        try:
            args = parser.parse_args(list(argv))
        finally:
            sys.stderr = old
    except SystemExit as exc:
        return int(exc.code or 0), "", err.getvalue()
    try:
        code, out = args.func(args)
    except UsageError as exc:
        return USAGE, "", f"pglines: error: {exc}\n"
    except (SystemParseError, InvalidDistributionError, construct.NotPartitionable) as exc:
        return FAILED, "", f"pglines: {exc}\n"
    except (DomainError, ValueError, KeyError, OSError) as exc:
        return USAGE, "", f"pglines: error: {exc}\n"
    return code, out, ""


def main(argv: Optional[List[str]] = None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
