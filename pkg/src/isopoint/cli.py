"""Command-line entry point: ``isopoint <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .atlas import enumerate_subgroups_cns_plus, named, nonresidues
from .classify import bundled_table, classify, classify_range, emit_report, load_image_table, primes_between
from .criteria import admissible_f, semi_cartan_embeds, tame_inertia_compatible
from .curves import invariants_x1
from .degrees import degree_profile, min_degree_scan, standard_filter
from .errors import ComputationLimitError, DataError, IsopointError
from .facts import FACTS
from .gl2_core import Modulus, full_preimage, reduce_group, subgroup_from_json

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_CAP = 4
EXIT_SCOPE = 5


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None


def _print(obj) -> None:
    print(json.dumps(obj, indent=2))


def _load_group(spec: str):
    path = Path(spec)
    if path.is_file():
        try:
            return subgroup_from_json(path.read_text())
        except (ValueError, KeyError, TypeError) as exc:
            raise DataError(f"{spec}: {exc}") from None
    return named(spec)


def cmd_invariants(args) -> int:
    inv = invariants_x1(args.level)
    if args.json:
        _print(inv.to_dict())
    else:
        d = inv.to_dict()
        print(f"X1({d['level']}): index {d['index']}, cusps {d['cusps']}, genus {d['genus']}"
              + ("" if d["bound"] is None else f", (l^2-1)/24 = {d['bound']}"))
    return EXIT_OK


def cmd_degrees(args) -> int:
    g = _load_group(args.group)
    level = Modulus(args.level)
    if g.n != level.value:
        if level.value % g.n == 0:
            g = full_preimage(g, level.value, label=f"{g.label}^{level.value}")
        elif g.n % level.value == 0:
            g = reduce_group(g, level.value, label=f"{g.label} mod {level.value}")
        else:
            raise DataError(f"group level {g.n} and target level {level.value} are incompatible")
    prof = degree_profile(g, level)
    if args.csv:
        sys.stdout.write(prof.to_csv())
    elif args.json:
        _print(prof.to_dict())
    else:
        print(f"{prof.group_label} at level {level.value}: order {g.order}, min degree {prof.min_degree}")
        for e in prof.entries:
            print(f"  degree {e.degree:>8}  cx {e.to_dict()['cx']:>3}  count {e.count}")
    return EXIT_OK


def cmd_verify_semicartan(args) -> int:
    lo, hi = args.ell_range
    rows = []
    for ell in primes_between(max(lo, 5), hi):
        for f in sorted(admissible_f(ell)):
            r = semi_cartan_embeds(ell, f)
            row = r.to_dict()
            if args.epsilon_alt:
                alts = nonresidues(ell)
                if len(alts) > 1:
                    alt = semi_cartan_embeds(ell, f, epsilon=alts[1])
                    row["epsilon_alt"] = alt.epsilon
                    row["agrees"] = alt.embeds == r.embeds
            rows.append(row)
    if args.json:
        _print(rows)
    else:
        for row in rows:
            wit = "" if row["witness"] is None else f"  witness {row['witness']}"
            agree = "" if "agrees" not in row else f"  eps'={row['epsilon_alt']} agrees={row['agrees']}"
            print(f"l={row['ell']:>3} f={row['f']} |D^f|={row['subgroup_order']:>3} "
                  f"embeds={row['embeds']}{wit}{agree}")
    return EXIT_OK


def cmd_scan_cns(args) -> int:
    ell = args.ell
    groups = enumerate_subgroups_cns_plus(ell)
    rows = min_degree_scan(groups, ell, standard_filter)
    bound = Fraction(ell * ell - 1, 12)
    by_label = {g.label: g for g in groups}
    out = []
    for r in rows:
        d = r.to_dict()
        d["below_bound"] = r.min_degree < bound
        d["tame_inertia_compatible"] = tame_inertia_compatible(by_label[r.group_label], ell)
        out.append(d)
    violators = [d for d in out if d["below_bound"] and not d["excluded"]]
    if args.json:
        _print({"ell": ell, "bound": str(bound), "rows": out, "admissible_violators": violators})
        return EXIT_OK
    print(f"C+_ns({ell}): {len(out)} conjugacy classes, bound (l^2-1)/12 = {bound}")
    for d in out:
        flag = "excluded" if d["excluded"] else ("BELOW" if d["below_bound"] else "ok")
        print(f"  {d['group_label']:<24} order {d['order']:>6}  min degree {d['min_degree']:>6}  {flag}")
    print(f"admissible subgroups below the bound: {len(violators)}")
    return EXIT_OK


def _table(args):
    return bundled_table() if args.table is None else load_image_table(args.table)


def cmd_classify(args) -> int:
    report = classify(args.ell, args.n, _table(args))
    sys.stdout.write(emit_report(report, "json" if args.json else "text"))
    if args.json:
        print()
    return EXIT_OK


def cmd_classify_range(args) -> int:
    lo, hi = args.ells
    reports = classify_range(primes_between(max(lo, 8), hi), args.n, _table(args))
    sys.stdout.write(emit_report(reports, "json" if args.json else "text"))
    if args.json:
        print()
    else:
        surv = sorted({r.ell for r in reports if r.surviving_j_invariants})
        print(f"primes with survivors: {surv if surv else 'none'}")
    return EXIT_OK


def cmd_facts_list(args) -> int:
    if args.json:
        _print(FACTS.to_dict())
        return EXIT_OK
    d = FACTS.to_dict()
    print(f"fact table v{d['version']}")
    print(f"Borel primes {d['mazur_borel_primes']['value']}  [{d['mazur_borel_primes']['citation']}]")
    for j in d["borel_j_invariants_17_37"]:
        print(f"l={j['ell']} j={j['factored']} = {j['value']}  [{j['citation']}]")
    for f in d["rules"]:
        print(f"{f['key']}: {f['statement']}  [{f['citation']}]")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="isopoint", description="Isolated points on X1(l^n): groups, degrees, criteria.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("invariants", help="index, cusps and genus of X1(N)")
    s.add_argument("--level", type=int, required=True)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("degrees", help="closed-point degree profile of a mod-N image")
    s.add_argument("--group", required=True, help="group id (e.g. cns+@11, borel@17, gl2@5) or JSON file")
    s.add_argument("--level", type=int, required=True)
    fmt = s.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_degrees)

    s = sub.add_parser("verify", help="brute-force checks")
    vsub = s.add_subparsers(dest="what", required=True)
    v = vsub.add_parser("semicartan", help="does C+_ns(l) contain a conjugate of D^f")
    v.add_argument("--ell-range", type=_range, required=True, metavar="A..B")
    v.add_argument("--epsilon-alt", action="store_true", help="repeat with a second non-residue")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify_semicartan)

    s = sub.add_parser("scan", help="minimum degrees over a subgroup family")
    ssub = s.add_subparsers(dest="family", required=True)
    v = ssub.add_parser("cns", help="conjugacy classes of subgroups of C+_ns(l)")
    v.add_argument("--ell", type=int, required=True)
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_scan_cns)

    for name, fn in (("classify", cmd_classify), ("classify-range", cmd_classify_range)):
        s = sub.add_parser(name, help="run the case analysis" + (" over a prime range" if "range" in name else ""))
        if name == "classify":
            s.add_argument("--ell", type=int, required=True)
        else:
            s.add_argument("--ells", type=_range, default=(8, 37), metavar="A..B")
        s.add_argument("--n", type=int, default=1)
        s.add_argument("--table", type=Path, help="image table JSON (default: bundled)")
        s.add_argument("--json", action="store_true")
        s.set_defaults(func=fn)

    s = sub.add_parser("facts", help="cited results used by the rules")
    fsub = s.add_subparsers(dest="what", required=True)
    v = fsub.add_parser("list")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_facts_list)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ComputationLimitError as exc:
        print(f"computation limit: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (IsopointError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCOPE


if __name__ == "__main__":
    sys.exit(main())
