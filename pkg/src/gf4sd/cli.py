"""Command-line interface wiring the modules into verifiable pipelines.

Exit codes: 0 success, 1 a well-formed negative verdict (so scripts can
branch without parsing), 2 input error, 3 budget exhausted.  Output is
line-oriented TSV by default; ``--json`` switches to JSON lines.  All
commands are deterministic: identical inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import classify as classify_mod
from . import codes as codes_mod
from . import eisenstein as eis
from . import equiv as equiv_mod
from . import hadamard as had

OK, FALSE, INPUT_ERROR, BUDGET = 0, 1, 2, 3


class _Reporter:
    def __init__(self, as_json: bool):
        self.as_json = as_json

    def emit(self, record: dict) -> None:
        if self.as_json:
            print(json.dumps(record, sort_keys=True))
        else:
            print("\t".join(f"{k}={v}" for k, v in record.items()))


def _read(path: str) -> str:
    with open(path) as fh:
        return fh.read()


def _load_code(path: str) -> codes_mod.LinearCode:
    return codes_mod.code_from_text(_read(path))


def _load_gh(path: str) -> had.GHMatrix:
    return had.gh_from_text(_read(path))


def _load_net(path: str) -> had.NetIncidence:
    return had.net_from_text(_read(path))


def _cmd_mass(args, rep) -> int:
    print(codes_mod.count_self_dual(args.length))
    return OK


def _cmd_code(args, rep) -> int:
    c = _load_code(args.file)
    if args.action == "verify":
        ok = codes_mod.is_self_dual(c)
        rep.emit({"file": args.file, "self_dual": ok})
        return OK if ok else FALSE
    if args.action == "aut":
        rep.emit({"file": args.file, "aut_order": equiv_mod.code_aut_order(c)})
        return OK
    if args.action == "canon":
        rep.emit({"file": args.file, "certificate": equiv_mod.code_certificate(c).hex()})
        return OK
    if args.action == "equiv":
        other = _load_code(args.other)
        flag, witness = equiv_mod.codes_equivalent(c, other, weak=args.weak)
        rec = {"equivalent": flag}
        if witness is not None:
            rec["witness"] = witness.to_text()
        rep.emit(rec)
        return OK if flag else FALSE
    raise AssertionError(args.action)


def _cmd_classify(args, rep) -> int:
    try:
        run = classify_mod.classify_length(
            args.length,
            budget=args.budget,
            out_dir=args.out,
            resume=args.resume,
            threads=args.threads,
        )
    except classify_mod.BudgetExhausted as exc:
        rep.emit(
            {
                "length": args.length,
                "complete": False,
                "classes": len(exc.run.discovered),
                "mass": str(exc.run.mass_accumulated),
                "target": str(exc.run.target),
            }
        )
        return BUDGET
    rec = {
        "length": args.length,
        "complete": run.complete,
        "classes": len(run.discovered),
        "mass": str(run.mass_accumulated),
        "target": str(run.target),
    }
    for d, cnt in run.by_weight().items():
        rec[f"d{d}"] = cnt
    rep.emit(rec)
    return OK


def _cmd_snf(args, rep) -> int:
    m = eis.parse_matrix(_read(args.file))
    res = eis.smith_normal_form(m)
    rep.emit({"divisors": " ".join(str(d) for d in res.divisors)})
    return OK


def _cmd_gh(args, rep) -> int:
    if args.action == "enumerate":
        mats = had.enumerate_gh(args.mu)
        nets = {equiv_mod.net_certificate(had.gh_to_net(m).incidence) for m in mats}
        rep.emit({"mu": args.mu, "classes": len(mats), "net_classes": len(nets)})
        return OK
    if args.action == "from-code":
        c = _load_code(args.file)
        g = had.build_clique_graph(c)
        mats = had.clique_search(g, equiv_mod.code_aut_generators(c))
        rep.emit({"file": args.file, "classes": len(mats)})
        for m in mats:
            sys.stdout.write(had.gh_to_text(m))
        return OK
    m = _load_gh(args.file)
    if args.action == "verify":
        ok = had.gh_check(m)
        rep.emit({"file": args.file, "hadamard": ok})
        return OK if ok else FALSE
    if args.action == "invert":
        sys.stdout.write(had.gh_to_text(had.invert_entries(m)))
        return OK
    if args.action == "transpose":
        sys.stdout.write(had.gh_to_text(had.transpose(m)))
        return OK
    if args.action == "to-net":
        sys.stdout.write(had.net_to_text(had.gh_to_net(m)))
        return OK
    if args.action == "equiv":
        other = _load_gh(args.other)
        flag = had.gh_equivalent(m, other)
        rep.emit({"equivalent": flag})
        return OK if flag else FALSE
    raise AssertionError(args.action)


def _cmd_net(args, rep) -> int:
    d = _load_net(args.file)
    if args.action == "verify":
        mu = args.mu if args.mu else d.v // 9
        ok = had.verify_net(d, mu)
        rep.emit({"file": args.file, "net": ok})
        return OK if ok else FALSE
    if args.action == "to-gh":
        sys.stdout.write(had.gh_to_text(had.net_to_gh(d)))
        return OK
    if args.action == "iso":
        other = _load_net(args.other)
        flag = had.net_iso(d, other)
        rep.emit({"isomorphic": flag})
        return OK if flag else FALSE
    raise AssertionError(args.action)


def _cmd_tables(args, rep) -> int:
    if args.which == "ex":
        for i in sorted(codes_mod.TABLE_EX):
            c = codes_mod.build_table_ex_code(i)
            wd = codes_mod.weight_distribution(c)
            inter = codes_mod.intersect(codes_mod.build_s18(), c).k
            rep.emit(
                {
                    "i": i,
                    "dim": inter,
                    "A4": wd[4],
                    "A6": wd[6],
                    "aut_order": equiv_mod.code_aut_order(c),
                }
            )
        return OK
    if args.which == "gh":
        result = had.classify_h63()
        for i, cnt in result.counts().items():
            rep.emit({"i": i, "classes": cnt})
        rep.emit(
            {
                "total": len(result.matrices),
                "net_classes": result.net_classes(),
                "self_paired": result.self_paired(),
            }
        )
        return OK
    raise AssertionError(args.which)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gf4sd",
        description="Hermitian self-dual codes over GF(4) and generalized "
        "Hadamard matrices over Z3",
    )
    p.add_argument("--json", action="store_true", help="JSON-lines output")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("mass", help="number of distinct self-dual codes N(n)")
    sp.add_argument("--length", type=int, required=True)
    sp.set_defaults(func=_cmd_mass)

    sp = sub.add_parser("code", help="code verification / invariants / equivalence")
    sp.add_argument("action", choices=["verify", "aut", "canon", "equiv"])
    sp.add_argument("file")
    sp.add_argument("other", nargs="?")
    sp.add_argument("--weak", action="store_true", help="allow conjugation")
    sp.set_defaults(func=_cmd_code)

    sp = sub.add_parser("classify", help="neighbor-method classification")
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--budget", type=float, default=None, help="wall seconds")
    sp.add_argument("--out", default=None, help="output/checkpoint directory")
    sp.add_argument("--resume", action="store_true")
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=_cmd_classify)

    sp = sub.add_parser("snf", help="Smith normal form over the Eisenstein integers")
    sp.add_argument("--file", required=True)
    sp.set_defaults(func=_cmd_snf)

    sp = sub.add_parser("gh", help="generalized Hadamard matrix operations")
    sp.add_argument(
        "action",
        choices=["verify", "invert", "transpose", "equiv", "to-net", "from-code", "enumerate"],
    )
    sp.add_argument("file", nargs="?")
    sp.add_argument("other", nargs="?")
    sp.add_argument("--mu", type=int, default=None)
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=_cmd_gh)

    sp = sub.add_parser("net", help="symmetric net operations")
    sp.add_argument("action", choices=["verify", "iso", "to-gh"])
    sp.add_argument("file")
    sp.add_argument("other", nargs="?")
    sp.add_argument("--mu", type=int, default=None)
    sp.set_defaults(func=_cmd_net)

    sp = sub.add_parser("tables", help="reproduce the tabulated classifications")
    sp.add_argument("which", choices=["ex", "gh"])
    sp.set_defaults(func=_cmd_tables)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = _Reporter(args.json)
    try:
        return args.func(args, rep)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
