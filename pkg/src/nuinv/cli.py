"""Command-line front end.

Exit codes: 0 when everything checks out, 1 on a computational mismatch,
2 on bad input.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import harness
from .exactalg import is_prime, projective_count
from .inputs import InputError, arrangement_from_args, parse_forms, read_text
from .nilquot import nu_table
from .resonance import THREADS_ENV, hyperplane_cover_check, stratify
from .zinv import ziegler_invariant
from .arrgmt import LinkingMatrix

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _stage(text: str) -> int:
    q = int(text)
    if q < 3:
        raise argparse.ArgumentTypeError("q must be at least 3")
    return q


def _add_inputs(sp: argparse.ArgumentParser, kinds=("tau", "lattice", "linking", "presentation", "equations", "input", "braid")):
    g = sp.add_argument_group("input (give exactly one)")
    help_ = {
        "tau": "permutation of a horizontal 2-arrangement, e.g. 2134",
        "lattice": "line lattice file",
        "linking": "linking matrix file",
        "presentation": "commutator-relators presentation file",
        "equations": "defining equations file (8 rationals per plane)",
        "input": "kind:path, or a path ending in .lat/.lnk/.eqs/.pres",
        "braid": "pure braid word such as 's1^2 s2^2'; needs --strands",
    }
    for k in kinds:
        g.add_argument(f"--{k}", help=help_[k])
    if "braid" in kinds:
        g.add_argument("--strands", type=int)


def _arrangement(args):
    keys = ("tau", "lattice", "linking", "presentation", "equations", "input", "braid")
    kw = {k: getattr(args, k, None) for k in keys}
    return arrangement_from_args(strands=getattr(args, "strands", None), **kw)


def _threads(args) -> int | None:
    return args.threads


def cmd_resonance(args, out) -> int:
    arr = _arrangement(args)
    collect = args.points or args.forms is not None
    prof = stratify(arr.linearized(), arr.n, args.p, collect_points=collect, threads=_threads(args))
    print(f"# resonance strata of {arr.name}: d = n - 1 - rank M(lambda) over Z_{args.p}, n = {arr.n}", file=out)
    print("d\tcount", file=out)
    for d in range(arr.n):
        if prof.counts.get(d):
            print(f"{d}\t{prof.counts[d]}", file=out)
    status = EXIT_OK if prof.total == projective_count(arr.n, args.p) else EXIT_MISMATCH
    if args.forms is not None:
        forms = parse_forms(read_text(args.forms), arr.n, args.forms)
        print("# points of each stratum off every given form", file=out)
        print("d\tresidual", file=out)
        for d in sorted(prof.strata or {}):
            if d == 0:
                continue
            rest = hyperplane_cover_check(prof.at_least(d), forms, args.p)
            print(f"{d}\t{len(rest)}", file=out)
    if args.points:
        print("# points by stratum", file=out)
        print("d\tpoint", file=out)
        for d, pts in sorted((prof.strata or {}).items()):
            for pt in pts:
                print(f"{d}\t{' '.join(map(str, pt))}", file=out)
    return status


def cmd_nu(args, out) -> int:
    arr = _arrangement(args)
    tb = nu_table(arr.presentation(), args.q, args.p, threads=_threads(args))
    print(f"# index-{args.p} normal subgroups of G/G_{args.q} for {arr.name}, by torsion of the abelianization", file=out)
    key = "d" if args.q == 3 else "divisors"
    print(f"{key}\tcount", file=out)
    for sig, c in tb.rows.items():
        label = str(sig) if args.q == 3 else (" ".join(map(str, sig)) or "-")
        print(f"{label}\t{c}", file=out)
    if args.q > 3:
        print("# by d = dim (Tors H_1) (x) Z_p", file=out)
        print("d\tcount", file=out)
        for d, c in sorted(tb.by_dimension().items()):
            print(f"{d}\t{c}", file=out)
    ok = tb.total == projective_count(arr.n, args.p) and tb.violations == 0
    if tb.violations:
        print(f"# {tb.violations} kernels violate the expected structure", file=out)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_ziegler(args, out) -> int:
    arr = _arrangement(args)
    if not isinstance(arr.data, LinkingMatrix):
        raise InputError("ziegler", None, "needs --tau, --linking or --equations")
    try:
        cls = ziegler_invariant(arr.data)
    except ValueError as exc:
        raise InputError("ziegler", None, str(exc)) from exc
    print(f"# Z_(0,2) of {arr.name}", file=out)
    print(cls, file=out)
    return EXIT_OK


def cmd_table1(args, out) -> int:
    rows, sign = harness.run_table1(threads=_threads(args))
    print(harness.format_table1(rows, sign), file=out)
    return EXIT_OK if all(r.ok for r in rows) else EXIT_MISMATCH


def cmd_verify(args, out) -> int:
    try:
        rep = harness.verify(args.suite, threads=_threads(args))
    except KeyError as exc:
        raise InputError("verify", None, exc.args[0]) from exc
    print("status\tsuite\tcheck\tdetail", file=out)
    for c in rep.checks:
        print(c.line(), file=out)
    return EXIT_OK if rep.ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nuinv",
        description="Resonance strata and index-p subgroup counts of arrangement groups.",
    )
    parser.add_argument("--threads", type=int, default=None, help=f"worker threads (default: ${THREADS_ENV} or 1)")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("resonance", help="stratify P(Z_p^n) by rank of the linearized Alexander matrix")
    _add_inputs(sp)
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--points", action="store_true", help="list the points of every stratum")
    sp.add_argument("--forms", help="file of linear forms; report stratum points off all of them")
    sp.set_defaults(func=cmd_resonance)

    sp = sub.add_parser("nu", help="count index-p kernels of G/G_q by abelianization")
    _add_inputs(sp)
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--q", type=_stage, default=3)
    sp.set_defaults(func=cmd_nu)

    sp = sub.add_parser("ziegler", help="Z_(0,2) cokernel invariant of a 2-arrangement")
    _add_inputs(sp, ("tau", "linking", "equations", "input"))
    sp.set_defaults(func=cmd_ziegler)

    sp = sub.add_parser("table1", help="nu_{3,d} table of the bundled horizontal arrangements")
    sp.set_defaults(func=cmd_table1)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("suite", nargs="?", default="all", choices=["all", *harness.SUITES])
    sp.set_defaults(func=cmd_verify)

    for s in sub.choices.values():
        s.add_argument("--threads", type=int, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.threads is not None:
        if args.threads < 1:
            print("error: --threads must be positive", file=sys.stderr)
            return EXIT_INPUT
        os.environ[THREADS_ENV] = str(args.threads)
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
