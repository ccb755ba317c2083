"""Command-line front end.

Verdict commands print `ZERO` or `NONZERO [witness=v0,v1,...]` followed by
`points_tested=<N>`, and exit 0 for ZERO, 1 for NONZERO, 2 on errors (with a
one-line diagnostic naming any violated bound).  Enumeration commands print
one point per line in decimal canonical representatives; identical
invocations produce byte-identical output.
"""

import argparse
import sys

from .diagonal import blackbox_pit_diagonal, diagonal_to_roabp, parse_diag
from .errors import PitError
from .field import Field
from .generator import gen_eval_all, gen_params_new, hitting_set
from .noncomm import blackbox_pit_ncabp, parse_ncabp
from .pit import (
    blackbox_pit_roabp,
    bruteforce_pit,
    schwartz_zippel,
    whitebox_pit_roabp,
)
from .roabp import parse_roabp, parse_smabp, sm_to_roabp


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _padded(D):
    return 1 << (D - 1).bit_length()


def _print_verdict(verdict):
    if verdict.is_zero:
        print("ZERO")
    elif verdict.witness is not None:
        print("NONZERO witness=" + ",".join(str(v) for v in verdict.witness))
    else:
        print("NONZERO")
    print(f"points_tested={verdict.points_tested}")
    return 0 if verdict.is_zero else 1


def _run_roabp_modes(a, mode, jobs, seed, trials):
    if mode == "blackbox":
        return _print_verdict(blackbox_pit_roabp(a, jobs=jobs))
    if mode == "whitebox":
        return _print_verdict(whitebox_pit_roabp(a))
    if mode == "brute":
        return _print_verdict(bruteforce_pit(a))
    total_degree = a.D * (a.n - 1)
    oracle = lambda pt: a.eval(list(pt))
    return _print_verdict(
        schwartz_zippel(oracle, a.D, total_degree, trials, a.field, seed)
    )


def cmd_roabp_test(args):
    a = parse_roabp(_read(args.file))
    return _run_roabp_modes(a, args.mode, args.jobs, args.seed, args.trials)


def cmd_smabp_test(args):
    a = sm_to_roabp(parse_smabp(_read(args.file)))
    return _run_roabp_modes(a, args.mode, args.jobs, args.seed, args.trials)


def cmd_diag_test(args):
    c = parse_diag(_read(args.file))
    if args.mode == "blackbox":
        return _print_verdict(blackbox_pit_diagonal(c, jobs=args.jobs))
    a = diagonal_to_roabp(c)
    if args.mode == "whitebox":
        return _print_verdict(whitebox_pit_roabp(a))
    return _print_verdict(bruteforce_pit(a))


def cmd_ncabp_test(args):
    a = parse_ncabp(_read(args.file))
    verdict = blackbox_pit_ncabp(a, limit=args.limit)
    if verdict.is_zero:
        print("ZERO")
    else:
        print("NONZERO")
        for i, m in enumerate(verdict.witness):
            print(f"matrix {i}:")
            for row in m:
                print(" ".join(str(v) for v in row))
    print(f"points_tested={verdict.points_tested}")
    return 0 if verdict.is_zero else 1


def cmd_hitting_set(args):
    field = Field(args.p)
    params = gen_params_new(field, _padded(args.D), args.n, args.r)
    hs = hitting_set(params)
    if args.count_only:
        print(hs.count)
        return 0
    stop = hs.count if args.limit is None else min(args.start + args.limit, hs.count)
    for point in hs.iter_points(args.start, stop):
        print(",".join(str(v) for v in point))
    return 0


def cmd_gen_eval(args):
    field = Field(args.p)
    params = gen_params_new(field, _padded(args.D), args.n, args.r)
    alpha = [int(t) for t in args.alpha.split(",")]
    out = gen_eval_all(params, alpha)
    print(",".join(str(v) for v in out))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="roabp-pit",
        description="Deterministic PIT for ROABPs, set-multilinear and "
        "non-commutative ABPs, and (semi-)diagonal depth-4 circuits.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_mode(p, sz=True):
        modes = ["blackbox", "whitebox", "brute"] + (["sz"] if sz else [])
        p.add_argument("--mode", choices=modes, default="blackbox")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--seed", type=int, default=0, help="rng seed for --mode sz")
        p.add_argument("--trials", type=int, default=16, help="trials for --mode sz")

    p = sub.add_parser("roabp-test", help="test an ROABP file for identity zero")
    p.add_argument("file")
    add_mode(p)
    p.set_defaults(fn=cmd_roabp_test)

    p = sub.add_parser("smabp-test", help="Kronecker-reduce an SMABP file, then test")
    p.add_argument("file")
    add_mode(p)
    p.set_defaults(fn=cmd_smabp_test)

    p = sub.add_parser("diag-test", help="test a DIAG circuit file")
    p.add_argument("file")
    add_mode(p, sz=False)
    p.set_defaults(fn=cmd_diag_test)

    p = sub.add_parser("ncabp-test", help="test an NCABP file over staircase matrices")
    p.add_argument("file")
    p.add_argument(
        "--limit", type=int, default=None,
        help="cap the scan; exhausting the cap without a witness is an error",
    )
    p.set_defaults(fn=cmd_ncabp_test)

    p = sub.add_parser("hitting-set", help="enumerate hitting-set points")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--limit", type=int, default=None, help="print at most this many points")
    p.add_argument("--start", type=int, default=0, help="first point index")
    p.set_defaults(fn=cmd_hitting_set)

    p = sub.add_parser("gen-eval", help="evaluate the generator at one seed")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True, help="comma-separated seed coordinates")
    p.set_defaults(fn=cmd_gen_eval)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except PitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
