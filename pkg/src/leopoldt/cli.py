"""Command-line front end.

Exit codes: 0 success, 1 verification failure or incomplete result, 2 invalid
input.  Results go to standard output; diagnostics go to standard error, with
verbosity set by LEOPOLDT_LOG (error, info or debug).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .arith import odd_primes_upto
from .chars import ThetaChar, char_from_index, conductor, enumerate_chars, parse_char_address
from .errors import HypothesisViolated, LeopoldtError, PartialResult
from .independence import truncated_independence
from .iwasawa import fw_expectation, iwasawa_series, lambda_minus, make_context
from .verify import SUITES, Filters, run_suite

log = logging.getLogger("leopoldt")

REPORTING_SUITES = {"matrix", "independence"}


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}") from exc


# -- compute-f -------------------------------------------------------------------------

def cmd_compute_f(args) -> int:
    ictx = make_context(args.p, args.d, args.level, f=args.field_f)
    d, index = parse_char_address(args.chi)
    if d != args.d:
        raise LeopoldtError(f"character modulus {d} differs from --d {args.d}")
    chi = char_from_index(d, index, ictx.ctx)
    if conductor(chi) != d:
        raise LeopoldtError(f"character index {index} has conductor {conductor(chi)}, not {d}")
    s = iwasawa_series(ThetaChar(chi, args.j), ictx)
    _emit(s.to_json())
    return 0


# -- lambda sweep ----------------------------------------------------------------------

def _lambda_row(p: int, cap: int):
    expectation = str(fw_expectation(p))
    try:
        total, values = lambda_minus(p, cap, detail=True)
    except PartialResult as exc:
        log.error("p=%d: %s", p, exc)
        return [p, "NA", "NA", expectation], False
    return [p, total, sum(1 for v in values.values() if v > 0), expectation], True


def cmd_lambda(args) -> int:
    primes = odd_primes_upto(args.pmax)
    if args.jobs > 1 and len(primes) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_lambda_row, primes, [args.cap] * len(primes)))
    else:
        results = [_lambda_row(p, args.cap) for p in primes]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "lambda_minus", "num_positive", "fw_expectation"])
    for row, _ in results:
        writer.writerow(row)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0 if all(ok for _, ok in results) else 1


# -- verify ----------------------------------------------------------------------------

def cmd_verify(args) -> int:
    flt = Filters(p=args.p, d=args.d, seed=args.seed)
    cases = run_suite(args.suite, flt)
    summary = {}
    for c in cases:
        key = f"{c.suite}.{c.name}"
        entry = summary.setdefault(key, {"passed": 0, "failed": 0})
        entry["passed" if c.ok else "failed"] += 1
    out = {
        "suite": args.suite,
        "seed": args.seed,
        "filters": {"p": args.p, "d": args.d},
        "cases": len(cases),
        "failures": [c.to_json() for c in cases if not c.ok],
        "summary": summary,
    }
    if args.records or args.suite in REPORTING_SUITES:
        out["records"] = [c.to_json() for c in cases]
    _emit(out)
    return 0 if not out["failures"] else 1


# -- independence ----------------------------------------------------------------------

def cmd_independence(args) -> int:
    chars = args.chis
    if args.d >= 2 and not chars:
        ictx = make_context(args.p, args.d)
        chars = [c.index for c in enumerate_chars(args.d, ictx.ctx) if conductor(c) == args.d]
    report = truncated_independence(args.p, args.d, chars, args.level, args.exponents)
    _emit(report)
    return 0 if report["verdict"] == "consistent-with-independence" else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leopoldt",
                                     description="Reduced p-adic L-function series and their independence checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute-f", help="reduced Iwasawa series of one twisted character")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--chi", required=True, help='character address "d=<d>,index=<k>"')
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--field-f", type=int, default=None, help="override the extension degree of F_q")
    p.set_defaults(func=cmd_compute_f)

    p = sub.add_parser("lambda", help="sweep lambda^- over odd primes")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--cap", type=int, default=3, help="largest level used in the search")
    p.add_argument("--out", default=None, help="write CSV here instead of standard output")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("verify", help="run a property battery")
    p.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--records", action="store_true", help="include every case record")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("independence", help="truncated rank and relation check")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--chis", type=_parse_int_list, default=None, help="comma-separated character indices")
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--exponents", type=_parse_int_list, default=None)
    p.set_defaults(func=cmd_independence)
    return parser


def _configure_logging() -> None:
    level = os.environ.get("LEOPOLDT_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HypothesisViolated as exc:
        print(f"error: hypothesis violated: {exc}", file=sys.stderr)
        return 2
    except LeopoldtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
