# cli.py
# Command-line front end: `uv run main.py <command> ...`
import argparse
import json
import logging
import os
import sys

from datum_core import (
    MalformedDatumError,
    dump,
    load,
    monomial_ideal,
    to_dot,
    to_json,
    validate,
)
from invariants import summarize, summary_to_dict
from lct import BudgetExceededError, find_closure_power, lct_datum, lct_lp
from multiplicity import OracleBudget, mult_exact, mult_lower, mult_oracle, mult_upper
from settings import DEFAULT_K_MAX, DEFAULT_MAX_RATIO, DEFAULT_N_MAX, DEFAULT_POINT_CEILING, LOG_FORMAT
from verify import EnumerationBudget, enumerate_dimension, jsonl_path, run_suite, write_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class CliError(Exception):
    """Reported on stderr; the command exits with EXIT_FAIL."""


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _ratio(text):
    value = _positive_int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"max ratio must be at least 2, got {text!r}")
    return value


def _report_path(text):
    if os.path.splitext(text)[1].lower() == ".jsonl":
        raise argparse.ArgumentTypeError(f"report path {text!r} would collide with its .jsonl records file")
    return text


def _emit(args, payload, lines):
    """JSON on stdout with --json, human lines otherwise; never both."""
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _datum_line(d):
    return f"n={d.n} " + " ".join(f"{s.label}:{s.weight}" for s in d.sets)


def _read(path):
    try:
        return load(path)
    except FileNotFoundError:
        raise CliError(f"file not found: {path}")
    except MalformedDatumError as e:
        raise CliError(f"malformed datum in {path}: {e}")


def _load_valid(path):
    d = _read(path)
    report = validate(d)
    if not report.valid:
        lines = [f"invalid datum in {path}:"]
        lines += [f"  {v.kind}: {v.message}" for v in report.violations]
        raise CliError("\n".join(lines))
    return d


def _oracle_budget(args):
    return OracleBudget(k_max=args.k_max, point_ceiling=args.point_ceiling)


# ---------------------------------------------------------------- commands

def cmd_validate(args):
    d = _read(args.file)
    report = validate(d)
    payload = {
        "valid": report.valid,
        "violations": [
            {"kind": v.kind, "message": v.message, "sets": [list(s) for s in v.sets]}
            for v in report.violations
        ],
    }
    lines = ["valid"] if report.valid else [f"{v.kind}: {v.message}" for v in report.violations]
    _emit(args, payload, lines)
    return EXIT_OK if report.valid else EXIT_FAIL


def cmd_info(args):
    d = _load_valid(args.file)
    s = summarize(d)
    result = mult_exact(d)
    lower, upper = mult_lower(d), mult_upper(d)
    payload = summary_to_dict(s)
    payload["multiplicity"] = result.to_dict()
    payload["bounds"] = {"lower": str(lower), "upper": str(upper)}
    e_text = f"{result.value} (exact)" if result.exact else f"[{result.lower}, {result.upper}] (interval)"
    lines = [
        f"datum: {_datum_line(d)}",
        f"n: {s.n}",
        f"emb: {s.emb}",
        f"lct: {s.lct} (lp {s.lct_lp})",
        f"|G|: {s.group_order} (lattice {s.group_order_oracle})",
        f"m(D): {s.m_of_D}",
        "alpha: " + ", ".join(f"{k}={v}" for k, v in s.alpha.items()),
        "beta: " + ", ".join(f"{k}={v}" for k, v in s.beta.items()),
        f"alpha product: {s.alpha_product}",
        f"closure bound: {s.closure_bound}",
        f"e: {e_text}",
        f"bounds: [{lower}, {upper}]",
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_lct(args):
    d = _load_valid(args.file)
    payload, lines = {}, []
    if args.method in ("recursion", "both"):
        payload["recursion"] = str(lct_datum(d))
        lines.append(f"lct (recursion): {payload['recursion']}")
    if args.method in ("lp", "both"):
        payload["lp"] = str(lct_lp(monomial_ideal(d)))
        lines.append(f"lct (lp): {payload['lp']}")
    _emit(args, payload, lines)
    if args.method == "both" and payload["recursion"] != payload["lp"]:
        logger.error("recursion and LP disagree on %s", to_json(d))
        return EXIT_FAIL
    return EXIT_OK


def cmd_mult(args):
    d = _load_valid(args.file)
    if args.method == "oracle":
        table = mult_oracle(d, _oracle_budget(args))
        payload = table.to_dict()
        lines = [f"l(R/m^k), k=1..{len(table.values)}: {list(table.values)}"]
        lines.append(f"e: {table.e}" if table.stabilized else "e: not stabilized within budget")
    elif args.method == "bounds":
        lower, upper = mult_lower(d), mult_upper(d)
        payload = {"lower": str(lower), "upper": str(upper)}
        lines = [f"lower: {lower}", f"upper: {upper}"]
    else:
        result = mult_exact(d)
        payload = result.to_dict()
        if result.exact:
            lines = [f"e: {result.value} (exact)"]
        else:
            lines = [f"e: in [{result.lower}, {result.upper}] (interval)"]
        lines += [f"  {t.rule} {t.label}: {t.tag}" for t in result.trace]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_closure(args):
    d = _load_valid(args.file)
    try:
        q = find_closure_power(d)
    except BudgetExceededError as e:
        raise CliError(str(e))
    payload = {"q": q, "lct": str(lct_datum(d))}
    lines = [f"closure of a_D = (x_1,...,x_n)^{q}" if q is not None else "closure of a_D is not a power of the maximal ideal"]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_dot(args):
    d = _load_valid(args.file)
    sys.stdout.write(to_dot(d))
    return EXIT_OK


def cmd_enumerate(args):
    data = enumerate_dimension(args.n, args.max_ratio)
    logger.info("%d classes in dimension %d with ratio <= %d", len(data), args.n, args.max_ratio)
    if args.out_dir:
        try:
            os.makedirs(args.out_dir, exist_ok=True)
            for k, d in enumerate(data, start=1):
                dump(d, os.path.join(args.out_dir, f"n{args.n}_r{args.max_ratio}_{k:03d}.json"))
        except OSError as e:
            raise CliError(f"cannot write data to {args.out_dir}: {e}")
        logger.info("wrote %d files to %s", len(data), args.out_dir)
    if args.jsonl or args.json:
        for d in data:
            print(to_json(d))
    else:
        for d in data:
            print(_datum_line(d))
    return EXIT_OK


def cmd_verify(args):
    budget = EnumerationBudget(args.n_max, args.max_ratio, _oracle_budget(args))
    report = run_suite(budget, jobs=args.jobs)
    summary = report.summary()
    if args.report:
        try:
            write_report(report, args.report)
        except OSError as e:
            raise CliError(f"cannot write report {args.report}: {e}")
        logger.info("report written to %s and %s", args.report, jsonl_path(args.report))
    lines = [f"data: {summary['data']}  failed: {summary['failed_records']}  skips: {summary['skips']}"]
    for check, t in sorted(summary["tallies"].items(), key=lambda kv: int(kv[0][1:])):
        lines.append(f"  {check:>4}: pass {t['pass']:5d}  fail {t['fail']:3d}  skip {t['skip']:4d}")
    for lemma in report.lemmas:
        lines.append(f"  lemma {lemma.name}: {lemma.points} points, {len(lemma.failures)} failures")
    for n, entry in sorted(report.completeness.items()):
        lines.append(f"  n={n}: {entry['labeled']} labeled -> {entry['classes']} classes, matches={entry['matches']}")
    lines.append("ok" if report.ok else "FAILED")
    _emit(args, summary, lines)
    return EXIT_OK if report.ok else EXIT_FAIL


# ---------------------------------------------------------------- parser

def build_parser():
    logs = argparse.ArgumentParser(add_help=False)
    logs.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")

    common = argparse.ArgumentParser(add_help=False, parents=[logs])
    common.add_argument("--json", action="store_true", help="machine-readable output on stdout")

    oracle = argparse.ArgumentParser(add_help=False)
    oracle.add_argument("--k-max", type=_positive_int, default=DEFAULT_K_MAX)
    oracle.add_argument("--point-ceiling", type=_positive_int, default=DEFAULT_POINT_CEILING)

    parser = argparse.ArgumentParser(prog="special-datum", description="Invariants and multiplicity bounds of special data")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the axioms")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("info", parents=[common], help="all invariants")
    p.add_argument("file")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("lct", parents=[common], help="log canonical threshold")
    p.add_argument("file")
    p.add_argument("--method", choices=["recursion", "lp", "both"], default="recursion")
    p.set_defaults(func=cmd_lct)

    p = sub.add_parser("mult", parents=[common, oracle], help="Hilbert-Samuel multiplicity")
    p.add_argument("file")
    p.add_argument("--method", choices=["auto", "oracle", "bounds"], default="auto")
    p.set_defaults(func=cmd_mult)

    p = sub.add_parser("closure", parents=[common], help="integral closure power test")
    p.add_argument("file")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("dot", parents=[logs], help="Graphviz rendering of the forest (always DOT)")
    p.add_argument("file")
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("enumerate", parents=[common], help="one datum per isomorphism class")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--max-ratio", type=_ratio, default=DEFAULT_MAX_RATIO)
    p.add_argument("--jsonl", action="store_true", help="one datum JSON per line")
    p.add_argument("--out-dir", metavar="DIR", help="also write one JSON file per class into DIR")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", parents=[common, oracle], help="run every check over the enumeration")
    p.add_argument("--n-max", type=_positive_int, default=DEFAULT_N_MAX)
    p.add_argument("--max-ratio", type=_ratio, default=DEFAULT_MAX_RATIO)
    p.add_argument("--report", type=_report_path, metavar="PATH", help="summary JSON here, records in PATH with .jsonl suffix")
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.set_defaults(func=cmd_verify)
    return parser


def configure_logging(verbosity):
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    configure_logging(args.verbose)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL
