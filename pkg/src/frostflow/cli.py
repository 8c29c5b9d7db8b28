"""Command-line front end.

Exit codes: 0 success, 1 a requested check failed, 2 an input violates an
invariant, 3 the verb needed a measure but got a refutation, 4 malformed
input file, 5 usage error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from typing import Sequence

from . import dimension, io
from .dyadic import format_rat, interval_of_word, parse_rat, pow2, words_at_depth
from .flows import GREEDY, PROPORTIONAL, Found, max_flow_iterate, truncated_max_flow
from .frostman import FrostmanTask, frost, strict_frost
from .measures import (
    AdditivityError,
    concentrate,
    frostman_check,
    measure_from_overt,
)
from .perfectcore import audit_isolation, perfect_core
from .sets import CantorScheme

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVARIANT = 2
EXIT_REFUTED = 3
EXIT_FORMAT = 4
EXIT_USAGE = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return parse_rat(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")


def _ratio_list(text: str) -> list[Fraction]:
    return [_rational(t) for t in text.split(",") if t]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def _emit(doc, out: str | None) -> None:
    if out:
        io.write_json(out, doc)
    else:
        sys.stdout.write(io.dumps(doc))


def _scheme(args) -> CantorScheme:
    if args.ratios:
        return CantorScheme(args.ratios)
    if args.set:
        doc = io.read_json(args.set)
        if doc.get("kind") != "cantor":
            raise UsageError("this verb needs a set of kind 'cantor'")
        return io.scheme_from_json(doc)
    raise UsageError("give --ratios or --set")


def _stage(args) -> int:
    return args.depth if args.stage is None else args.stage


# -- verbs ---------------------------------------------------------------------------

def cmd_cantor(args) -> int:
    scheme = _scheme(args)
    rows = [
        [w, format_rat(c.lo), format_rat(c.hi)]
        for w, c in ((w, scheme.cell(w)) for w in _level_words(args.level))
    ]
    _emit({"ratios": [format_rat(scheme.ratio(i)) for i in range(max(args.level, 1))], "level": args.level, "cells": rows}, args.out)
    return EXIT_OK


def _level_words(n: int):
    if n < 0:
        raise UsageError("level must be nonnegative")
    return words_at_depth(n)


def cmd_cantor_dim(args) -> int:
    scheme = _scheme(args)
    terms, tails = dimension.cantor_dim_partial(scheme, args.n)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["level", "ratio", "term_approx", "tail_min_approx"])
    for i, (a, b) in enumerate(zip(terms, tails)):
        writer.writerow([i, format_rat(scheme.ratio(i)), f"{a:.12f}", f"{b:.12f}"])
    return EXIT_OK


def cmd_content(args) -> int:
    A = io.set_from_json(io.read_json(args.set))
    print(format_rat(dimension.dyadic_content(A.closed, args.s, args.depth, _stage(args))))
    return EXIT_OK


def cmd_dim(args) -> int:
    A = io.set_from_json(io.read_json(args.set)).closed
    stage = _stage(args)
    est = dimension.dim_interval(A, args.depth, stage, args.grid, args.lo_threshold, args.hi_threshold)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["s", "content"])
            for s, c in dimension.content_table(A, args.depth, stage, args.grid):
                writer.writerow([format_rat(s), format_rat(c)])
    _emit({"lo": format_rat(est.lo), "hi": format_rat(est.hi), "depth": est.depth, "stage": est.stage}, None)
    return EXIT_OK


def cmd_frost(args) -> int:
    A = io.set_from_json(io.read_json(args.set))
    task = FrostmanTask(A.closed, args.s, args.depth, _stage(args), args.k)
    result = frost(task)
    cert = {"s": format_rat(task.s), "depth": task.depth, "k": task.k, "stage": task.stage}
    if isinstance(result, Found):
        cert.update(verdict="found", bound=format_rat(pow2(-task.k)))
        doc = io.measure_to_json(result.witness)
        doc["certificate"] = cert
        _emit(doc, args.out)
        return EXIT_OK
    cert.update(verdict="refuted", bound=format_rat(result.bound))
    _emit({"certificate": cert}, args.out)
    print(f"refuted: max flow {format_rat(result.bound)} < 2^-{task.k}", file=sys.stderr)
    return EXIT_REFUTED


def cmd_strict_frost(args) -> int:
    mu = strict_frost(_scheme(args), args.s, args.depth)
    doc = io.measure_to_json(mu)
    doc["certificate"] = {
        "s": format_rat(args.s), "depth": args.depth, "k": None,
        "verdict": "found", "bound": format_rat(mu.total),
    }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_support(args) -> int:
    mu = io.measure_from_json(io.read_json(args.measure))
    words = [w for w in sorted(mu.mass, key=lambda w: (len(w), w)) if args.depth is None or len(w) <= args.depth]
    _emit({"kind": "explicit", "excluded": [], "certified": [[0, words]] if words else []}, args.out)
    return EXIT_OK


def cmd_overt_measure(args) -> int:
    A = io.set_from_json(io.read_json(args.set))
    _emit(io.measure_to_json(measure_from_overt(A.overt, args.k)), args.out)
    return EXIT_OK


def cmd_concentrate(args) -> int:
    mu = io.measure_from_json(io.read_json(args.measure))
    nu, k = concentrate(mu)
    doc = io.measure_to_json(nu)
    doc["concentration"] = {"k": k, "scale": format_rat(pow2(-k))}
    _emit(doc, args.out)
    return EXIT_OK


def cmd_perfect_core(args) -> int:
    doc = io.read_json(args.set)
    A = io.set_from_json(doc)
    result = perfect_core(A.closed, args.budget)
    problems = audit_isolation(result, args.audit_depth)
    _emit(io.perfect_core_to_json(doc, result), args.out)
    for p in problems:
        print(p, file=sys.stderr)
    return EXIT_CHECK_FAILED if problems else EXIT_OK


def cmd_maxflow(args) -> int:
    cap = io.capacity_from_json(io.read_json(args.cap))
    if args.iterate is not None:
        a = max_flow_iterate(cap, args.iterate)
        print(format_rat(a.get("", Fraction(0))))
        if args.out:
            io.write_json(args.out, io.tree_to_json(cap.depth, a))
        return EXIT_OK
    value, witness = truncated_max_flow(cap, args.strategy)
    print(format_rat(value))
    if args.out:
        io.write_json(args.out, io.tree_to_json(cap.depth, witness.flow))
    return EXIT_OK


def cmd_check_frostman(args) -> int:
    mu = io.measure_from_json(io.read_json(args.measure))
    bad = frostman_check(mu, args.s, args.depth)
    for w in bad:
        print(f"violation {w or '(root)'}: mass {format_rat(mu[w])} on {interval_of_word(w)}")
    if bad:
        return EXIT_CHECK_FAILED
    print("ok")
    return EXIT_OK


def cmd_shmerkin(args) -> int:
    mu = dimension.shmerkin_measure(args.p, CantorScheme(args.ratios), args.depth)
    if args.out:
        io.write_json(args.out, io.cell_measure_to_json(mu))
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["level", "total"])
    for m in range(args.depth + 1):
        writer.writerow([m, format_rat(mu.level_total(m))])
    return EXIT_OK


def cmd_local_dim(args) -> int:
    if args.measure:
        doc = io.read_json(args.measure)
        mu = io.cell_measure_from_json(doc) if doc.get("kind") == "cell-measure" else io.measure_from_json(doc)
        chain = args.chain
    elif args.p is not None and args.ratios:
        mu = dimension.ShmerkinMeasure(args.p, CantorScheme(args.ratios))
        chain = args.chain
    else:
        raise UsageError("give --measure, or --p with --ratios")
    if chain is None:
        raise UsageError("give --chain")
    ratios = dimension.local_dimension(mu, chain, args.levels)
    out = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["level", "ratio_approx"])
        for m, r in zip(args.levels, ratios):
            writer.writerow([m, f"{r:.12f}"])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="frostflow", description="Exact dyadic flows, Frostman measures and Hausdorff content.")
    sub = parser.add_subparsers(dest="verb", metavar="VERB", parser_class=_Parser)
    sub.required = True

    def verb(name, fn, help):
        p = sub.add_parser(name, help=help, description=help)
        p.set_defaults(fn=fn)
        return p

    def add_scheme(p):
        p.add_argument("--ratios", type=_ratio_list, help="comma-separated ratios d_0,d_1,... (last repeats)")
        p.add_argument("--set", help="set JSON of kind 'cantor' (alternative to --ratios)")

    def add_depth(p, required=True):
        p.add_argument("--depth", type=int, required=required, help="tree depth n")
        p.add_argument("--stage", type=int, help="stage of the set name to read (default: depth)")

    p = verb("cantor", cmd_cantor, "list the level-n cells of a Cantor scheme")
    add_scheme(p)
    p.add_argument("--level", type=int, required=True, help="level n")
    p.add_argument("--out", help="write JSON here instead of stdout")

    p = verb("cantor-dim", cmd_cantor_dim, "per-level dimension terms ln2/ln d_i as CSV")
    add_scheme(p)
    p.add_argument("--n", type=int, required=True, help="number of levels")

    p = verb("content", cmd_content, "dyadic s-content of a set")
    p.add_argument("--set", required=True, help="set JSON")
    p.add_argument("--s", type=_rational, required=True, help="exponent s as p/q")
    add_depth(p)

    p = verb("dim", cmd_dim, "dimension bracket from contents on a grid")
    p.add_argument("--set", required=True, help="set JSON")
    add_depth(p)
    p.add_argument("--grid", type=int, default=8, help="grid size q: exponents 0, 1/q, ..., 1")
    p.add_argument("--lo-threshold", type=_rational, default=Fraction(1, 2), help="content needed for lo (default 1/2)")
    p.add_argument("--hi-threshold", type=_rational, help="fixed content threshold for hi (default: halving test)")
    p.add_argument("--csv", help="also write the (s, content) table here")

    p = verb("frost", cmd_frost, "Frostman measure of mass 2^-k on a closed set, or a refutation")
    p.add_argument("--set", required=True, help="set JSON")
    p.add_argument("--s", type=_rational, required=True, help="exponent s as p/q")
    p.add_argument("--k", type=int, default=1, help="precision: look for total mass 2^-k")
    add_depth(p)
    p.add_argument("--out", help="measure JSON output")

    p = verb("strict-frost", cmd_strict_frost, "Frostman measure with full support on a dyadic Cantor scheme")
    add_scheme(p)
    p.add_argument("--s", type=_rational, required=True, help="exponent s as p/q")
    p.add_argument("--depth", type=int, required=True, help="tree depth n")
    p.add_argument("--out", help="measure JSON output")

    p = verb("support", cmd_support, "overt name of the support of a measure, as set JSON")
    p.add_argument("--measure", required=True, help="measure JSON")
    p.add_argument("--depth", type=int, help="only list words up to this depth")
    p.add_argument("--out", help="set JSON output")

    p = verb("overt-measure", cmd_overt_measure, "measure spread over the words an overt name certifies")
    p.add_argument("--set", required=True, help="set JSON")
    p.add_argument("--k", type=int, required=True, help="stage and depth k")
    p.add_argument("--out", help="measure JSON output")

    p = verb("concentrate", cmd_concentrate, "concentrated measure below the given one")
    p.add_argument("--measure", required=True, help="measure JSON")
    p.add_argument("--out", help="measure JSON output")

    p = verb("perfect-core", cmd_perfect_core, "closed-and-overt superset with the same perfect kernel")
    p.add_argument("--set", required=True, help="set JSON (its closed part is used)")
    p.add_argument("--budget", type=int, required=True, help="number of decision steps")
    p.add_argument("--audit-depth", type=int, default=10, help="depth for the isolation audit")
    p.add_argument("--out", help="set JSON output")

    p = verb("maxflow", cmd_maxflow, "truncated max flow of a capacity tree")
    p.add_argument("--cap", required=True, help="capacity JSON")
    p.add_argument("--strategy", choices=[GREEDY, PROPORTIONAL], default=GREEDY, help="witness splitting rule")
    p.add_argument("--iterate", type=int, help="run this many min-iterations instead of the DP")
    p.add_argument("--out", help="write the witness flow (or the iterate) here")

    p = verb("check-frostman", cmd_check_frostman, "audit mass(w) <= 2^-ceil(s|w|)")
    p.add_argument("--measure", required=True, help="measure JSON")
    p.add_argument("--s", type=_rational, required=True, help="exponent s as p/q")
    p.add_argument("--depth", type=int, help="audit depth (default: the measure's depth)")

    p = verb("shmerkin", cmd_shmerkin, "fiber measure over a bit sequence, level totals as CSV")
    p.add_argument("--p", required=True, help="bits p(1)p(2)... as a 0/1 string")
    p.add_argument("--ratios", type=_ratio_list, required=True, help="comma-separated ratios")
    p.add_argument("--depth", type=int, required=True, help="materialization depth")
    p.add_argument("--out", help="cell-measure JSON output")

    p = verb("local-dim", cmd_local_dim, "log-mass over log-length along a chain, as CSV")
    p.add_argument("--measure", help="measure or cell-measure JSON")
    p.add_argument("--p", help="bits for the closed-form fiber measure (with --ratios)")
    p.add_argument("--ratios", type=_ratio_list, help="comma-separated ratios for --p")
    p.add_argument("--chain", help="word whose prefixes are evaluated")
    p.add_argument("--levels", type=_int_list, required=True, help="comma-separated levels")
    p.add_argument("--csv", help="write CSV here instead of stdout")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"frostflow: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except io.FormatError as exc:
        print(f"frostflow: malformed input: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"frostflow: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except AdditivityError as exc:
        print(f"frostflow: invariant violated at word {exc.word!r}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, ArithmeticError) as exc:
        print(f"frostflow: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
