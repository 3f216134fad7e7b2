"""Command-line entry point: ``primedigits <command> ...``.

Every command prints one JSON envelope

    {"command": ..., "parameters": {...}, "results": {...}, "runtime_ms": N}

with sorted keys, or CSV with ``--format csv``. Exit status: 0 success,
1 domain error, 2 size cap exceeded, 64 usage error. Big counts are written
as decimal strings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import chernoff
from .acceptance import DEFAULT_SEED, run_all
from .construction import (
    build_instance,
    copeland_erdos_average,
    problem_one,
    run_experiment,
    survey_tail,
)
from .digits import build_distribution, digit_count, digit_sum
from .errors import ConvergenceError, DomainError, ResourceLimitError
from .sieve import DEFAULT_SEGMENT_SIZE, PrimeRange, count_and_histogram, empirical_short_interval_density, iter_segments

EXIT_OK, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_USAGE = 0, 1, 2, 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _int(text: str) -> int:
    """Integers, also written as 2**34 or 1e9."""
    text = text.strip()
    if "**" in text:
        b, e = text.split("**", 1)
        return int(b) ** int(e)
    if "e" in text.lower():
        mant, exp = text.lower().split("e", 1)
        if "." not in mant:
            return int(mant) * 10 ** int(exp)
    return int(text)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    p.add_argument("--no-timing", action="store_true", default=argparse.SUPPRESS,
                   help="report runtime_ms as 0 so output is byte-identical across runs")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="primedigits", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--no-timing", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("digits", help="digit sums and exact distributions").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )
    p = d.add_parser("sum", parents=[common])
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--base", type=int, default=2)
    p = d.add_parser("count", parents=[common])
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--base", type=int, default=2)
    p = d.add_parser("dist", parents=[common])
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--digits", type=int, required=True)
    p = d.add_parser("tail", parents=[common])
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--digits", type=int, required=True)
    p.add_argument("--threshold", type=float, required=True)

    c = sub.add_parser("chernoff", help="rate function and tail bounds").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )
    p = c.add_parser("rate", parents=[common])
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--gamma", type=float, required=True)
    p = c.add_parser("bounds", parents=[common])
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--digits", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)

    s = sub.add_parser("sieve", help="segmented prime sieve").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )
    p = s.add_parser("range", parents=[common])
    p.add_argument("--lo", type=_int, required=True)
    p.add_argument("--hi", type=_int, required=True)
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--emit", choices=("count", "hist", "primes"), default="count")
    p.add_argument("--segment-size", type=_int, default=DEFAULT_SEGMENT_SIZE)
    p = s.add_parser("density", parents=[common])
    p.add_argument("--x", type=_int, required=True)
    p.add_argument("--theta", type=float, default=0.525)
    p.add_argument("--segment-size", type=_int, default=DEFAULT_SEGMENT_SIZE)

    t = sub.add_parser("theorem", help="run the digit-constrained interval construction").add_subparsers(
        dest="side", required=True, parser_class=_Parser
    )
    for side, name in (("upper", "--alpha"), ("lower", "--beta")):
        p = t.add_parser(side, parents=[common])
        p.add_argument("--base", type=int, default=2)
        p.add_argument("--x", type=_int, required=True)
        p.add_argument(name, dest="target", type=float, required=True)
        p.add_argument("--margin", type=float, default=0.0)
        p.add_argument("--segment-size", type=_int, default=DEFAULT_SEGMENT_SIZE)

    p = sub.add_parser("survey", parents=[common], help="count all primes <= X past the threshold")
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--limit", type=_int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--segment-size", type=_int, default=DEFAULT_SEGMENT_SIZE)

    p = sub.add_parser("problem-one", parents=[common], help="primes with twice as many ones as zeros")
    p.add_argument("--limit", type=_int, required=True)
    p.add_argument("--segment-size", type=_int, default=DEFAULT_SEGMENT_SIZE)

    p = sub.add_parser("avg", parents=[common], help="mean digit sum of primes <= X")
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--limit", type=_int, required=True)
    p.add_argument("--segment-size", type=_int, default=DEFAULT_SEGMENT_SIZE)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance criteria")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return parser


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, dict):
            out.update(_flatten(v, f"{prefix}{k}."))
        else:
            out[f"{prefix}{k}"] = v
    return out


def _csv_rows(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _record_csv(results: dict) -> str:
    flat = _flatten(results)
    keys = sorted(flat)
    return _csv_rows(keys, [[flat[k] for k in keys]])


def _run(args) -> tuple[dict, str | None]:
    """Execute a command; returns (results payload, raw CSV text or None)."""
    cmd = args.command
    if cmd == "digits":
        if args.action == "sum":
            return {"digit_sum": digit_sum(args.n, args.base)}, None
        if args.action == "count":
            return {"digit_count": digit_count(args.n, args.base)}, None
        dist = build_distribution(args.base, args.digits)
        if args.action == "dist":
            return dist.to_dict(), dist.to_csv()
        return {
            "tail_count": str(dist.tail_count(args.threshold)),
            "head_count": str(dist.head_count(args.threshold)),
            "total": str(dist.total),
        }, None

    if cmd == "chernoff":
        if args.action == "rate":
            t_star, rate_star = chernoff.optimize_rate(args.base, args.gamma)
            return {"t_star": t_star, "rate_star": rate_star}, None
        res = {
            "lemma_bound": chernoff.lemma_bound(args.base, args.digits, args.alpha),
            "refined_bound": chernoff.refined_bound(args.base, args.digits, args.alpha),
            "explicit_bound": chernoff.explicit_bound(args.base, args.digits, args.alpha),
        }
        try:
            res["exact_proportion"] = build_distribution(args.base, args.digits).tail_proportion(args.alpha)
        except ResourceLimitError:
            pass
        return res, None

    if cmd == "sieve":
        if args.action == "density":
            ratio = empirical_short_interval_density(args.x, args.theta, args.segment_size)
            return {"ratio": ratio}, None
        rng = PrimeRange(args.lo, args.hi)
        if args.emit == "primes":
            primes = [p for seg in iter_segments(rng, args.segment_size) for p in seg.tolist()]
            return {"count": len(primes), "primes": primes}, "".join(f"{p}\n" for p in primes)
        count, hist = count_and_histogram(rng, args.base, args.segment_size)
        if args.emit == "count":
            return {"count": count}, None
        return {"count": count, "hist": {str(m): c for m, c in sorted(hist.bins.items())}}, hist.to_csv()

    if cmd == "theorem":
        inst = build_instance(args.base, args.x, args.target, args.side, args.margin)
        rec = run_experiment(inst, args.segment_size)
        d = rec.to_dict()
        for key in ("primes_in_interval", "qualifying_primes", "exact_exceptions"):
            d[key] = str(d[key])
        return d, _record_csv(d)

    if cmd == "survey":
        count, bound = survey_tail(args.base, args.limit, args.alpha, args.segment_size)
        d = {"count": str(count), "bound": bound}
        return d, _record_csv(d)

    if cmd == "problem-one":
        r = problem_one(args.limit, args.segment_size)
        d = {"count": str(r.count), "strict": str(r.strict), "log_form": str(r.log_form)}
        return d, _record_csv(d)

    if cmd == "avg":
        mean, ref = copeland_erdos_average(args.base, args.limit, args.segment_size)
        d = {"mean": mean, "reference": ref}
        return d, _record_csv(d)

    if cmd == "verify":
        results = run_all(args.level, args.seed)
        for r in results:
            print(r.line(), file=sys.stderr)
        rows = [r.to_dict() for r in results]
        d = {"all_passed": all(r.passed for r in results), "criteria": rows}
        keys = list(rows[0])
        return d, _csv_rows(keys, [[row[k] for k in keys] for row in rows])

    raise _UsageError(f"unknown command {cmd!r}")


def _parameters(args) -> dict:
    skip = {"format", "no_timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def envelope(command: str, parameters: dict, results: dict, runtime_ms: int) -> str:
    return json.dumps(
        {"command": command, "parameters": parameters, "results": results, "runtime_ms": runtime_ms},
        sort_keys=True,
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return int(e.code or 0)

    command = " ".join(
        str(v) for v in (args.command, getattr(args, "action", None), getattr(args, "side", None)) if v
    )
    t0 = time.perf_counter()
    try:
        results, raw_csv = _run(args)
    except (DomainError, ConvergenceError, OverflowError) as e:
        print(f"domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    runtime_ms = 0 if args.no_timing else int(round((time.perf_counter() - t0) * 1000))

    if args.format == "csv" and raw_csv is not None:
        sys.stdout.write(raw_csv)
    else:
        print(envelope(command, _parameters(args), results, runtime_ms))
    if args.command == "verify" and not results["all_passed"]:
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
