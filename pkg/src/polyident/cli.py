"""Command-line front end.

Subcommands: ``check``, ``vertices``, ``gen``, ``stats``, ``bench``.  Exit
status 0 means identifiable (or success), 1 not identifiable, 2 an error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import experiments
from .automorphism import SearchBudgetExceeded, TooLarge
from .identifiability import InvalidPolytope, brute_force_identifiability, check_identifiability
from .io import FormatError, hrep_from_json, load_input, load_json, polytope_to_json, write_json
from .linalg import LinalgError
from .polytope import HRepresentation, PolytopeError, enumerate_vertices

log = logging.getLogger("polyident")

EXIT_OK = 0
EXIT_NOT_IDENTIFIABLE = 1
EXIT_ERROR = 2


class UsageError(Exception):
    pass


def _dims(text: str) -> range:
    """``"3..6"`` or ``"4"`` as an inclusive range."""
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None
    if a < 2 or b < a:
        raise argparse.ArgumentTypeError(f"bad dimension range {text!r}")
    return range(a, b + 1)


def _seed(text: str) -> int:
    s = int(text, 0)
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return s


def _emit(args, text: str) -> None:
    if not args.quiet:
        sys.stdout.write(text)


def _format_matrix(m) -> str:
    rows = [[str(x) for x in r] for r in m.to_rows()]
    width = max((len(x) for r in rows for x in r), default=1)
    return "\n".join("  [" + " ".join(x.rjust(width) for x in r) + "]" for r in rows)


def cmd_check(args) -> int:
    obj = load_input(args.input)
    if isinstance(obj, HRepresentation):
        obj = enumerate_vertices(obj, check_bounded_first=True)
    if args.brute_force:
        report = brute_force_identifiability(obj, cap=args.brute_cap)
    else:
        report = check_identifiability(obj)
    lines = ["identifiable" if report.identifiable else "not identifiable"]
    if report.counterexample is not None:
        w = report.counterexample
        lines.append(f"counterexample permutation: {w.perm}")
        lines.append("G =")
        lines.append(_format_matrix(w.linear_map))
    _emit(args, "\n".join(lines) + "\n")
    if args.json_out:
        write_json(args.json_out, report.to_json(timing=False))
    return EXIT_OK if report.identifiable else EXIT_NOT_IDENTIFIABLE


def cmd_vertices(args) -> int:
    h = hrep_from_json(load_json(args.input))
    p = enumerate_vertices(h, check_bounded_first=args.check_bounded, method=args.method)
    write_json(args.output, polytope_to_json(p))
    _emit(args, f"{p.num_vertices} vertices written to {args.output}\n")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    res = experiments.generate_dataset(
        args.dims, args.count, args.seed, args.out_dir, vertex_cap=args.vertex_cap
    )
    stub = {
        "schema_version": experiments.SCHEMA_VERSION,
        "seed": args.seed,
        "dims": [args.dims.start, args.dims.stop - 1],
        "requested": args.count,
        "total": len(res.written),
        "skipped": res.summary.skipped,
        "per_dim": {str(d): t for d, (t, _) in sorted(res.summary.per_dim.items())},
        "skipped_items": res.summary.skipped_items,
    }
    if args.json_out:
        write_json(args.json_out, stub)
    _emit(args, f"wrote {len(res.written)} polytopes to {args.out_dir} ({res.summary.skipped} skipped)\n")
    return EXIT_OK if len(res.written) == args.count else EXIT_ERROR


def cmd_stats(args) -> int:
    summary = experiments.dataset_stats(args.in_dir, workers=args.workers)
    payload = summary.to_json()
    out = args.json_out or args.output
    if out:
        write_json(out, payload)
    frac = "n/a" if summary.fraction is None else f"{summary.fraction:.4f}"
    _emit(args, f"{summary.identifiable}/{summary.total} identifiable (fraction {frac}), {summary.skipped} skipped\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        records = experiments.run_bench(
            args.min_m,
            args.max_m,
            args.trials,
            args.seed,
            dims=args.dims,
            brute_cap=args.brute_cap,
            max_retries=args.max_retries,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = experiments.bench_csv(records)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.output and not args.quiet:
        for (method, m), med in experiments.bench_medians(records).items():
            sys.stdout.write(f"{method:16s} m={m:2d} median {med / 1e6:12.3f} ms\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="master seed (unsigned 64-bit)")
    common.add_argument("--vertex-cap", type=int, default=30, help="skip polytopes with more vertices")
    common.add_argument("--brute-cap", type=int, default=10, help="largest m for brute force")
    common.add_argument("--json-out", metavar="PATH", help="write a JSON report here")
    common.add_argument("--quiet", action="store_true", help="no progress output")
    common.add_argument("--verbose", action="store_true", help="log skipped samples")

    parser = argparse.ArgumentParser(
        prog="polyident", description="Identifiability of polytopes under linear automorphisms."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide identifiability of one polytope")
    p.add_argument("input", help="Polytope or H-representation JSON")
    p.add_argument("--brute-force", action="store_true", help="sweep all m! permutations")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("vertices", parents=[common], help="H-representation to vertex list")
    p.add_argument("input", help="H-representation JSON")
    p.add_argument("output", help="Polytope JSON to write")
    p.add_argument("--check-bounded", action="store_true", help="reject unbounded input up front")
    p.add_argument("--method", choices=("dd", "basis"), default="dd")
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("gen", parents=[common], help="generate a random polytope dataset")
    p.add_argument("--dims", type=_dims, default=range(3, 7), help="dimension range, e.g. 3..6")
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", parents=[common], help="identifiable fraction of a dataset")
    p.add_argument("in_dir")
    p.add_argument("-o", "--output", help="summary JSON to write (same as --json-out)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", parents=[common], help="time both methods against m")
    p.add_argument("--min-m", type=int, default=6)
    p.add_argument("--max-m", type=int, default=11)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--dims", type=_dims, default=range(3, 7))
    p.add_argument("--max-retries", type=int, default=5000)
    p.add_argument("-o", "--output", help="CSV to write (default stdout)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    except (
        OSError,
        FormatError,
        PolytopeError,
        InvalidPolytope,
        LinalgError,
        TooLarge,
        SearchBudgetExceeded,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
