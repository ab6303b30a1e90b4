"""Command-line interface: figures and reports from artifact directories.

Exit codes: 0 success, 1 unusable input artifacts, 2 environment problems
(missing files, unwritable outputs).
"""

from __future__ import annotations

import argparse
import sys

from semslice_analysis.errors import EmptySeries, MissingArtifact, SchemaMismatch
from semslice_analysis.plots import plot_comparison, plot_timeline
from semslice_analysis.report import run_report

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_ENV = 2


def cmd_comparison(args: argparse.Namespace) -> int:
    data = plot_comparison(args.dir, args.out)
    print(f"wrote {args.out} ({len(data.policies)} policies)")
    return EXIT_OK


def cmd_timeline(args: argparse.Namespace) -> int:
    data = plot_timeline(args.run, args.out)
    print(f"wrote {args.out} ({len(data.bandwidth_by_slice)} slices, "
          f"{len(data.incident_spans)} incident span(s))")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    print(run_report(args.run), end="")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semslice-analysis",
        description="figures and reports from simulator artifacts")
    sub = parser.add_subparsers(dest="command", required=True)

    p_cmp = sub.add_parser("comparison",
                           help="grouped policy bars from a comparison dir")
    p_cmp.add_argument("--dir", required=True,
                       help="directory containing comparison.csv")
    p_cmp.add_argument("--out", default="comparison.png",
                       help="image path (.png or .svg)")
    p_cmp.set_defaults(func=cmd_comparison)

    p_tl = sub.add_parser("timeline",
                          help="per-slice allocation timeline for one run")
    p_tl.add_argument("--run", required=True, help="one run's artifact dir")
    p_tl.add_argument("--out", default="timeline.png",
                      help="image path (.png or .svg)")
    p_tl.set_defaults(func=cmd_timeline)

    p_rep = sub.add_parser("report", help="print a short run digest")
    p_rep.add_argument("--run", required=True, help="one run's artifact dir")
    p_rep.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MissingArtifact as err:
        print(f"semslice-analysis: {err}", file=sys.stderr)
        return EXIT_ENV
    except (SchemaMismatch, EmptySeries, ValueError) as err:
        print(f"semslice-analysis: {err}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as err:
        print(f"semslice-analysis: {err}", file=sys.stderr)
        return EXIT_ENV


if __name__ == "__main__":
    sys.exit(main())
