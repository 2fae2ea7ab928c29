"""Command line entry: render --figure <id> --in <csv> --out <img>."""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURES, PlotError, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render a chart from a burstqec experiment CSV.")
    parser.add_argument("--figure", required=True,
                        help=f"figure id: {', '.join(sorted(FIGURES))}")
    parser.add_argument("--in", dest="csv_path", required=True,
                        help="input CSV path")
    parser.add_argument("--out", dest="out_path", required=True,
                        help="output image path (format from extension)")
    parser.add_argument("--xscale", choices=("linear", "log"))
    parser.add_argument("--yscale", choices=("linear", "log"))
    parser.add_argument("--series", dest="series_column",
                        help="override the series grouping column")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(csv_path=args.csv_path, figure=args.figure,
                    out_path=args.out_path, xscale=args.xscale,
                    yscale=args.yscale, series_column=args.series_column)
    try:
        render(spec)
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
