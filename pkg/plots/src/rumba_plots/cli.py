"""plot-metrics: render the four-panel figure from metrics.csv files."""

from __future__ import annotations

import argparse
import sys

from .metrics import MetricsFrame, SchemaError
from .render import render_four_panel, save_figure


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot-metrics",
        description="Render four diagnostic panels per metrics.csv (one row each)")
    parser.add_argument("metrics", nargs="+", help="metrics.csv files")
    parser.add_argument("-o", "--output", required=True, help="output image path")
    parser.add_argument("--title", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        frames = [MetricsFrame.load(p) for p in args.metrics]
    except (SchemaError, OSError) as exc:
        # Fail before any rendering: no partial image is ever written.
        print(f"error: {exc}", file=sys.stderr)
        return 2
    fig = render_four_panel(frames, title=args.title)
    save_figure(fig, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
