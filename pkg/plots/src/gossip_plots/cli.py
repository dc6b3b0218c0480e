"""plot-speedup: turn a speedup CSV into a figure."""
from __future__ import annotations

import argparse
import sys

from .render import render
from .series import SchemaError


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-speedup",
        description="Plot measured gossip iterations per block size against "
                    "the ell/tau baseline",
    )
    parser.add_argument("csv", help="speedup CSV produced by the experiment runner")
    parser.add_argument("out", help="output image path")
    parser.add_argument("--svg", action="store_true", help="write SVG instead of PNG")
    parser.add_argument("--title", help="figure title (default: CSV file name)")
    args = parser.parse_args(argv)
    try:
        render(args.csv, args.out, svg=args.svg, title=args.title)
    except (SchemaError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
