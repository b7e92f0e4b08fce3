"""figtool <figure-id> --data <csv> [--data <csv> ...] --out <path>
                      [--dump-plotted <csv>]

Renders one of the known figures from micromaser CSV files.  Exit codes:
0 success, 1 bad or missing input data, 2 bad flags.
"""

import argparse
import sys

from . import __version__
from .figures import RECIPES, DataError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figtool",
        description="Regenerate micromaser figures from CSV sweeps")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("figure_id", choices=sorted(RECIPES),
                        help="which figure to render")
    parser.add_argument("--data", action="append", required=True,
                        metavar="CSV", help="input CSV, once per curve "
                        "(order: curve a, b, c)")
    parser.add_argument("--out", required=True,
                        help="output image path (.svg default, .png works)")
    parser.add_argument("--dump-plotted", dest="dump_plotted", default=None,
                        metavar="CSV",
                        help="also write the shifted series as curve,x,y")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    recipe = RECIPES[args.figure_id]
    try:
        render(recipe, args.data, args.out, args.dump_plotted)
    except DataError as exc:
        print(f"figtool: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
