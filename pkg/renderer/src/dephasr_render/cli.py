"""dephasr-render --figure N --in <csv...> --out <png>

Exit codes: 0 success, 2 schema/validation error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, SchemaError, ValidationError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dephasr-render",
        description="Render dephasr trajectory CSV files into figure images.")
    parser.add_argument("--figure", type=int, required=True, choices=(1, 2, 3),
                        help="figure preset to draw")
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="CSV", help="input trajectory CSV file(s)")
    parser.add_argument("--out", required=True, metavar="PNG",
                        help="output image path")
    parser.add_argument("--xlabel", default=None)
    parser.add_argument("--ylabel", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = PlotSpec(inputs=tuple(args.inputs), figure_id=args.figure,
                        output=args.out, xlabel=args.xlabel, ylabel=args.ylabel)
        render(spec)
    except (SchemaError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
