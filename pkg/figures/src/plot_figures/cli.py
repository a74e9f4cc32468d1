"""Command line wrapper: plot_figures --csv results.csv --kind channel-mse
--out fig1.svg [--estimators mips,pml,lmmse] [--l 0,5]."""

import argparse
import sys

from .render import KIND_COLUMNS, PlotSpec, RenderError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot_figures",
        description="Render MSE-versus-SNR figures from sweep result CSVs.",
    )
    parser.add_argument(
        "--csv",
        action="append",
        required=True,
        metavar="PATH",
        help="input CSV; repeat to concatenate several sweeps",
    )
    parser.add_argument(
        "--kind",
        required=True,
        choices=sorted(KIND_COLUMNS),
        help="which MSE column to plot",
    )
    parser.add_argument(
        "--out",
        required=True,
        metavar="PATH",
        help="output image (.svg or .png)",
    )
    parser.add_argument(
        "--estimators",
        metavar="NAMES",
        help="comma-separated estimator filter, e.g. mips,pml",
    )
    parser.add_argument(
        "--l",
        metavar="VALUES",
        help="comma-separated filter on the L column, e.g. 0,5",
    )
    return parser


def _spec_from_args(args) -> PlotSpec:
    estimators = None
    if args.estimators:
        estimators = tuple(
            name.strip() for name in args.estimators.split(",") if name.strip()
        )
    l_values = None
    if args.l:
        try:
            l_values = tuple(int(v) for v in args.l.split(","))
        except ValueError:
            raise RenderError("--l expects comma-separated integers")
    return PlotSpec(
        csv_paths=tuple(args.csv),
        kind=args.kind,
        out=args.out,
        estimators=estimators,
        l_values=l_values,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        render(_spec_from_args(args))
    except RenderError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    print("wrote %s" % args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
