"""Command-line interface: render a results CSV into a figure image."""

import argparse
import sys

from .errors import PlotError
from .figures import default_spec, render
from .reading import read_rows


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; bad arguments are
    # configuration errors here, which must map to exit code 1
    def error(self, message):
        raise PlotError(message)


def _build_parser():
    parser = _Parser(prog="polarplot", description="Render simulation result CSVs")
    sub = parser.add_subparsers(dest="command", required=True)
    rend = sub.add_parser("render", help="draw one figure from a results CSV")
    rend.add_argument("csv", help="results CSV produced by 'polarsim run'")
    rend.add_argument("figure_id", help="experiment id the CSV belongs to")
    rend.add_argument("--out", default=None, help="image path (default: CSV path with .png)")
    return parser


def _cmd_render(args):
    figure_id = args.figure_id
    try:
        spec = default_spec(figure_id, output=args.out)
    except PlotError:
        # custom panel: take the sweep axis from the data itself
        rows = read_rows(args.csv)
        if not rows:
            raise
        spec = default_spec(figure_id, sweep_axis=rows[0].sweep_axis, output=args.out)
    result = render(args.csv, spec)
    print(result.output)
    return 0


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return {"render": _cmd_render}[args.command](args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
