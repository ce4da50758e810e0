"""Command-line interface: list experiments, run them to CSV, extract SNR gains."""

import argparse
import sys

from .baselines import SchemeId
from .errors import ConfigError
from .experiments import curve_from_samples, list_experiments, read_csv, run_to_csv, snr_gain


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; bad arguments are
    # configuration errors here, which must map to exit code 1
    def error(self, message):
        raise ConfigError(message)


def _build_parser():
    parser = _Parser(prog="polarsim", description="Polarized-link Monte-Carlo simulations")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="print the experiment catalog")

    run = sub.add_parser("run", help="run an experiment and write its CSV")
    run.add_argument("experiment", help="catalog experiment id or a JSON config file")
    run.add_argument("--out", default=".", help="output directory (default: current)")
    run.add_argument("--seed", type=int, default=None, help="master seed override")
    run.add_argument("--realizations", type=int, default=None, help="realization count override")
    run.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="config field override, may be repeated",
    )

    gain = sub.add_parser("gain", help="SNR gain of scheme a over scheme b at a target rate")
    gain.add_argument("csv", help="results CSV produced by 'run'")
    gain.add_argument("--scheme-a", required=True, help="scheme id (pf, dpa, spra, paa, cpa, lpa)")
    gain.add_argument("--scheme-b", required=True)
    gain.add_argument("--rate", type=float, required=True, help="target rate in bits/s/Hz")
    gain.add_argument("--experiment-a", default=None, help="panel name when the CSV holds several")
    gain.add_argument("--experiment-b", default=None)
    return parser


def _parse_overrides(pairs):
    out = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        out[key] = value
    return out


def _scheme(label):
    try:
        return SchemeId(label)
    except ValueError:
        raise ConfigError(f"unknown scheme {label!r}") from None


def _cmd_list(_args):
    for experiment_id in list_experiments():
        print(experiment_id)
    return 0


def _cmd_run(args):
    path = run_to_csv(
        args.experiment,
        args.out,
        seed=args.seed,
        realizations=args.realizations,
        overrides=_parse_overrides(args.override),
    )
    print(path)
    return 0


def _cmd_gain(args):
    samples = read_csv(args.csv)
    curve_a = curve_from_samples(samples, _scheme(args.scheme_a), args.experiment_a)
    curve_b = curve_from_samples(samples, _scheme(args.scheme_b), args.experiment_b)
    print(format(snr_gain(curve_a, curve_b, args.rate), ".9g"))
    return 0


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        handler = {"list": _cmd_list, "run": _cmd_run, "gain": _cmd_gain}[args.command]
        return handler(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # covers ConfigError and the other input/parameter error types
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
