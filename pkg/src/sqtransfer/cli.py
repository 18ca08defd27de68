"""Command-line entry point.

Subcommands: simulate, steady, sweep, reproduce, spectra.  Exit codes: 0 on
success, 2 on configuration errors, 3 on numerical-diagnostic failures.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys

import numpy as np

from .config import parse_config
from .errors import ConfigError, SqTransferError
from .reservoir import OpoParams, lambda_mu, nondegenerate_spectrum, degenerate_spectrum
from .scenarios import FIGURES, SWEEP_KEYS, fmt, run_reproduce, run_simulate, run_steady_state, run_sweep, write_csv

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _split_override(text):
    if "=" not in text:
        raise ConfigError(f"--set expects key=value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), value


def load_config(args):
    text = ""
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    overrides = dict(_split_override(s) for s in args.set or [])
    return parse_config(text, overrides)


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def cmd_simulate(args):
    config = load_config(args)
    with _output(args.out) as out:
        result = run_simulate(config, out)
    return EXIT_NUMERICAL if result.failed else 0


def cmd_steady(args):
    config = load_config(args)
    with _output(args.out) as out:
        run_steady_state(config, out)
    return 0


def cmd_sweep(args):
    config = load_config(args)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse sweep values {args.values!r}", "values") from None
    with _output(args.out) as out:
        run_sweep(config, args.key, values, out, workers=args.workers)
    return 0


def cmd_reproduce(args):
    for path in run_reproduce(args.figure, args.out or ".", workers=args.workers):
        print(path)
    return 0


def cmd_spectra(args):
    try:
        opo = OpoParams(args.kind, args.kappa_c, args.epsilon, args.alpha)
        lam, mu = lambda_mu(opo)
    except SqTransferError as exc:
        raise ConfigError(str(exc)) from None
    w = np.linspace(-args.span * lam, args.span * lam, args.points)
    if args.kind == "degenerate":
        n, m = degenerate_spectrum(w, lam, mu)
    else:
        n, m = nondegenerate_spectrum(w, lam, mu, args.alpha)
    rows = [{"omega_bar": a, "N": b, "M": c} for a, b, c in zip(w, n, m)]
    comments = [f"kind={args.kind} kappa_c={fmt(args.kappa_c)} epsilon={fmt(args.epsilon)} "
                f"alpha={fmt(args.alpha)} lambda={fmt(lam)} mu={fmt(mu)}"]
    with _output(args.out) as out:
        write_csv(out, ("omega_bar", "N", "M"), rows, comments)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sqtransfer", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p):
        p.add_argument("--config", help="key=value (or JSON) config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
        p.add_argument("--out", help="output CSV path (default: stdout)")

    p = sub.add_parser("simulate", help="propagate one scenario, write the trajectory")
    scenario_args(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("steady", help="steady state of one scenario")
    scenario_args(p)
    p.set_defaults(func=cmd_steady)

    p = sub.add_parser("sweep", help="onset time and steady negativity over a parameter")
    scenario_args(p)
    p.add_argument("--key", required=True, choices=SWEEP_KEYS)
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reproduce", help="write the curve family of a figure preset")
    p.add_argument("figure", choices=FIGURES)
    p.add_argument("--out", help="output directory (default: .)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("spectra", help="reservoir N and M versus detuning")
    p.add_argument("--kind", choices=("degenerate", "nondegenerate"), default="degenerate")
    p.add_argument("--kappa-c", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=(np.sqrt(2) - 1) / (2 * (np.sqrt(2) + 1)))
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--span", type=float, default=10.0, help="half-range in units of lambda")
    p.add_argument("--points", type=int, default=1001)
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectra)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        key = f" [{exc.key}]" if exc.key else ""
        print(f"config error{key}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SqTransferError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except BrokenPipeError:
        sys.stderr.close()
        return 0


if __name__ == "__main__":
    sys.exit(main())
