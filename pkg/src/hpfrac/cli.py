"""Command line interface.

    hpfrac convergence --config sweep.toml --out results/
    hpfrac sinc-study --preset example71-1d
    hpfrac mlf-check
    hpfrac solve --preset example72-1d --p 6 --t 0.1 --t 1

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from .config import load_config
from .errors import ConfigError, HpFracError
from .experiments import run_convergence, run_mlf_check, run_sinc_study, solve_sample, write_outputs

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

log = logging.getLogger("hpfrac")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML experiment file")
    common.add_argument("--out", help="output directory (overrides output.directory)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for sweep rows")
    common.add_argument("--preset", help="data preset (overrides problem.preset)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="hpfrac", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("convergence", parents=[common], help="error table over the p sweep")
    sub.add_parser("sinc-study", parents=[common], help="scalar sinc quadrature errors")
    sub.add_parser("mlf-check", parents=[common], help="Mittag-Leffler accuracy against the series oracle")
    solve = sub.add_parser("solve", parents=[common], help="print sampled solution values")
    solve.add_argument("--p", type=int, default=None, help="degree (default: last swept p)")
    solve.add_argument("--t", type=float, action="append", help="evaluation time (repeatable)")
    solve.add_argument("--points", type=int, default=11, help="number of sample points")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")

    try:
        cfg = load_config(args.config, args.preset)
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG

    out_dir = args.out or cfg.output.directory
    start = time.perf_counter()
    try:
        if args.command == "convergence":
            table = run_convergence(cfg, threads=args.threads)
        elif args.command == "sinc-study":
            table = run_sinc_study(cfg)
        elif args.command == "mlf-check":
            table = run_mlf_check(cfg)
        else:
            p = args.p if args.p is not None else (cfg.sweep.p[-1] if cfg.sweep.p else 4)
            if p < 1 or args.points < 2:
                raise ConfigError("need --p >= 1 and --points >= 2")
            times = args.t or cfg.sweep.times
            table = solve_sample(cfg, p, times, args.points)
            sys.stdout.write(table.to_csv())
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except HpFracError as err:
        print(f"numerical failure: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_NUMERICAL

    wall = time.perf_counter() - start
    csv_path, man_path = write_outputs(table, cfg, out_dir, wall)
    log.info("wrote %s and %s", csv_path, man_path)
    for diag in table.diagnostics:
        print(f"warning: {diag}", file=sys.stderr)
    return EXIT_NUMERICAL if table.diagnostics else EXIT_OK


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
