"""Command-line front end: ``lifshitz-audit {compute,sweep,audit,compare}``."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from . import __version__
from . import constants as const
from . import kernel
from .config import ConfigError, Grid, load_config
from .harness import emit_table, format_table, nernst_audit, run_sweep, scheme_compare
from .lifshitz import FitError


def _parser():
    p = argparse.ArgumentParser(
        prog="lifshitz-audit",
        description="Casimir free energy, pressure and entropy between plates; Nernst-theorem audit.",
    )
    p.add_argument(
        "--version", action="version",
        version=f"lifshitz_audit {__version__} (constants {const.CONSTANTS_SET}, backend {kernel.BACKEND})",
    )
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "compute": "evaluate a single (a, T) point for every scheme",
        "sweep": "evaluate the full separation x temperature grid",
        "audit": "extrapolate the entropy to T = 0 and classify each scheme",
        "compare": "differences of each scheme from the reference scheme",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text, description=text)
        sp.add_argument("--config", required=True, help="run configuration file")
        sp.add_argument("--out", help="CSV output path (default: standard output)")
        sp.add_argument("--tol", type=float, help="relative tolerance (overrides the config)")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for sweep points")
        if name == "compute":
            sp.add_argument("--a-nm", type=float, help="separation, nm (default: grid minimum)")
            sp.add_argument("--T-K", type=float, help="temperature, K (default: grid minimum)")
    return p


def main(argv=None):
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.tol is not None and not 0 < args.tol < 1:
        print("error: --tol must lie in (0, 1)", file=sys.stderr)
        return 2
    try:
        if args.command == "compute":
            a = args.a_nm if args.a_nm is not None else config.separation.lo
            T = args.T_K if args.T_K is not None else config.temperature.lo
            config = replace(config, separation=Grid(a, a, 1), temperature=Grid(T, T, 1))
            table = run_sweep(config, args.jobs, args.tol)
        elif args.command == "sweep":
            table = run_sweep(config, args.jobs, args.tol)
        elif args.command == "audit":
            table = nernst_audit(config, args.jobs, args.tol)
        else:
            table = scheme_compare(config, args.jobs, args.tol)
    except (FitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        try:
            emit_table(table, args.out)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(format_table(table))
    if not table.all_converged:
        print("error: some rows did not converge (converged=false)", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
