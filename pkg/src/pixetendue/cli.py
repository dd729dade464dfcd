"""Command-line front end.

Exit codes: 0 success, 2 configuration or validation error, 3 numerical
failure (quadrature convergence, counter saturation).  Diagnostics go to
stderr; the report goes to stdout or ``--out``.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from .config import ConfigError, ScenarioConfig, parse_config, with_value
from .core import CONSTANTS
from .errors import ConvergenceError, SaturationError, UsageError, ValidationError
from .report import render, reproduce_table1, run_scenario, run_sweep
from .units import DimensionError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _load(args) -> ScenarioConfig:
    try:
        text = Path(args.config).read_bytes()
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {args.config}: {exc.strerror}") from None
    config = parse_config(text)
    if args.policy is not None:
        config = with_value(config, "coherence_policy", args.policy)
    if args.seed is not None:
        if config.mc is None and args.command != "mc":
            raise ConfigError("mc.seed", "--seed given but the config has no mc block")
        config = with_value(config, "mc.seed", args.seed)
    if args.command == "mc" and config.mc is None:
        config = with_value(config, "mc", {})
    return config


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json", "md"), default="csv")
    common.add_argument("--out", help="write the report here instead of stdout")

    scenario = argparse.ArgumentParser(add_help=False)
    scenario.add_argument("config", help="scenario YAML file")
    scenario.add_argument("--policy", choices=("max-rule", "raw-lambda"),
                          help="override the config's coherence_policy")
    scenario.add_argument("--seed", type=_u64, help="override the Monte Carlo seed")

    ap = argparse.ArgumentParser(
        prog="pixetendue",
        description="Pixel etendue, mode count and quantum-limited SNR.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("run", parents=[common, scenario], help="evaluate one scenario")
    sub.add_parser("sweep", parents=[common, scenario], help="evaluate the config's sweep axis")
    sub.add_parser("mc", parents=[common, scenario], help="scenario plus Monte Carlo verification")
    sub.add_parser("table1", parents=[common], help="mode count per pixel for F = 2.27e-10 m^2 sr")
    sub.add_parser("constants", parents=[common], help="print the physical constants")
    return ap


def _report(args) -> bytes:
    if args.command == "table1":
        return render(reproduce_table1(), args.format, digits=3)
    if args.command == "constants":
        rows = [{"name": k, "value": v} for k, v in CONSTANTS.as_dict().items()]
        return render(rows, args.format, digits=12)
    config = _load(args)
    if args.command == "sweep":
        if config.sweep is None:
            raise ConfigError("sweep", "sweep command needs a sweep block")
        return render(run_sweep(config), args.format)
    return render([run_scenario(config)], args.format)


def _format_warning(message, category, filename, lineno, line=None):
    return f"pixetendue: warning: {category.__name__}: {message}\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    saved, warnings.formatwarning = warnings.formatwarning, _format_warning
    try:
        payload = _report(args)
    except (ConfigError, ValidationError, DimensionError, UsageError) as exc:
        print(f"pixetendue: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, SaturationError) as exc:
        print(f"pixetendue: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    finally:
        warnings.formatwarning = saved
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    return EXIT_OK

if __name__ == "__main__":
    sys.exit(main())
