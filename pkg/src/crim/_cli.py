"""The ``crim`` command-line interface."""

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import NoReturn

from ._config import CliConfigManager, build_run_config
from ._constants import HOURS_DECIMALS, LOG_FORMAT
from ._errors import CrimError, InputError, InsufficientData, ParameterError
from ._impute import forecast
from ._ingest import render_jsonl
from ._pipeline import analyze, build_report, explain, stage
from ._profiles import builtin_registry, dump_profiles
from ._rates import load_model
from ._synth import GapProfile, SynthParams, generate, write_truth_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INSUFFICIENT_DATA = 2


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as InputError instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise InputError(f"{self.prog}: {message}", stage="arguments")


def _configure_logging(level_name: str) -> None:
    level = getattr(logging, level_name.upper(), None)
    if not isinstance(level, int):
        raise ParameterError(f"invalid log level: {level_name}", stage="arguments")
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def _write(data: bytes | str) -> None:
    if isinstance(data, str):
        data = data.encode("utf-8")
    sys.stdout.buffer.write(data)
    sys.stdout.buffer.flush()


def _run_analyze(args: argparse.Namespace) -> int:
    with stage("configure"):
        config = build_run_config(args)
    result = analyze(config)
    if config.explain is not None:
        with stage("explain"):
            _write(explain(result, config.explain))
        return EXIT_OK
    _write(build_report(result, config))
    return EXIT_OK


def _run_synth(args: argparse.Namespace) -> int:
    with stage("synth"):
        params = SynthParams(
            seed=args.seed,
            n_commits=args.commits,
            n_authors=args.authors,
            true_rho=args.rho,
            noise_sigma=args.noise,
            gap_profile=GapProfile(idle_probability=args.idle_probability),
            size_scale=args.scale,
        )
        records, truth = generate(params)
        try:
            Path(args.out).write_text(render_jsonl(records), encoding="utf-8")
            with Path(args.truth).open("w", encoding="utf-8", newline="") as stream:
                write_truth_csv(truth, stream)
        except OSError as e:
            raise InputError(f"cannot write synthetic output: {e}") from e
    logger.info("wrote %d commits to %s and ground truth to %s", len(records), args.out, args.truth)
    return EXIT_OK


def _run_profiles_dump(args: argparse.Namespace) -> int:
    _write(dump_profiles(builtin_registry()))
    return EXIT_OK


def _run_forecast(args: argparse.Namespace) -> int:
    with stage("forecast"):
        model = load_model(args.model_in)
        hours = forecast(args.size, model, args.author, args.min_support)
    _write(f"{hours:.{HOURS_DECIMALS}f}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Build the ``crim`` argument parser with all subcommands."""
    parser = _ArgumentParser(prog="crim", description="Estimate developer effort from version-control history.")
    subcommands = parser.add_subparsers(dest="command", required=True)

    analyze_parser = subcommands.add_parser("analyze", help="Estimate effort for a repository or JSONL export.")
    CliConfigManager.add_analyze_options(analyze_parser)
    CliConfigManager.add_common_options(analyze_parser)
    analyze_parser.set_defaults(func=_run_analyze)

    synth_parser = subcommands.add_parser("synth", help="Generate a synthetic history with known effort.")
    CliConfigManager.add_synth_options(synth_parser)
    CliConfigManager.add_common_options(synth_parser)
    synth_parser.set_defaults(func=_run_synth)

    profiles_parser = subcommands.add_parser("profiles", help="Inspect language profiles.")
    profiles_commands = profiles_parser.add_subparsers(dest="profiles_command", required=True)
    dump_parser = profiles_commands.add_parser("dump", help="Print the built-in language profiles as JSON.")
    CliConfigManager.add_common_options(dump_parser)
    dump_parser.set_defaults(func=_run_profiles_dump)

    forecast_parser = subcommands.add_parser("forecast", help="Forecast hours for planned work of a given size.")
    CliConfigManager.add_forecast_options(forecast_parser)
    CliConfigManager.add_common_options(forecast_parser)
    forecast_parser.set_defaults(func=_run_forecast)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the ``crim`` command.

    Args:
        argv: Arguments without the program name; defaults to ``sys.argv[1:]``.

    Returns:
        0 on success, 2 when the history has too few observed samples to fit
        a rate, 1 on any other failure.
    """
    try:
        args = build_parser().parse_args(argv)
        _configure_logging(args.log_level)
        return args.func(args)
    except InsufficientData as e:
        sys.stderr.write(f"crim: error in {e.stage or 'fit'}: {e}\n")
        return EXIT_INSUFFICIENT_DATA
    except CrimError as e:
        sys.stderr.write(f"crim: error in {e.stage or 'run'}: {e}\n")
        return EXIT_FAILURE
