"""Run configuration: command-line options, config files and validation."""

from __future__ import annotations

import argparse
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Final

from ._constants import (
    DEFAULT_LOG_LEVEL,
    DEFAULT_MAX_FILE_CHARS,
    DEFAULT_MIN_SUPPORT,
    DEFAULT_T_MAX_SECONDS,
    DEFAULT_T_MIN_SECONDS,
    DEFAULT_TRIM_FRACTION,
)
from ._errors import InputError, ParameterError
from ._models import BucketKind, MetricKind, RateBounds
from ._report_generator import ReportFormat


class ReportKind(str, Enum):
    """Which report ``crim analyze`` produces."""

    EFFORT = "effort"
    TREND = "trend"


def _metavar(kind: type[Enum]) -> str:
    return "{" + ",".join(member.value for member in kind) + "}"


def parse_bool(value: str) -> bool:
    """Parse a config-file boolean such as ``true``, ``no`` or ``1``."""
    lowered = value.strip().lower()
    if lowered in {"1", "true", "yes", "on"}:
        return True
    if lowered in {"0", "false", "no", "off"}:
        return False
    raise ValueError(f"not a boolean: {value!r}")


# Keys accepted in config files, with converters shared by the command line.
OPTION_CONVERTERS: Final[dict[str, Callable[[str], Any]]] = {
    "jsonl": str,
    "metric": MetricKind,
    "t_min": int,
    "t_max": int,
    "trim": float,
    "min_support": int,
    "no_cap": parse_bool,
    "bucket": BucketKind,
    "identity_map": str,
    "since": int,
    "until": int,
    "format": ReportFormat,
    "profiles": str,
    "model_in": str,
    "model_out": str,
    "workers": int,
    "max_file_chars": int,
    "exclude_zero_rates": parse_bool,
    "report": ReportKind,
}


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration of one ``crim analyze`` run."""

    repo_path: str | None = None
    jsonl_path: str | None = None
    metric: MetricKind = MetricKind.LEVENSHTEIN_WORDS
    bounds: RateBounds = field(default_factory=RateBounds)
    min_support: int = DEFAULT_MIN_SUPPORT
    cap_enabled: bool = True
    bucket_kind: BucketKind = BucketKind.ALL
    identity_map_path: str | None = None
    since: int | None = None
    until: int | None = None
    report_format: ReportFormat = ReportFormat.CSV
    report_kind: ReportKind = ReportKind.EFFORT
    profiles_path: str | None = None
    model_in: str | None = None
    model_out: str | None = None
    explain: str | None = None
    workers: int | None = None
    max_file_chars: int = DEFAULT_MAX_FILE_CHARS
    exclude_zero_rates: bool = False

    def __post_init__(self) -> None:
        """Validate the configuration.

        Raises:
            ParameterError: If a field is outside its domain.
        """
        if (self.repo_path is None) == (self.jsonl_path is None):
            raise ParameterError("exactly one input source is required: a repository path or --jsonl FILE")
        if self.min_support < 0:
            raise ParameterError("min_support must be non-negative")
        if self.workers is not None and self.workers < 1:
            raise ParameterError("workers must be at least 1")
        if self.max_file_chars < 1:
            raise ParameterError("max_file_chars must be positive")
        if self.since is not None and self.until is not None and self.since > self.until:
            raise ParameterError("since must not be later than until")

    @classmethod
    def from_options(cls, options: Mapping[str, Any], repo_path: str | None = None) -> RunConfig:
        """Build a configuration from merged option values keyed like ``OPTION_CONVERTERS``.

        Args:
            options: Option values; missing keys take their defaults.
            repo_path: Positional repository path, if given.

        Returns:
            The validated configuration.
        """
        return cls(
            repo_path=repo_path,
            jsonl_path=options.get("jsonl"),
            metric=options.get("metric", MetricKind.LEVENSHTEIN_WORDS),
            bounds=RateBounds(
                t_min_seconds=options.get("t_min", DEFAULT_T_MIN_SECONDS),
                t_max_seconds=options.get("t_max", DEFAULT_T_MAX_SECONDS),
                trim_fraction=options.get("trim", DEFAULT_TRIM_FRACTION),
            ),
            min_support=options.get("min_support", DEFAULT_MIN_SUPPORT),
            cap_enabled=not options.get("no_cap", False),
            bucket_kind=options.get("bucket", BucketKind.ALL),
            identity_map_path=options.get("identity_map"),
            since=options.get("since"),
            until=options.get("until"),
            report_format=options.get("format", ReportFormat.CSV),
            report_kind=options.get("report", ReportKind.EFFORT),
            profiles_path=options.get("profiles"),
            model_in=options.get("model_in"),
            model_out=options.get("model_out"),
            explain=options.get("explain"),
            workers=options.get("workers"),
            max_file_chars=options.get("max_file_chars", DEFAULT_MAX_FILE_CHARS),
            exclude_zero_rates=options.get("exclude_zero_rates", False),
        )


class ConfigFileLoader:
    """Loads ``key = value`` configuration files."""

    @staticmethod
    def _parse_line(line: str) -> tuple[str, str] | None:
        """Parse a single line from a config file.

        Args:
            line: The line to parse.

        Returns:
            A tuple of (key, value) with the key normalized to underscores,
            or None for blank and comment lines.

        Raises:
            ValueError: If the line is not an assignment.
        """
        line = line.strip()

        if not line or line.startswith("#"):
            return None

        if "=" not in line:
            raise ValueError("expected 'key = value'")

        key, value = line.split("=", 1)
        key = key.strip().lstrip("-").replace("-", "_")
        value = value.strip()

        if (value.startswith('"') and value.endswith('"')) or (value.startswith("'") and value.endswith("'")):
            value = value[1:-1]

        if not key:
            raise ValueError("empty key")
        return key, value

    @classmethod
    def load(cls, file_path: str | Path) -> dict[str, Any]:
        """Load and convert option values from a config file.

        Args:
            file_path: Path to the config file.

        Returns:
            Converted option values keyed like ``OPTION_CONVERTERS``.

        Raises:
            InputError: If the file is missing, a line is malformed, a key is
                unknown, or a value cannot be converted.
        """
        path = Path(file_path)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except FileNotFoundError as e:
            raise InputError(f"config file not found: {file_path}") from e
        except (OSError, UnicodeDecodeError) as e:
            raise InputError(f"cannot read config file {file_path}: {e}") from e

        options: dict[str, Any] = {}
        for line_num, line in enumerate(lines, 1):
            try:
                parsed = cls._parse_line(line)
                if parsed is None:
                    continue
                key, value = parsed
                if key not in OPTION_CONVERTERS:
                    raise ValueError(f"unknown key '{key}'")
                options[key] = OPTION_CONVERTERS[key](value)
            except ValueError as e:
                raise InputError(f"{file_path}, line {line_num}: {e}") from e
        return options


class CliConfigManager:
    """Declares the command-line options of every subcommand."""

    @staticmethod
    def add_common_options(parser: argparse.ArgumentParser) -> None:
        """Add options shared by every subcommand.

        Args:
            parser: The subcommand parser.
        """
        parser.add_argument(
            "--log-level",
            dest="log_level",
            default=DEFAULT_LOG_LEVEL,
            help=f"Diagnostics verbosity on stderr: DEBUG, INFO, WARNING, ERROR (default: {DEFAULT_LOG_LEVEL})",
        )

    @staticmethod
    def add_analyze_options(parser: argparse.ArgumentParser) -> None:
        """Add ``crim analyze`` options.

        Every option defaults to None so that config-file values can be told
        apart from explicit flags.

        Args:
            parser: The ``analyze`` subcommand parser.
        """
        parser.add_argument("repo_path", nargs="?", help="Path to a git repository.")
        parser.add_argument("--jsonl", help="Read commits from a JSONL export instead of git.")
        parser.add_argument("--config", help="Config file with 'key = value' lines; flags win.")

        model = parser.add_argument_group("rate model")
        model.add_argument(
            "--metric",
            type=MetricKind,
            choices=list(MetricKind),
            metavar=_metavar(MetricKind),
            help="Contribution size metric (default: lev).",
        )
        model.add_argument(
            "--t-min",
            dest="t_min",
            type=int,
            help=f"Shortest observed interval in seconds (default: {DEFAULT_T_MIN_SECONDS}).",
        )
        model.add_argument(
            "--t-max",
            dest="t_max",
            type=int,
            help=f"Longest observed interval in seconds (default: {DEFAULT_T_MAX_SECONDS}).",
        )
        model.add_argument("--trim", type=float, help=f"Trim fraction per end (default: {DEFAULT_TRIM_FRACTION}).")
        model.add_argument(
            "--min-support",
            dest="min_support",
            type=int,
            help=f"Observed samples needed for a per-author rate (default: {DEFAULT_MIN_SUPPORT}).",
        )
        model.add_argument(
            "--exclude-zero-rates",
            dest="exclude_zero_rates",
            action="store_const",
            const=True,
            help="Drop observed intervals with zero contribution from fitting.",
        )
        model.add_argument(
            "--no-cap",
            dest="no_cap",
            action="store_const",
            const=True,
            help="Do not cap imputed hours at the elapsed interval.",
        )
        model.add_argument("--model-in", dest="model_in", help="Score with a previously saved rate model.")
        model.add_argument("--model-out", dest="model_out", help="Save the fitted rate model as JSON.")

        inputs = parser.add_argument_group("input")
        inputs.add_argument("--identity-map", dest="identity_map", help="JSON identity map file.")
        inputs.add_argument("--since", type=int, help="Only commits at or after this Unix timestamp.")
        inputs.add_argument("--until", type=int, help="Only commits at or before this Unix timestamp.")
        inputs.add_argument("--profiles", help="Language profiles JSON file (see 'crim profiles dump').")
        inputs.add_argument("--workers", type=int, help="Measurement worker processes (default: processors).")
        inputs.add_argument(
            "--max-file-chars",
            dest="max_file_chars",
            type=int,
            help=f"Measure larger files by line delta (default: {DEFAULT_MAX_FILE_CHARS}).",
        )

        output = parser.add_argument_group("output")
        output.add_argument(
            "--bucket",
            type=BucketKind,
            choices=list(BucketKind),
            metavar=_metavar(BucketKind),
            help="Report bucket (default: all).",
        )
        output.add_argument(
            "--format",
            type=ReportFormat,
            choices=list(ReportFormat),
            metavar=_metavar(ReportFormat),
            help="Report format (default: csv).",
        )
        output.add_argument(
            "--report",
            type=ReportKind,
            choices=list(ReportKind),
            metavar=_metavar(ReportKind),
            help="Effort report or rate trend (default: effort).",
        )
        output.add_argument("--explain", metavar="COMMIT", help="Print the derivation for one commit instead.")

    @staticmethod
    def add_synth_options(parser: argparse.ArgumentParser) -> None:
        """Add ``crim synth`` options.

        Args:
            parser: The ``synth`` subcommand parser.
        """
        parser.add_argument("--seed", type=int, required=True, help="Random seed.")
        parser.add_argument("--commits", type=int, required=True, help="Number of commits.")
        parser.add_argument("--authors", type=int, default=1, help="Number of authors (default: 1).")
        parser.add_argument("--rho", type=float, default=60.0, help="True rate, words per hour (default: 60).")
        parser.add_argument("--noise", type=float, default=0.0, help="Log-space rate noise sigma (default: 0).")
        parser.add_argument(
            "--idle-probability",
            dest="idle_probability",
            type=float,
            default=0.3,
            help="Chance a commit follows an idle gap (default: 0.3).",
        )
        parser.add_argument("--scale", type=int, default=1, help="Multiply every realized size (default: 1).")
        parser.add_argument("--out", required=True, help="JSONL history output file.")
        parser.add_argument("--truth", required=True, help="Ground-truth CSV output file.")

    @staticmethod
    def add_forecast_options(parser: argparse.ArgumentParser) -> None:
        """Add ``crim forecast`` options.

        Args:
            parser: The ``forecast`` subcommand parser.
        """
        parser.add_argument("--model-in", dest="model_in", required=True, help="Saved rate model JSON.")
        parser.add_argument("--size", type=float, required=True, help="Planned contribution size, model units.")
        parser.add_argument("--author", help="Author expected to do the work.")
        parser.add_argument(
            "--min-support",
            dest="min_support",
            type=int,
            default=DEFAULT_MIN_SUPPORT,
            help=f"Observed samples needed for a per-author rate (default: {DEFAULT_MIN_SUPPORT}).",
        )


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, the optional config file and explicit flags into a RunConfig.

    Args:
        args: Parsed ``crim analyze`` arguments.

    Returns:
        The validated run configuration.

    Raises:
        InputError: If the config file is invalid.
        ParameterError: If the merged configuration is invalid.
    """
    options: dict[str, Any] = ConfigFileLoader.load(args.config) if args.config else {}
    for key in (*OPTION_CONVERTERS, "explain"):
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    return RunConfig.from_options(options, repo_path=args.repo_path)
