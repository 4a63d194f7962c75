"""End-to-end analysis: ingest, measure, fit, estimate and report."""

import logging
import time
from collections.abc import Sequence
from dataclasses import dataclass
from types import TracebackType
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from typing import Self

from ._config import ReportKind, RunConfig
from ._constants import HOURS_DECIMALS, SECONDS_PER_HOUR
from ._errors import ContractViolation, CrimError, InputError
from ._git_adapter import collect_from_git
from ._impute import estimate_history
from ._ingest import filter_window, load_identity_map, order_commits, read_jsonl, resolve_authors
from ._metrics import count_function_entries, measure_history
from ._models import (
    CommitRecord,
    CommitTimeDelta,
    ContributionMeasure,
    EffortEstimate,
    EffortSource,
    FileChange,
    IdentityMap,
    RateModel,
    RateSample,
)
from ._profiles import ProfileRegistry, builtin_registry, load_profiles
from ._rates import build_samples, fit_model, fit_trend, load_model, save_model
from ._report_generator import aggregate, format_timestamp, render, render_trend
from ._timedelta import compute_ctds

logger = logging.getLogger(__name__)


class StageContext:
    """Context manager timing one pipeline stage.

    Any CrimError escaping the stage is stamped with the stage name unless an
    inner stage already claimed it.
    """

    def __init__(self, name: str) -> None:
        """Initialize the stage context.

        Args:
            name: The name of the stage.
        """
        self.name = name
        self._start = 0.0

    def __enter__(self) -> "Self":
        """Start timing the stage."""
        self._start = time.monotonic()
        logger.debug("stage %s started", self.name)
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc_value: BaseException | None,
        traceback: TracebackType | None,
    ) -> bool:
        """Log the stage duration and stamp escaping errors.

        Returns:
            False to propagate any exception that occurred.
        """
        elapsed = time.monotonic() - self._start
        if isinstance(exc_value, CrimError):
            if exc_value.stage is None:
                exc_value.stage = self.name
            logger.info("stage %s failed after %.3fs", self.name, elapsed)
        elif exc_value is None:
            logger.info("stage %s finished in %.3fs", self.name, elapsed)
        return False


def stage(name: str) -> StageContext:
    """Create a stage context manager.

    Example:
        >>> with stage("measure"):
        ...     pass
    """
    return StageContext(name)


@dataclass(frozen=True)
class AnalysisResult:
    """Every intermediate product of one analysis, aligned by commit."""

    records: tuple[CommitRecord, ...]
    measures: tuple[ContributionMeasure, ...]
    ctds: tuple[CommitTimeDelta, ...]
    samples: tuple[RateSample, ...]
    model: RateModel
    estimates: tuple[EffortEstimate, ...]
    registry: ProfileRegistry
    min_support: int
    cap_enabled: bool

    def index_of(self, commit_id: str) -> int:
        """Return the position of a commit in the analyzed history.

        Raises:
            InputError: If the commit is not part of the analysis.
        """
        for index, record in enumerate(self.records):
            if record.commit_id == commit_id:
                return index
        raise InputError(f"commit '{commit_id}' is not in the analyzed history")


def _ingest(config: RunConfig) -> list[CommitRecord]:
    if config.jsonl_path is not None:
        return read_jsonl(config.jsonl_path)
    if config.repo_path is None:
        raise ContractViolation("no input source configured")
    return collect_from_git(config.repo_path, config.since, config.until)


def analyze(config: RunConfig) -> AnalysisResult:
    """Run the analysis stages up to effort estimation.

    Args:
        config: Validated run configuration.

    Returns:
        All intermediate products of the run.

    Raises:
        CrimError: Any stage failure, with ``stage`` set to the failing stage.
    """
    with stage("configure"):
        registry = load_profiles(config.profiles_path) if config.profiles_path else builtin_registry()
        identity_map = load_identity_map(config.identity_map_path) if config.identity_map_path else None

    with stage("ingest"):
        records = _ingest(config)
    return analyze_records(records, config, registry, identity_map)


def analyze_records(
    records: Sequence[CommitRecord],
    config: RunConfig,
    registry: ProfileRegistry | None = None,
    identity_map: IdentityMap | None = None,
) -> AnalysisResult:
    """Run the stages after ingest over records already in memory.

    The configured input source is not read; window, metric, bounds, model
    and estimation options apply as in ``analyze``.

    Args:
        records: Ingested commit records, merges included.
        config: Validated run configuration.
        registry: Language profiles; defaults to the built-in registry.
        identity_map: Optional identity map for author resolution.

    Returns:
        All intermediate products of the run.
    """
    registry = registry or builtin_registry()
    with stage("resolve"):
        resolved = resolve_authors(filter_window(records, config.since, config.until), identity_map)
    with stage("order"):
        ordered = order_commits(resolved)
        commits = [r for r in ordered if not r.is_merge]
        if len(commits) != len(ordered):
            logger.info("dropped %d merge commits", len(ordered) - len(commits))

    with stage("measure"):
        measures = measure_history(commits, config.metric, registry, config.workers, config.max_file_chars)
    with stage("ctd"):
        ctds = compute_ctds(commits)
    with stage("classify"):
        samples = build_samples(measures, ctds, config.bounds)

    with stage("fit"):
        if config.model_in is not None:
            model = load_model(config.model_in)
            if model.metric is not config.metric:
                raise ContractViolation(
                    f"model metric '{model.metric.value}' does not match requested '{config.metric.value}'",
                )
        else:
            model = fit_model(samples, config.bounds, config.exclude_zero_rates)
        if config.model_out is not None:
            save_model(model, config.model_out)

    with stage("estimate"):
        estimates = estimate_history(samples, model, config.min_support, config.cap_enabled)

    return AnalysisResult(
        records=tuple(commits),
        measures=tuple(measures),
        ctds=tuple(ctds),
        samples=tuple(samples),
        model=model,
        estimates=tuple(estimates),
        registry=registry,
        min_support=config.min_support,
        cap_enabled=config.cap_enabled,
    )


def build_report(result: AnalysisResult, config: RunConfig) -> bytes:
    """Aggregate and render the report ``config`` asks for."""
    if config.report_kind is ReportKind.TREND:
        with stage("aggregate"):
            trend = fit_trend(
                result.samples,
                result.records,
                config.bucket_kind,
                config.bounds.trim_fraction,
                config.exclude_zero_rates,
            )
        with stage("render"):
            return render_trend(trend, config.report_format)
    with stage("aggregate"):
        rows = aggregate(result.estimates, result.records, config.bucket_kind)
    with stage("render"):
        return render(rows, config.report_format)


def _hours(value: float) -> str:
    return f"{value:.{HOURS_DECIMALS}f} h"


def _function_counts(change: FileChange, registry: ProfileRegistry) -> str:
    profile = registry.for_path(change.path)
    if change.is_binary or profile is None or profile.function_pattern is None:
        return ""
    before = count_function_entries(change.before_content or "", profile)
    after = count_function_entries(change.after_content or "", profile)
    return f", functions {before} -> {after}"


def _file_lines(record: CommitRecord, measure: ContributionMeasure, registry: ProfileRegistry) -> list[str]:
    lines = []
    for change, item in zip(record.files, measure.per_file, strict=True):
        detail = f"  {item.path}: {item.file_delta} ({item.effective_metric.value}"
        if change.is_binary:
            detail += ", binary"
        if item.fallback is not None:
            detail += f", fallback {item.fallback.value}"
        lines.append(detail + _function_counts(change, registry) + ")")
    return lines


def _rho_line(result: AnalysisResult, author_id: str, rho: float) -> str:
    entry = result.model.per_author_rho.get(author_id)
    support = entry.support_count if entry is not None else 0
    if entry is not None and support >= result.min_support:
        return f"ρ = {rho:.{HOURS_DECIMALS}f} (per-author, support {support})"
    return (
        f"ρ = {rho:.{HOURS_DECIMALS}f} (global, support {result.model.total_support}; "
        f"author support {support} < {result.min_support})"
    )


def explain(result: AnalysisResult, commit_id: str) -> str:
    """Describe how the effort of one commit was derived.

    Args:
        result: A finished analysis.
        commit_id: Commit to explain.

    Returns:
        Multi-line text covering contribution size, interval, classification,
        rate choice and cap decision.

    Raises:
        InputError: If the commit is not part of the analysis.
    """
    index = result.index_of(commit_id)
    record = result.records[index]
    measure = result.measures[index]
    ctd = result.ctds[index]
    sample = result.samples[index]
    estimate = result.estimates[index]

    lines = [
        f"commit {record.commit_id}",
        f"author {record.author_id} <{record.author_email}> at {format_timestamp(record.timestamp)}",
        f"metric {measure.requested_metric.value} (effective {measure.effective_metric.value}"
        + (", complexity fallback" if measure.fallback_applied else "")
        + ")",
        f"ΔL = {measure.delta_l:g}",
        *_file_lines(record, measure, result.registry),
    ]
    if ctd.ctd_seconds is None:
        lines.append("CTD = none (first commit of this author)")
    else:
        elapsed = _hours(ctd.ctd_seconds / SECONDS_PER_HOUR)
        lines.append(f"CTD = {ctd.ctd_seconds} s since {ctd.antecedent_id} ({elapsed})")
    lines.append(f"class {sample.observation.value}")

    if estimate.source is EffortSource.MEASURED or estimate.rho_used is None:
        lines.append(f"Δt = CTD = {_hours(estimate.delta_t_hours)} (measured)")
        return "\n".join(lines) + "\n"

    lines.append(_rho_line(result, record.author_id, estimate.rho_used))
    raw = measure.delta_l / estimate.rho_used
    lines.append(f"Δt = ΔL/ρ = {measure.delta_l:g} / {estimate.rho_used:.{HOURS_DECIMALS}f} = {_hours(raw)}")
    if estimate.capped:
        lines.append(f"cap applied: Δt limited to CTD = {_hours(estimate.delta_t_hours)}")
    elif ctd.ctd_seconds is None:
        lines.append("cap not applicable: no CTD")
    elif not result.cap_enabled:
        lines.append("cap disabled")
    else:
        lines.append("cap not reached")
    lines.append(f"effort {_hours(estimate.delta_t_hours)} (imputed)")
    return "\n".join(lines) + "\n"
