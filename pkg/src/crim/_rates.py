"""Contribution rate samples and the mean-bound contribution rate model."""

import json
import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Sequence
from datetime import datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from ._constants import (
    ERROR_INSUFFICIENT_DATA,
    ERROR_ZERO_CTD,
    ERROR_ZERO_RATE,
    SECONDS_PER_HOUR,
)
from ._errors import ContractViolation, DomainError, InputError, InsufficientData, ParameterError
from ._json_validator import MODEL_SCHEMA, load_json_document
from ._models import (
    AuthorRate,
    BucketKind,
    CommitRecord,
    CommitTimeDelta,
    ContributionMeasure,
    ObservationClass,
    RateBounds,
    RateModel,
    RateSample,
    RateTrendRow,
)

logger = logging.getLogger(__name__)


def contribution_rate(delta_l: float, ctd_seconds: int) -> float:
    """Return contribution size per hour over one interval.

    Args:
        delta_l: Contribution size in metric units.
        ctd_seconds: Interval length in seconds, positive.

    Returns:
        Metric units per hour.

    Raises:
        DomainError: If the interval is not positive.

    Example:
        >>> contribution_rate(30, 1800)
        60.0
    """
    if ctd_seconds <= 0:
        raise DomainError(ERROR_ZERO_CTD)
    return delta_l / (ctd_seconds / SECONDS_PER_HOUR)


def classify(ctd_seconds: int | None, bounds: RateBounds) -> ObservationClass:
    """Classify an interval against the rate bounds.

    Absent and over-long intervals are unobserved; intervals shorter than the
    lower bound are degenerate.
    """
    if ctd_seconds is None or ctd_seconds > bounds.t_max_seconds:
        return ObservationClass.UNOBSERVED
    if ctd_seconds < bounds.t_min_seconds:
        return ObservationClass.DEGENERATE
    return ObservationClass.OBSERVED


def build_samples(
    measures: Sequence[ContributionMeasure],
    ctds: Sequence[CommitTimeDelta],
    bounds: RateBounds,
) -> list[RateSample]:
    """Pair measures with time deltas and classify each interval.

    Args:
        measures: Contribution measures, aligned with ``ctds``.
        ctds: Commit time deltas.
        bounds: Rate bounds used for classification.

    Returns:
        One classified sample per commit.

    Raises:
        ContractViolation: If the inputs are not aligned.
    """
    if len(measures) != len(ctds):
        raise ContractViolation(f"{len(measures)} measures but {len(ctds)} time deltas")

    samples = []
    for measure, ctd in zip(measures, ctds, strict=True):
        if measure.commit_id != ctd.commit_id:
            raise ContractViolation(f"measure {measure.commit_id} aligned with time delta {ctd.commit_id}")
        observation = classify(ctd.ctd_seconds, bounds)
        rate = None
        if observation is ObservationClass.OBSERVED and ctd.ctd_seconds:
            rate = contribution_rate(measure.delta_l, ctd.ctd_seconds)
        samples.append(
            RateSample(
                commit_id=measure.commit_id,
                author_id=ctd.author_id,
                metric=measure.requested_metric,
                delta_l=measure.delta_l,
                ctd_seconds=ctd.ctd_seconds,
                rate_units_per_hour=rate,
                observation=observation,
            ),
        )
    return samples


def _observed_rates(samples: Iterable[RateSample], exclude_zero_rates: bool = False) -> list[float]:
    """Collect the rates of observed samples."""
    return [
        s.rate_units_per_hour
        for s in samples
        if s.observation is ObservationClass.OBSERVED
        and s.rate_units_per_hour is not None
        and not (exclude_zero_rates and s.rate_units_per_hour == 0)
    ]


def fit_mbcr(samples: Iterable[RateSample], trim_fraction: float, exclude_zero_rates: bool = False) -> float:
    """Fit the mean-bound contribution rate: a symmetric trimmed mean of observed rates.

    Args:
        samples: Classified samples; only observed ones contribute.
        trim_fraction: Fraction dropped from each end, in [0, 0.5).
        exclude_zero_rates: Drop observed samples with zero contribution.

    Returns:
        The trimmed mean rate, positive.

    Raises:
        ParameterError: If ``trim_fraction`` is out of range.
        InsufficientData: If no rate survives trimming or the mean is zero.

    Example:
        >>> from crim import MetricKind, ObservationClass, RateSample
        >>> def sample(rate):
        ...     return RateSample("c", "a", MetricKind.LOC_DELTA, rate, 3600, rate, ObservationClass.OBSERVED)
        >>> fit_mbcr([sample(r) for r in (1, 2, 3, 4, 100)], 0.2)
        3.0
    """
    if not 0.0 <= trim_fraction < 0.5:
        raise ParameterError("trim_fraction must lie in [0, 0.5)")

    rates = np.sort(np.asarray(_observed_rates(samples, exclude_zero_rates), dtype=float))
    cut = math.floor(trim_fraction * rates.size)
    kept = rates[cut : rates.size - cut]
    if kept.size == 0:
        raise InsufficientData(ERROR_INSUFFICIENT_DATA)

    rho = float(kept.mean())
    if rho <= 0:
        raise InsufficientData(ERROR_ZERO_RATE)
    return rho


def fit_model(samples: Sequence[RateSample], bounds: RateBounds, exclude_zero_rates: bool = False) -> RateModel:
    """Fit global and per-author mean-bound contribution rates.

    Authors whose observed samples cannot support a positive rate are left
    out of the per-author table and fall back to the global rate.

    Args:
        samples: Classified samples of one history, all in one metric.
        bounds: Rate bounds, including the trim fraction.
        exclude_zero_rates: Drop observed samples with zero contribution.

    Returns:
        The fitted rate model.

    Raises:
        InsufficientData: If no observed sample supports a global rate.
        ContractViolation: If the samples mix metrics.
    """
    metrics = {s.metric for s in samples}
    if len(metrics) > 1:
        raise ContractViolation("samples mix contribution metrics")
    if not metrics:
        raise InsufficientData(ERROR_INSUFFICIENT_DATA)

    global_rho = fit_mbcr(samples, bounds.trim_fraction, exclude_zero_rates)
    total_support = len(_observed_rates(samples, exclude_zero_rates))

    by_author: dict[str, list[RateSample]] = defaultdict(list)
    for sample in samples:
        by_author[sample.author_id].append(sample)

    per_author: dict[str, AuthorRate] = {}
    for author_id, author_samples in sorted(by_author.items()):
        support = len(_observed_rates(author_samples, exclude_zero_rates))
        if support == 0:
            continue
        try:
            rho = fit_mbcr(author_samples, bounds.trim_fraction, exclude_zero_rates)
        except InsufficientData:
            logger.debug("author %s has no positive observed rate; using the global rate", author_id)
            continue
        per_author[author_id] = AuthorRate(rho=rho, support_count=support)

    model = RateModel(
        global_rho=global_rho,
        per_author_rho=per_author,
        bounds=bounds,
        metric=metrics.pop(),
        total_support=total_support,
    )
    logger.info("fitted MBCR %.4f from %d observed samples, %d authors", global_rho, total_support, len(per_author))
    return model


def select_rho(model: RateModel, author_id: str, min_support: int) -> float:
    """Return the author's own rate when it has at least ``min_support`` samples, else the global rate."""
    return model.rho_for(author_id, min_support)


def bucket_start(timestamp: int, bucket_kind: BucketKind) -> int:
    """Return the UTC start of the bucket containing ``timestamp``.

    Weeks start on Monday 00:00 UTC, months on the 1st at 00:00 UTC, and the
    single ALL bucket at the Unix epoch.
    """
    if bucket_kind is BucketKind.ALL:
        return 0
    moment = datetime.fromtimestamp(timestamp, tz=timezone.utc)
    midnight = moment.replace(hour=0, minute=0, second=0, microsecond=0)
    if bucket_kind is BucketKind.WEEK:
        return int((midnight - timedelta(days=midnight.weekday())).timestamp())
    return int(midnight.replace(day=1).timestamp())


def fit_trend(
    samples: Sequence[RateSample],
    records: Sequence[CommitRecord],
    bucket_kind: BucketKind,
    trim_fraction: float,
    exclude_zero_rates: bool = False,
) -> list[RateTrendRow]:
    """Fit a mean-bound rate per time bucket to track how productivity changes.

    Args:
        samples: Classified samples aligned with ``records``.
        records: Commits supplying the timestamps.
        bucket_kind: Bucket granularity.
        trim_fraction: Fraction trimmed from each end within a bucket.
        exclude_zero_rates: Drop observed samples with zero contribution, as in ``fit_model``.

    Returns:
        Rows ordered by bucket start; buckets without a fittable rate are omitted.
    """
    if len(samples) != len(records):
        raise ContractViolation(f"{len(samples)} samples but {len(records)} records")

    buckets: dict[int, list[RateSample]] = defaultdict(list)
    for sample, record in zip(samples, records, strict=True):
        buckets[bucket_start(record.timestamp, bucket_kind)].append(sample)

    rows = []
    for start, bucket_samples in sorted(buckets.items()):
        try:
            rho = fit_mbcr(bucket_samples, trim_fraction, exclude_zero_rates)
        except InsufficientData:
            continue
        support = len(_observed_rates(bucket_samples, exclude_zero_rates))
        rows.append(RateTrendRow(start, bucket_kind, rho, support))
    return rows


def save_model(model: RateModel, path: str | Path) -> None:
    """Write a rate model as a JSON document.

    Raises:
        InputError: If the file cannot be written.
    """
    try:
        Path(path).write_text(json.dumps(model.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot write model to {path}: {e}") from e


def load_model(path: str | Path) -> RateModel:
    """Load a rate model written by ``save_model``.

    Raises:
        InputError: If the file is missing or invalid.
    """
    data = load_json_document(path, MODEL_SCHEMA)
    try:
        return RateModel.from_dict(data)
    except ValueError as e:
        raise InputError(f"invalid rate model in {path}: {e}") from e
