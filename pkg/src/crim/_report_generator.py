"""Effort report aggregation and CSV/JSON rendering."""

import csv
import io
import json
from collections import defaultdict
from collections.abc import Sequence
from datetime import datetime, timezone
from enum import Enum
from typing import Any

from ._constants import CSV_HEADER, HOURS_DECIMALS, TIMESTAMP_FORMAT, TREND_CSV_HEADER
from ._errors import ContractViolation
from ._models import BaseRecord, BucketKind, CommitRecord, EffortEstimate, EffortReportRow, EffortSource, RateTrendRow
from ._rates import bucket_start


class ReportFormat(str, Enum):
    """Output formats for reports."""

    CSV = "csv"
    JSON = "json"


def format_timestamp(timestamp: int) -> str:
    """Render a Unix timestamp as ISO-8601 UTC.

    Example:
        >>> format_timestamp(0)
        '1970-01-01T00:00:00Z'
    """
    return datetime.fromtimestamp(timestamp, tz=timezone.utc).strftime(TIMESTAMP_FORMAT)


def aggregate(
    estimates: Sequence[EffortEstimate],
    records: Sequence[CommitRecord],
    bucket_kind: BucketKind,
) -> list[EffortReportRow]:
    """Sum effort per author and time bucket.

    Each estimate is bucketed by the timestamp of its commit.

    Args:
        estimates: Effort estimates aligned with ``records``.
        records: Commits supplying timestamps.
        bucket_kind: Bucket granularity.

    Returns:
        Rows sorted by (author id, bucket start).

    Raises:
        ContractViolation: If estimates and records are not aligned.
    """
    if len(estimates) != len(records):
        raise ContractViolation(f"{len(estimates)} estimates but {len(records)} records")

    totals: dict[tuple[str, int], dict[str, Any]] = defaultdict(
        lambda: {"commits": 0, "measured": 0.0, "imputed": 0.0, "capped": 0},
    )
    for estimate, record in zip(estimates, records, strict=True):
        if estimate.commit_id != record.commit_id:
            raise ContractViolation(f"estimate {estimate.commit_id} aligned with record {record.commit_id}")
        bucket = totals[(estimate.author_id, bucket_start(record.timestamp, bucket_kind))]
        bucket["commits"] += 1
        bucket["measured" if estimate.source is EffortSource.MEASURED else "imputed"] += estimate.delta_t_hours
        bucket["capped"] += int(estimate.capped)

    return [
        EffortReportRow(
            author_id=author_id,
            bucket_start=start,
            bucket_kind=bucket_kind,
            commits=bucket["commits"],
            measured_hours=bucket["measured"],
            imputed_hours=bucket["imputed"],
            capped_count=bucket["capped"],
        )
        for (author_id, start), bucket in sorted(totals.items())
    ]


def _csv_bytes(header: Sequence[str], rows: Sequence[Sequence[object]]) -> bytes:
    """Write rows as RFC 4180 CSV with LF line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue().encode("utf-8")


def _json_bytes(rows: Sequence[BaseRecord]) -> bytes:
    """Write rows as a JSON array with ISO timestamps."""
    payload = []
    for row in rows:
        data = row.to_dict()
        data["bucket_start"] = format_timestamp(data["bucket_start"])
        payload.append(data)
    return (json.dumps(payload, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def render(rows: Sequence[EffortReportRow], report_format: ReportFormat) -> bytes:
    """Render effort rows as CSV or JSON bytes.

    CSV hours carry four decimal places; JSON numbers keep full precision.
    Equal rows always render to equal bytes.
    """
    if report_format is ReportFormat.JSON:
        return _json_bytes(rows)
    hours = f".{HOURS_DECIMALS}f"
    return _csv_bytes(
        CSV_HEADER,
        [
            (
                row.author_id,
                format_timestamp(row.bucket_start),
                row.bucket_kind.value,
                row.commits,
                format(row.measured_hours, hours),
                format(row.imputed_hours, hours),
                format(row.total_hours, hours),
                row.capped_count,
            )
            for row in rows
        ],
    )


def render_trend(rows: Sequence[RateTrendRow], report_format: ReportFormat) -> bytes:
    """Render per-bucket contribution rates as CSV or JSON bytes."""
    if report_format is ReportFormat.JSON:
        return _json_bytes(rows)
    return _csv_bytes(
        TREND_CSV_HEADER,
        [
            (
                format_timestamp(row.bucket_start),
                row.bucket_kind.value,
                format(row.rho, f".{HOURS_DECIMALS}f"),
                row.support,
            )
            for row in rows
        ],
    )
