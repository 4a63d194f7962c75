"""Models for commits, contribution measures, rate models and effort estimates."""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Mapping
from dataclasses import asdict, dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Any

from ._constants import DEFAULT_T_MAX_SECONDS, DEFAULT_T_MIN_SECONDS, DEFAULT_TRIM_FRACTION
from ._errors import ParameterError


class MetricKind(str, Enum):
    """Contribution size metrics."""

    LOC_DELTA = "loc"
    LEVENSHTEIN_WORDS = "lev"
    CYCLOMATIC_DELTA = "cc"


class FallbackReason(str, Enum):
    """Why a file was measured with a metric other than the requested one."""

    NO_COMPLEXITY_PROFILE = "no-complexity-profile"
    OVERSIZE = "oversize"


class ObservationClass(str, Enum):
    """Classification of a commit interval against the rate bounds."""

    OBSERVED = "observed"
    UNOBSERVED = "unobserved"
    DEGENERATE = "degenerate"


class EffortSource(str, Enum):
    """Provenance of an effort estimate."""

    MEASURED = "measured"
    IMPUTED = "imputed"


class BucketKind(str, Enum):
    """Time bucket granularity for reports."""

    WEEK = "week"
    MONTH = "month"
    ALL = "all"


class BaseRecord(ABC):
    """Base class for records that serialize to plain dictionaries."""

    @abstractmethod
    def to_dict(self) -> dict[str, Any]:
        """Convert the record to a dictionary representation."""


@dataclass(frozen=True)
class FileChange:
    """Before/after content of one file touched by a commit.

    Absent ``before_content`` means the file was created; absent
    ``after_content`` means it was deleted. Binary changes never carry content.
    """

    path: str
    before_content: str | None
    after_content: str | None
    is_binary: bool = False

    def __post_init__(self) -> None:
        """Validate the content invariants."""
        if self.is_binary:
            if self.before_content is not None or self.after_content is not None:
                raise ValueError(f"binary change '{self.path}' must not carry content")
        elif self.before_content is None and self.after_content is None:
            raise ValueError(f"change '{self.path}' has neither before nor after content")


@dataclass(frozen=True)
class CommitRecord(BaseRecord):
    """One authored commit with per-file before/after content."""

    commit_id: str
    author_name: str
    author_email: str
    timestamp: int
    is_merge: bool = False
    files: tuple[FileChange, ...] = ()
    author_id: str = ""

    def __post_init__(self) -> None:
        """Validate identity and timestamp invariants."""
        if not self.commit_id:
            raise ValueError("commit_id must be non-empty")
        if self.timestamp < 0:
            raise ValueError(f"commit {self.commit_id} has a negative timestamp")
        if not isinstance(self.files, tuple):
            object.__setattr__(self, "files", tuple(self.files))

    def to_dict(self) -> dict[str, Any]:
        """Convert the record to its JSONL payload."""
        return {
            "id": self.commit_id,
            "author_name": self.author_name,
            "author_email": self.author_email,
            "timestamp": self.timestamp,
            "is_merge": self.is_merge,
            "files": [
                {
                    "path": change.path,
                    "before": change.before_content,
                    "after": change.after_content,
                    "is_binary": change.is_binary,
                }
                for change in self.files
            ],
        }


@dataclass(frozen=True)
class IdentityMap:
    """Mapping from raw author identities to canonical author ids.

    ``by_identity`` is keyed by exact (name, email) pairs; ``by_email`` by
    normalized (lowercased, trimmed) email.
    """

    by_identity: Mapping[tuple[str, str], str] = field(default_factory=dict)
    by_email: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Freeze the mappings and reject empty canonical ids."""
        for author_id in (*self.by_identity.values(), *self.by_email.values()):
            if not author_id:
                raise ValueError("canonical author ids must be non-empty")
        object.__setattr__(self, "by_identity", MappingProxyType(dict(self.by_identity)))
        object.__setattr__(self, "by_email", MappingProxyType(dict(self.by_email)))


@dataclass(frozen=True)
class PerFileMeasure:
    """Contribution size of one file change."""

    path: str
    file_delta: int
    effective_metric: MetricKind
    fallback: FallbackReason | None = None


@dataclass(frozen=True)
class ContributionMeasure(BaseRecord):
    """Contribution size (delta L) of one commit under one metric."""

    commit_id: str
    requested_metric: MetricKind
    per_file: tuple[PerFileMeasure, ...] = ()

    @property
    def delta_l(self) -> float:
        """Sum of the per-file deltas, in metric units."""
        return float(sum(item.file_delta for item in self.per_file))

    @property
    def effective_metric(self) -> MetricKind:
        """Metric shared by every file, or the requested one when files disagree."""
        metrics = {item.effective_metric for item in self.per_file}
        if len(metrics) == 1:
            return metrics.pop()
        return self.requested_metric

    @property
    def fallback_applied(self) -> bool:
        """Whether any file fell back from complexity to word distance."""
        return any(item.fallback is FallbackReason.NO_COMPLEXITY_PROFILE for item in self.per_file)

    @property
    def oversize_applied(self) -> bool:
        """Whether any file was measured by line delta because of its size."""
        return any(item.fallback is FallbackReason.OVERSIZE for item in self.per_file)

    def to_dict(self) -> dict[str, Any]:
        """Convert the measure to a dictionary representation."""
        return {
            "commit_id": self.commit_id,
            "requested_metric": self.requested_metric.value,
            "effective_metric": self.effective_metric.value,
            "delta_l": self.delta_l,
            "fallback_applied": self.fallback_applied,
            "per_file": [
                {
                    "path": item.path,
                    "file_delta": item.file_delta,
                    "effective_metric": item.effective_metric.value,
                    "fallback": item.fallback.value if item.fallback else None,
                }
                for item in self.per_file
            ],
        }


@dataclass(frozen=True)
class CommitTimeDelta:
    """Elapsed time between an author's commit and their previous one."""

    commit_id: str
    author_id: str
    antecedent_id: str | None = None
    ctd_seconds: int | None = None

    def __post_init__(self) -> None:
        """Validate that antecedent and delta are present together."""
        if (self.antecedent_id is None) != (self.ctd_seconds is None):
            raise ValueError("antecedent_id and ctd_seconds must be both present or both absent")
        if self.ctd_seconds is not None and self.ctd_seconds < 0:
            raise ValueError(f"commit {self.commit_id} has a negative time delta")


@dataclass(frozen=True)
class RateBounds:
    """Interval bounds and trimming for the mean-bound rate fit."""

    t_min_seconds: int = DEFAULT_T_MIN_SECONDS
    t_max_seconds: int = DEFAULT_T_MAX_SECONDS
    trim_fraction: float = DEFAULT_TRIM_FRACTION

    def __post_init__(self) -> None:
        """Validate the bound ordering and trim range."""
        if self.t_min_seconds <= 0:
            raise ParameterError("t_min_seconds must be positive")
        if self.t_max_seconds <= self.t_min_seconds:
            raise ParameterError("t_max_seconds must be greater than t_min_seconds")
        if not 0.0 <= self.trim_fraction < 0.5:
            raise ParameterError("trim_fraction must lie in [0, 0.5)")


@dataclass(frozen=True)
class RateSample:
    """Contribution size and interval of one commit, classified against the bounds."""

    commit_id: str
    author_id: str
    metric: MetricKind
    delta_l: float
    ctd_seconds: int | None
    rate_units_per_hour: float | None
    observation: ObservationClass

    def __post_init__(self) -> None:
        """Validate that a rate is present exactly for observed intervals of positive length."""
        if self.delta_l < 0:
            raise ValueError(f"sample {self.commit_id} has negative contribution size")
        rated = self.observation is ObservationClass.OBSERVED and self.ctd_seconds is not None and self.ctd_seconds > 0
        if (self.rate_units_per_hour is not None) != rated:
            raise ValueError(
                f"sample {self.commit_id}: a rate requires an observed interval of positive length and vice versa",
            )


@dataclass(frozen=True)
class AuthorRate:
    """Fitted contribution rate of one author and the samples behind it."""

    rho: float
    support_count: int


@dataclass(frozen=True)
class RateModel(BaseRecord):
    """Fitted mean-bound contribution rates, global and per author."""

    global_rho: float
    per_author_rho: Mapping[str, AuthorRate]
    bounds: RateBounds
    metric: MetricKind
    total_support: int

    def __post_init__(self) -> None:
        """Validate positivity and freeze the per-author table."""
        if self.global_rho <= 0:
            raise ValueError("global_rho must be positive")
        for author_id, entry in self.per_author_rho.items():
            if entry.rho <= 0 or entry.support_count < 1:
                raise ValueError(f"invalid per-author rate for '{author_id}'")
        object.__setattr__(self, "per_author_rho", MappingProxyType(dict(self.per_author_rho)))

    def rho_for(self, author_id: str, min_support: int) -> float:
        """Return the author's own rate when well supported, else the global rate.

        Args:
            author_id: Canonical author id.
            min_support: Minimum number of observed samples for the per-author rate.

        Returns:
            Contribution rate in metric units per hour.
        """
        entry = self.per_author_rho.get(author_id)
        if entry is not None and entry.support_count >= min_support:
            return entry.rho
        return self.global_rho

    def to_dict(self) -> dict[str, Any]:
        """Convert the model to its JSON document."""
        return {
            "metric": self.metric.value,
            "bounds": asdict(self.bounds),
            "global_rho": self.global_rho,
            "total_support": self.total_support,
            "per_author": {
                author_id: {"rho": entry.rho, "support": entry.support_count}
                for author_id, entry in sorted(self.per_author_rho.items())
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> RateModel:
        """Build a model from its JSON document.

        Args:
            data: A dictionary previously produced by ``to_dict``.

        Returns:
            The reconstructed rate model.
        """
        return cls(
            global_rho=float(data["global_rho"]),
            per_author_rho={
                author_id: AuthorRate(rho=float(entry["rho"]), support_count=int(entry["support"]))
                for author_id, entry in data["per_author"].items()
            },
            bounds=RateBounds(**data["bounds"]),
            metric=MetricKind(data["metric"]),
            total_support=int(data["total_support"]),
        )


@dataclass(frozen=True)
class EffortEstimate(BaseRecord):
    """Estimated person-hours for one commit."""

    commit_id: str
    author_id: str
    delta_t_hours: float
    source: EffortSource
    capped: bool
    rho_used: float | None
    delta_l: float

    def __post_init__(self) -> None:
        """Validate the provenance invariants."""
        if self.delta_t_hours < 0:
            raise ValueError(f"commit {self.commit_id} has negative effort")
        if self.source is EffortSource.MEASURED and (self.capped or self.rho_used is not None):
            raise ValueError(f"measured estimate for {self.commit_id} cannot be capped or use a rate")
        if self.source is EffortSource.IMPUTED and self.rho_used is None:
            raise ValueError(f"imputed estimate for {self.commit_id} must record its rate")

    def to_dict(self) -> dict[str, Any]:
        """Convert the estimate to a dictionary representation."""
        data = asdict(self)
        data["source"] = self.source.value
        return data


@dataclass(frozen=True)
class EffortReportRow(BaseRecord):
    """Aggregated effort of one author within one time bucket."""

    author_id: str
    bucket_start: int
    bucket_kind: BucketKind
    commits: int
    measured_hours: float
    imputed_hours: float
    capped_count: int

    @property
    def total_hours(self) -> float:
        """Measured plus imputed hours."""
        return self.measured_hours + self.imputed_hours

    def to_dict(self) -> dict[str, Any]:
        """Convert the row to a dictionary with report field order."""
        return {
            "author_id": self.author_id,
            "bucket_start": self.bucket_start,
            "bucket_kind": self.bucket_kind.value,
            "commits": self.commits,
            "measured_hours": self.measured_hours,
            "imputed_hours": self.imputed_hours,
            "total_hours": self.total_hours,
            "capped_count": self.capped_count,
        }


@dataclass(frozen=True)
class RateTrendRow(BaseRecord):
    """Mean-bound contribution rate fitted over one time bucket."""

    bucket_start: int
    bucket_kind: BucketKind
    rho: float
    support: int

    def to_dict(self) -> dict[str, Any]:
        """Convert the row to a dictionary with report field order."""
        return {
            "bucket_start": self.bucket_start,
            "bucket_kind": self.bucket_kind.value,
            "rho": self.rho,
            "support": self.support,
        }
