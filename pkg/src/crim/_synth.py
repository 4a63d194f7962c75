"""Synthetic commit histories with known ground-truth effort."""

import csv
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from ._constants import SECONDS_PER_HOUR
from ._errors import ContractViolation, ParameterError
from ._ingest import order_commits
from ._models import CommitRecord, EffortEstimate, EffortSource, FileChange

logger = logging.getLogger(__name__)

TOKENS_PER_LINE = 12
TRUTH_CSV_HEADER = ("commit_id", "true_effort_hours", "true_rate")


@dataclass(frozen=True)
class GapProfile:
    """Idle time inserted between work sessions.

    With probability ``idle_probability`` a commit (other than an author's
    first) is preceded by ``min_idle_hours`` plus an exponential draw with
    mean ``mean_extra_idle_hours``; otherwise it follows the previous commit
    with no idle time.
    """

    idle_probability: float = 0.3
    min_idle_hours: float = 8.0
    mean_extra_idle_hours: float = 48.0


@dataclass(frozen=True)
class SynthParams:
    """Parameters of a synthetic history."""

    seed: int
    n_commits: int
    n_authors: int = 1
    true_rho: float = 60.0
    noise_sigma: float = 0.0
    gap_profile: GapProfile = field(default_factory=GapProfile)
    effort_min_hours: float = 0.25
    effort_max_hours: float = 4.0
    size_scale: int = 1
    base_timestamp: int = 1_700_000_000

    def validate(self) -> None:
        """Check parameter domains.

        Raises:
            ParameterError: If any parameter is outside its domain or every
                intended edit count would round to zero.
        """
        if self.n_commits < 1:
            raise ParameterError("n_commits must be at least 1")
        if self.n_authors < 1:
            raise ParameterError("n_authors must be at least 1")
        if self.true_rho <= 0:
            raise ParameterError("true_rho must be positive")
        if self.noise_sigma < 0:
            raise ParameterError("noise_sigma must be non-negative")
        if not 0 < self.effort_min_hours <= self.effort_max_hours:
            raise ParameterError("effort range must satisfy 0 < min <= max")
        if self.size_scale < 1:
            raise ParameterError("size_scale must be a positive integer")
        if self.base_timestamp < 0:
            raise ParameterError("base_timestamp must be non-negative")
        gaps = self.gap_profile
        if not 0 <= gaps.idle_probability <= 1:
            raise ParameterError("idle_probability must lie in [0, 1]")
        if gaps.min_idle_hours < 0 or gaps.mean_extra_idle_hours < 0:
            raise ParameterError("idle durations must be non-negative")
        if self.noise_sigma == 0 and round(self.effort_max_hours * self.true_rho) == 0:
            raise ParameterError("every intended edit count rounds to zero; raise true_rho or the effort range")


@dataclass(frozen=True)
class TruthEntry:
    """Ground truth for one synthetic commit."""

    commit_id: str
    author_id: str
    true_effort_hours: float
    true_rate: float
    delta_l: int
    idle_seconds: int


@dataclass(frozen=True)
class GroundTruth:
    """Ground truth aligned with the generated records."""

    entries: tuple[TruthEntry, ...]

    @property
    def total_effort_hours(self) -> float:
        """Sum of true effort over all commits."""
        return math.fsum(entry.true_effort_hours for entry in self.entries)


@dataclass(frozen=True)
class ErrorSummary:
    """Estimation error over a set of commits.

    Percentages are in percent; ``total_relative_error`` is a fraction.
    """

    count: int
    mape_percent: float | None
    mdape_percent: float | None
    total_relative_error: float | None


@dataclass(frozen=True)
class EvaluationReport:
    """Estimation error over imputed commits and over all commits."""

    imputed: ErrorSummary
    overall: ErrorSummary


def _realize_text(commit_index: int, n_tokens: int) -> str:
    """Build text made of ``n_tokens`` tokens unique to one commit."""
    tokens = [f"w{commit_index}x{j}" for j in range(n_tokens)]
    lines = [" ".join(tokens[i : i + TOKENS_PER_LINE]) for i in range(0, len(tokens), TOKENS_PER_LINE)]
    return "\n".join(lines) + "\n"


def generate(params: SynthParams) -> tuple[list[CommitRecord], GroundTruth]:
    """Generate a commit history whose true effort and rates are known.

    Each commit creates one file holding exactly its intended number of new
    word tokens, so its word edit distance equals the intended contribution
    size. Commits designated unobserved are preceded by idle time; all others
    follow the author's previous commit immediately.

    Args:
        params: Generator parameters.

    Returns:
        Records ordered by (timestamp, commit id) and ground truth in the same order.

    Raises:
        ParameterError: If the parameters are invalid.
    """
    params.validate()
    rng = np.random.default_rng(params.seed)
    gaps = params.gap_profile
    clocks = [params.base_timestamp] * params.n_authors
    seen_authors: set[int] = set()

    records: list[CommitRecord] = []
    truth: dict[str, TruthEntry] = {}
    for index in range(params.n_commits):
        author = int(rng.integers(params.n_authors))
        effort_hours = float(rng.uniform(params.effort_min_hours, params.effort_max_hours))
        rate = params.true_rho * math.exp(float(rng.normal(0.0, params.noise_sigma)))
        idle_draw = float(rng.random())
        extra_idle_hours = float(rng.exponential(gaps.mean_extra_idle_hours))

        delta_units = max(1, round(effort_hours * rate))
        effort_seconds = max(1, round(delta_units * SECONDS_PER_HOUR / rate))
        idle_seconds = 0
        if author in seen_authors and idle_draw < gaps.idle_probability:
            idle_seconds = round((gaps.min_idle_hours + extra_idle_hours) * SECONDS_PER_HOUR)
        seen_authors.add(author)

        clocks[author] += idle_seconds + effort_seconds
        delta_l = delta_units * params.size_scale
        commit_id = f"s{index:06d}"
        email = f"dev{author}@example.com"
        records.append(
            CommitRecord(
                commit_id=commit_id,
                author_name=f"Developer {author}",
                author_email=email,
                timestamp=clocks[author],
                files=(FileChange(f"notes/dev{author}/{commit_id}.txt", None, _realize_text(index, delta_l)),),
            ),
        )
        truth[commit_id] = TruthEntry(
            commit_id=commit_id,
            author_id=email,
            true_effort_hours=effort_seconds / SECONDS_PER_HOUR,
            true_rate=delta_l * SECONDS_PER_HOUR / effort_seconds,
            delta_l=delta_l,
            idle_seconds=idle_seconds,
        )

    ordered = order_commits(records)
    logger.info("generated %d synthetic commits for %d authors", len(ordered), params.n_authors)
    return ordered, GroundTruth(tuple(truth[r.commit_id] for r in ordered))


def write_truth_csv(truth: GroundTruth, stream: TextIO) -> None:
    """Write ground truth as CSV with header ``commit_id,true_effort_hours,true_rate``."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(TRUTH_CSV_HEADER)
    for entry in truth.entries:
        writer.writerow((entry.commit_id, repr(entry.true_effort_hours), repr(entry.true_rate)))


def _summarize(pairs: Sequence[tuple[float, float]]) -> ErrorSummary:
    """Summarize (estimate, truth) pairs."""
    if not pairs:
        return ErrorSummary(count=0, mape_percent=None, mdape_percent=None, total_relative_error=None)
    estimates = np.array([p[0] for p in pairs], dtype=float)
    actual = np.array([p[1] for p in pairs], dtype=float)
    ape = np.abs(estimates - actual) / actual * 100.0
    total_actual = float(actual.sum())
    return ErrorSummary(
        count=len(pairs),
        mape_percent=float(ape.mean()),
        mdape_percent=float(np.median(ape)),
        total_relative_error=abs(float(estimates.sum()) - total_actual) / total_actual,
    )


def evaluate(truth: GroundTruth, estimates: Sequence[EffortEstimate]) -> EvaluationReport:
    """Compare effort estimates with ground truth.

    Args:
        truth: Ground truth of a generated history.
        estimates: Estimates aligned 1:1 with the truth entries.

    Returns:
        Percentage errors over imputed commits and over all commits.

    Raises:
        ContractViolation: If the estimates are not aligned with the truth.
    """
    if len(truth.entries) != len(estimates):
        raise ContractViolation(f"{len(estimates)} estimates for {len(truth.entries)} truth entries")

    overall: list[tuple[float, float]] = []
    imputed: list[tuple[float, float]] = []
    for entry, estimate in zip(truth.entries, estimates, strict=True):
        if entry.commit_id != estimate.commit_id:
            raise ContractViolation(f"estimate {estimate.commit_id} aligned with truth {entry.commit_id}")
        pair = (estimate.delta_t_hours, entry.true_effort_hours)
        overall.append(pair)
        if estimate.source is EffortSource.IMPUTED:
            imputed.append(pair)
    return EvaluationReport(imputed=_summarize(imputed), overall=_summarize(overall))
