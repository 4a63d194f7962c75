"""Contribution size metrics: line delta, word edit distance and cyclomatic complexity."""

import logging
import os
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import Levenshtein

from ._constants import DEFAULT_MAX_FILE_CHARS, ERROR_MERGE_COMMIT
from ._errors import ComplexityUnavailable, ContractViolation
from ._models import CommitRecord, ContributionMeasure, FallbackReason, FileChange, MetricKind, PerFileMeasure
from ._profiles import LanguageProfile, ProfileRegistry

logger = logging.getLogger(__name__)


def tokenize_words(text: str) -> list[str]:
    """Split text into maximal runs of non-whitespace characters.

    Example:
        >>> tokenize_words("a\\nb\\tc")
        ['a', 'b', 'c']
    """
    return text.split()


def levenshtein_words(a: Sequence[str], b: Sequence[str]) -> int:
    """Return the minimal number of token insertions, deletions and substitutions turning ``a`` into ``b``."""
    return Levenshtein.distance(list(a), list(b))


def line_diff_delta(before: str, after: str) -> int:
    """Count lines present on only one side of a longest-common-subsequence alignment.

    A modified line counts twice: once removed, once added.

    Args:
        before: Old text.
        after: New text.

    Returns:
        Lines removed plus lines added.
    """
    # Substitution weighted as delete+insert gives the indel distance.
    return Levenshtein.distance(before.splitlines(), after.splitlines(), weights=(1, 1, 2))


def _strip_comments_and_strings(source: str, profile: LanguageProfile) -> str:
    """Replace comment and string literal spans with a single space each."""
    pattern = profile.masking_pattern
    return pattern.sub(" ", source) if pattern is not None else source


def cyclomatic_complexity(source: str, profile: LanguageProfile) -> int:
    """Approximate McCabe complexity as one plus the number of decision tokens.

    Tokens inside comments and string literals are not counted.

    Args:
        source: Source text.
        profile: Language profile supplying the token tables.

    Returns:
        Complexity, at least 1.

    Raises:
        ComplexityUnavailable: If the profile defines no decision tokens.

    Example:
        >>> from crim import C_LIKE
        >>> cyclomatic_complexity("if (a && b) { } else if (c) { }", C_LIKE)
        4
    """
    pattern = profile.decision_pattern
    if pattern is None:
        raise ComplexityUnavailable(f"profile '{profile.language_name}' does not support complexity")
    return 1 + len(pattern.findall(_strip_comments_and_strings(source, profile)))


def count_function_entries(source: str, profile: LanguageProfile) -> int:
    """Count function-entry tokens outside comments and string literals."""
    pattern = profile.function_pattern
    if pattern is None:
        return 0
    return len(pattern.findall(_strip_comments_and_strings(source, profile)))


def cc_delta(before: str | None, after: str | None, profile: LanguageProfile) -> int:
    """Return the absolute change in complexity between two file versions.

    An absent side has complexity 0.

    Raises:
        ComplexityUnavailable: If the profile defines no decision tokens.
    """
    before_cc = 0 if before is None else cyclomatic_complexity(before, profile)
    after_cc = 0 if after is None else cyclomatic_complexity(after, profile)
    return abs(after_cc - before_cc)


def _measure_file(
    change: FileChange,
    requested: MetricKind,
    registry: ProfileRegistry,
    max_file_chars: int,
) -> PerFileMeasure:
    """Measure one file change, applying the complexity and size fallbacks."""
    effective = requested
    fallback: FallbackReason | None = None
    profile = registry.for_path(change.path)

    if requested is MetricKind.CYCLOMATIC_DELTA and (profile is None or not profile.supports_complexity):
        effective = MetricKind.LEVENSHTEIN_WORDS
        fallback = FallbackReason.NO_COMPLEXITY_PROFILE

    if change.is_binary:
        return PerFileMeasure(change.path, 0, effective, fallback)

    before = change.before_content or ""
    after = change.after_content or ""
    if max(len(before), len(after)) > max_file_chars:
        logger.warning("measuring %s by line delta: content exceeds %d characters", change.path, max_file_chars)
        delta = line_diff_delta(before, after)
        return PerFileMeasure(change.path, delta, MetricKind.LOC_DELTA, FallbackReason.OVERSIZE)

    if effective is MetricKind.CYCLOMATIC_DELTA and profile is not None:
        delta = cc_delta(change.before_content, change.after_content, profile)
    elif effective is MetricKind.LEVENSHTEIN_WORDS:
        delta = levenshtein_words(tokenize_words(before), tokenize_words(after))
    else:
        delta = line_diff_delta(before, after)
    return PerFileMeasure(change.path, delta, effective, fallback)


def measure_commit(
    record: CommitRecord,
    requested: MetricKind,
    registry: ProfileRegistry,
    max_file_chars: int = DEFAULT_MAX_FILE_CHARS,
) -> ContributionMeasure:
    """Measure the contribution size of one commit.

    Files whose extension has no complexity-capable profile fall back from
    cyclomatic delta to word edit distance. Files larger than
    ``max_file_chars`` are measured by line delta. Binary files contribute 0.

    Args:
        record: A non-merge commit.
        requested: Metric to measure with.
        registry: Language profiles indexed by extension.
        max_file_chars: Size above which a file is measured by line delta.

    Returns:
        The commit's contribution measure.

    Raises:
        ContractViolation: If the commit is a merge.
    """
    if record.is_merge:
        raise ContractViolation(f"{ERROR_MERGE_COMMIT}: {record.commit_id}")
    per_file = tuple(_measure_file(change, requested, registry, max_file_chars) for change in record.files)
    measure = ContributionMeasure(commit_id=record.commit_id, requested_metric=requested, per_file=per_file)
    if measure.fallback_applied:
        logger.debug("commit %s: complexity fell back to word distance", record.commit_id)
    return measure


def measure_history(
    records: Sequence[CommitRecord],
    requested: MetricKind,
    registry: ProfileRegistry,
    workers: int | None = None,
    max_file_chars: int = DEFAULT_MAX_FILE_CHARS,
) -> list[ContributionMeasure]:
    """Measure every commit, optionally on a process pool.

    Args:
        records: Non-merge commits.
        requested: Metric to measure with.
        registry: Language profiles indexed by extension.
        workers: Worker processes; None means one per available processor.
        max_file_chars: Size above which a file is measured by line delta.

    Returns:
        Measures aligned with ``records``, identical for every worker count.
    """
    workers = workers or os.cpu_count() or 1
    measure = partial(measure_commit, requested=requested, registry=registry, max_file_chars=max_file_chars)
    if workers == 1 or len(records) < 2:
        return [measure(record) for record in records]

    chunksize = max(1, len(records) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(measure, records, chunksize=chunksize))
