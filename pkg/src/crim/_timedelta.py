"""Commit time deltas between an author's consecutive commits."""

from collections.abc import Sequence

from ._constants import ERROR_MERGE_COMMIT, ERROR_UNRESOLVED_AUTHOR
from ._errors import ContractViolation
from ._models import CommitRecord, CommitTimeDelta


def compute_ctds(records: Sequence[CommitRecord]) -> list[CommitTimeDelta]:
    """Compute the time delta from each commit back to the same author's previous commit.

    Args:
        records: Non-merge commits ordered by (timestamp, commit id), authors resolved.

    Returns:
        One delta per record, aligned with the input. An author's first commit
        has no antecedent and no delta.

    Raises:
        ContractViolation: If a record has no author id or is a merge.

    Example:
        >>> from crim import CommitRecord
        >>> history = [CommitRecord("a", "A", "a@x", 1000, author_id="a@x"),
        ...            CommitRecord("b", "A", "a@x", 4600, author_id="a@x")]
        >>> [d.ctd_seconds for d in compute_ctds(history)]
        [None, 3600]
    """
    previous: dict[str, CommitRecord] = {}
    deltas = []
    for record in records:
        if not record.author_id:
            raise ContractViolation(f"{ERROR_UNRESOLVED_AUTHOR}: {record.commit_id}")
        if record.is_merge:
            raise ContractViolation(f"{ERROR_MERGE_COMMIT}: {record.commit_id}")

        antecedent = previous.get(record.author_id)
        if antecedent is None:
            deltas.append(CommitTimeDelta(commit_id=record.commit_id, author_id=record.author_id))
        else:
            deltas.append(
                CommitTimeDelta(
                    commit_id=record.commit_id,
                    author_id=record.author_id,
                    antecedent_id=antecedent.commit_id,
                    ctd_seconds=record.timestamp - antecedent.timestamp,
                ),
            )
        previous[record.author_id] = record
    return deltas
