"""Commit record ingestion: JSONL parsing, identity resolution and ordering."""

import json
import logging
from collections.abc import Iterable, Sequence
from dataclasses import replace
from pathlib import Path
from typing import Any

from ._errors import InputError
from ._json_validator import COMMIT_SCHEMA, IDENTITY_MAP_SCHEMA, load_json_document, validate_document
from ._models import CommitRecord, FileChange, IdentityMap

logger = logging.getLogger(__name__)


def normalize_email(email: str) -> str:
    """Return the default author identity for an email: trimmed and lowercased."""
    return email.strip().lower()


def _record_from_payload(payload: dict[str, Any], line_number: int) -> CommitRecord:
    """Build a commit record from a validated JSONL payload.

    Args:
        payload: The validated JSON object.
        line_number: 1-based line number, for error messages.

    Returns:
        The commit record.

    Raises:
        InputError: If the payload violates a record invariant.
    """
    try:
        files = tuple(
            FileChange(
                path=entry["path"],
                before_content=None if entry["is_binary"] else entry["before"],
                after_content=None if entry["is_binary"] else entry["after"],
                is_binary=entry["is_binary"],
            )
            for entry in payload["files"]
        )
        return CommitRecord(
            commit_id=payload["id"],
            author_name=payload["author_name"],
            author_email=payload["author_email"],
            timestamp=int(payload["timestamp"]),
            is_merge=payload["is_merge"],
            files=files,
        )
    except ValueError as e:
        raise InputError(f"{e}, line {line_number}") from e


def parse_jsonl(lines: Iterable[str]) -> list[CommitRecord]:
    """Parse a JSONL commit export into commit records.

    Args:
        lines: Text lines, one JSON object per non-empty line.

    Returns:
        Commit records in input order.

    Raises:
        InputError: On malformed JSON, schema violations or duplicate commit ids.

    Example:
        >>> parse_jsonl(['{"id":"c1","author_name":"A","author_email":"a@x",'
        ...              '"timestamp":1000,"is_merge":false,"files":[]}'])[0].commit_id
        'c1'
    """
    records: list[CommitRecord] = []
    seen: set[str] = set()
    for line_number, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as e:
            raise InputError(f"malformed JSON on line {line_number}: {e.msg}") from e

        validate_document(payload, COMMIT_SCHEMA, f"line {line_number}")
        record = _record_from_payload(payload, line_number)
        if record.commit_id in seen:
            raise InputError(f"duplicate commit id '{record.commit_id}', line {line_number}")
        seen.add(record.commit_id)
        records.append(record)

    logger.debug("parsed %d commit records from JSONL", len(records))
    return records


def read_jsonl(path: str | Path) -> list[CommitRecord]:
    """Parse a JSONL commit export from a file.

    Args:
        path: Path to the JSONL file.

    Returns:
        Commit records in file order.

    Raises:
        InputError: If the file cannot be read or contains invalid records.
    """
    try:
        with Path(path).open(encoding="utf-8") as f:
            return parse_jsonl(f)
    except FileNotFoundError as e:
        raise InputError(f"file not found: {path}") from e
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"cannot read {path}: {e}") from e


def render_jsonl(records: Sequence[CommitRecord]) -> str:
    """Render commit records as JSONL text, the inverse of ``parse_jsonl``."""
    return "".join(json.dumps(record.to_dict(), ensure_ascii=False, sort_keys=False) + "\n" for record in records)


def load_identity_map(path: str | Path) -> IdentityMap:
    """Load an identity map file.

    Args:
        path: Path to a JSON document of the form ``{"identities": [...]}``.

    Returns:
        The identity map.

    Raises:
        InputError: If the file is invalid or a key maps to two canonical ids.
    """
    data = load_json_document(path, IDENTITY_MAP_SCHEMA)
    by_identity: dict[tuple[str, str], str] = {}
    by_email: dict[str, str] = {}
    for entry in data["identities"]:
        author_id = entry["author_id"]
        if "name" in entry:
            key = (entry["name"], entry["email"])
            table: dict = by_identity
        else:
            key = normalize_email(entry["email"])
            table = by_email
        if table.get(key, author_id) != author_id:
            raise InputError(f"identity {key!r} maps to both '{table[key]}' and '{author_id}' in {path}")
        table[key] = author_id
    return IdentityMap(by_identity=by_identity, by_email=by_email)


def resolve_authors(records: Sequence[CommitRecord], identity_map: IdentityMap | None = None) -> list[CommitRecord]:
    """Set the canonical author id on every record.

    Lookup order: exact (name, email) key, then email-only key, then the
    trimmed, lowercased email.

    Args:
        records: Commit records in any order.
        identity_map: Optional explicit identity overrides.

    Returns:
        New records with ``author_id`` set, in input order.
    """
    identity_map = identity_map or IdentityMap()
    resolved = []
    for record in records:
        email = normalize_email(record.author_email)
        author_id = (
            identity_map.by_identity.get((record.author_name, record.author_email))
            or identity_map.by_email.get(email)
            or email
        )
        if not author_id:
            # Empty emails fall back to the display name so ids stay non-empty.
            author_id = record.author_name.strip().lower() or record.commit_id
        resolved.append(replace(record, author_id=author_id))
    return resolved


def order_commits(records: Iterable[CommitRecord]) -> list[CommitRecord]:
    """Sort records by timestamp, breaking ties by commit id."""
    return sorted(records, key=lambda r: (r.timestamp, r.commit_id))


def filter_window(
    records: Iterable[CommitRecord],
    since: int | None = None,
    until: int | None = None,
) -> list[CommitRecord]:
    """Keep records whose timestamp lies within ``[since, until]``.

    Args:
        records: Commit records.
        since: Inclusive lower bound, or None for no bound.
        until: Inclusive upper bound, or None for no bound.

    Returns:
        Records inside the window, in input order.
    """
    return [
        r for r in records if (since is None or r.timestamp >= since) and (until is None or r.timestamp <= until)
    ]
