"""Type definitions and protocols for the package."""

from typing import Any, Protocol, TypedDict

from ._models import MetricKind

# Type aliases
JsonData = dict[str, Any] | list[Any] | str | int | float | bool | None
JsonObject = dict[str, Any]


__all__ = [
    "CommitPayload",
    "FilePayload",
    "JsonData",
    "JsonObject",
    "ProfilePayload",
    "RateProvider",
]


class FilePayload(TypedDict):
    """Type definition for one file entry of a JSONL commit line."""

    path: str
    before: str | None
    after: str | None
    is_binary: bool


class CommitPayload(TypedDict):
    """Type definition for one JSONL commit line."""

    id: str
    author_name: str
    author_email: str
    timestamp: int
    is_merge: bool
    files: list[FilePayload]


class ProfilePayload(TypedDict):
    """Type definition for one language profile entry."""

    name: str
    extensions: list[str]
    decision_tokens: list[str]
    function_tokens: list[str]
    line_comments: list[str]
    block_comments: list[list[str]]
    string_delimiters: list[str]


class RateProvider(Protocol):
    """Protocol for anything that can supply a model contribution rate.

    The fitted mean-bound model is one implementation; regression-style
    models plug in by implementing the same two members.
    """

    @property
    def metric(self) -> MetricKind:
        """Metric the rates are expressed in."""
        ...

    def rho_for(self, author_id: str, min_support: int) -> float:
        """Return the contribution rate, in metric units per hour, to apply to an author."""
        ...
