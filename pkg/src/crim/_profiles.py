"""Language profiles: token tables driving complexity measurement."""

from __future__ import annotations

import json
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import PurePosixPath
from typing import Any

from ._errors import InputError
from ._json_validator import PROFILES_SCHEMA, load_json_document, validate_document


@dataclass(frozen=True)
class LanguageProfile:
    """Lexical description of a family of languages.

    Attributes:
        language_name: Profile name.
        file_extensions: Lowercase extensions without the leading dot.
        decision_tokens: Tokens counted as decision points.
        function_tokens: Tokens counted as function entries.
        line_comments: Line-comment prefixes.
        block_comments: (open, close) block-comment delimiter pairs.
        string_delimiters: Quote characters opening and closing string literals.
    """

    language_name: str
    file_extensions: tuple[str, ...]
    decision_tokens: tuple[str, ...] = ()
    function_tokens: tuple[str, ...] = ()
    line_comments: tuple[str, ...] = ()
    block_comments: tuple[tuple[str, str], ...] = ()
    string_delimiters: tuple[str, ...] = ()

    @property
    def supports_complexity(self) -> bool:
        """Whether the profile defines any decision tokens."""
        return bool(self.decision_tokens)

    @cached_property
    def masking_pattern(self) -> re.Pattern[str] | None:
        """Regex matching comments and string literals, or None when the profile has neither."""
        alternatives = [
            f"{re.escape(opening)}.*?(?:{re.escape(closing)}|\\Z)" for opening, closing in self.block_comments
        ]
        alternatives += [f"{re.escape(prefix)}[^\\n]*" for prefix in self.line_comments]
        for quote in self.string_delimiters:
            q = re.escape(quote)
            if quote == "'":
                # single-quoted literals end at the line break
                alternatives.append(f"{q}(?:\\\\.|(?!{q})[^\\n])*?(?:{q}|(?=\\n)|\\Z)")
            else:
                alternatives.append(f"{q}(?:\\\\.|(?!{q}).)*?(?:{q}|\\Z)")
        if not alternatives:
            return None
        return re.compile("|".join(alternatives), re.DOTALL)

    @cached_property
    def decision_pattern(self) -> re.Pattern[str] | None:
        """Regex matching any decision token."""
        return _token_pattern(self.decision_tokens)

    @cached_property
    def function_pattern(self) -> re.Pattern[str] | None:
        """Regex matching any function-entry token."""
        return _token_pattern(self.function_tokens)

    def to_dict(self) -> dict[str, Any]:
        """Convert the profile to its JSON entry."""
        return {
            "name": self.language_name,
            "extensions": list(self.file_extensions),
            "decision_tokens": list(self.decision_tokens),
            "function_tokens": list(self.function_tokens),
            "line_comments": list(self.line_comments),
            "block_comments": [list(pair) for pair in self.block_comments],
            "string_delimiters": list(self.string_delimiters),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> LanguageProfile:
        """Build a profile from its JSON entry."""
        return cls(
            language_name=data["name"],
            file_extensions=tuple(ext.lower().lstrip(".") for ext in data["extensions"]),
            decision_tokens=tuple(data["decision_tokens"]),
            function_tokens=tuple(data.get("function_tokens", ())),
            line_comments=tuple(data.get("line_comments", ())),
            block_comments=tuple((pair[0], pair[1]) for pair in data.get("block_comments", ())),
            string_delimiters=tuple(data.get("string_delimiters", ())),
        )


def _token_pattern(tokens: Iterable[str]) -> re.Pattern[str] | None:
    """Compile tokens into one alternation, longest first.

    Tokens made of word characters only match at word boundaries; operator
    tokens match literally.
    """
    parts = []
    for token in sorted(set(tokens), key=lambda t: (-len(t), t)):
        escaped = re.escape(token)
        parts.append(f"\\b{escaped}\\b" if re.fullmatch(r"\w+", token) else escaped)
    return re.compile("|".join(parts)) if parts else None


@dataclass(frozen=True)
class ProfileRegistry:
    """Set of language profiles indexed by file extension."""

    profiles: tuple[LanguageProfile, ...]
    _by_extension: dict[str, LanguageProfile] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        """Index profiles by extension, rejecting duplicates."""
        index: dict[str, LanguageProfile] = {}
        for profile in self.profiles:
            for extension in profile.file_extensions:
                if extension in index:
                    raise InputError(
                        f"extension '{extension}' claimed by both "
                        f"'{index[extension].language_name}' and '{profile.language_name}'",
                    )
                index[extension] = profile
        object.__setattr__(self, "_by_extension", index)

    def for_path(self, path: str) -> LanguageProfile | None:
        """Return the profile for a repository-relative path, if its extension is known."""
        suffix = PurePosixPath(path).suffix.lower().lstrip(".")
        return self._by_extension.get(suffix) if suffix else None

    def to_dict(self) -> dict[str, Any]:
        """Convert the registry to its JSON document."""
        return {"profiles": [profile.to_dict() for profile in self.profiles]}


C_LIKE = LanguageProfile(
    language_name="c-like",
    file_extensions=(
        "c", "h", "cc", "cpp", "cxx", "hpp", "hh", "cs", "java", "js", "jsx", "mjs", "ts", "tsx",
        "go", "swift", "kt", "kts", "scala", "php", "m", "dart",
    ),  # fmt: skip
    decision_tokens=("if", "for", "while", "case", "catch", "&&", "||", "?"),
    function_tokens=("function", "func", "fn", "fun", "def"),
    line_comments=("//",),
    block_comments=(("/*", "*/"),),
    string_delimiters=('"', "'", "`"),
)

RUST = LanguageProfile(
    language_name="rust",
    file_extensions=("rs",),
    decision_tokens=("if", "for", "while", "=>", "&&", "||", "?"),
    function_tokens=("fn",),
    line_comments=("//",),
    block_comments=(("/*", "*/"),),
    string_delimiters=('"',),
)

SCRIPTING = LanguageProfile(
    language_name="scripting",
    file_extensions=("py", "pyw", "rb", "pl", "pm", "lua", "r", "jl"),
    decision_tokens=(
        "if", "elif", "elsif", "unless", "for", "while", "until", "except", "rescue", "when", "and", "or", "&&", "||",
    ),  # fmt: skip
    function_tokens=("def", "function", "sub", "lambda"),
    line_comments=("#",),
    string_delimiters=('"""', "'''", '"', "'"),
)

SHELL = LanguageProfile(
    language_name="shell",
    file_extensions=("sh", "bash", "zsh", "ksh"),
    decision_tokens=("if", "elif", "for", "while", "until", "&&", "||"),
    function_tokens=("function",),
    line_comments=("#",),
    string_delimiters=('"', "'"),
)

MARKUP = LanguageProfile(
    language_name="markup",
    file_extensions=(
        "html", "htm", "xml", "svg", "xhtml", "md", "markdown", "rst", "txt", "css", "scss", "json", "yaml", "yml",
        "toml", "ini", "csv",
    ),  # fmt: skip
    block_comments=(("<!--", "-->"),),
)

BUILTIN_PROFILES: tuple[LanguageProfile, ...] = (C_LIKE, RUST, SCRIPTING, SHELL, MARKUP)


def builtin_registry() -> ProfileRegistry:
    """Return the registry of built-in language profiles."""
    return ProfileRegistry(BUILTIN_PROFILES)


def registry_from_dict(data: Mapping[str, Any], where: str = "profiles document") -> ProfileRegistry:
    """Build a registry from a profiles document.

    Args:
        data: Parsed JSON of the form ``{"profiles": [...]}``.
        where: Location used in error messages.

    Returns:
        The profile registry.

    Raises:
        InputError: If the document is invalid or extensions collide.
    """
    validate_document(dict(data), PROFILES_SCHEMA, where)
    return ProfileRegistry(tuple(LanguageProfile.from_dict(entry) for entry in data["profiles"]))


def load_profiles(path: str) -> ProfileRegistry:
    """Load a profile registry from a JSON file.

    Args:
        path: Path to the profiles file, same layout as ``crim profiles dump``.

    Returns:
        The profile registry.
    """
    return registry_from_dict(load_json_document(path, PROFILES_SCHEMA), path)


def dump_profiles(registry: ProfileRegistry) -> str:
    """Render a registry as pretty-printed JSON text."""
    return json.dumps(registry.to_dict(), ensure_ascii=False, indent=2) + "\n"
