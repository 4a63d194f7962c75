"""JSON Schema validation for every document crossing the package boundary."""

import json
from pathlib import Path
from typing import Any, Final

from jsonschema import ValidationError, validators
from referencing.jsonschema import EMPTY_REGISTRY

from ._errors import InputError
from ._types import JsonData

FILE_SCHEMA: Final[dict[str, Any]] = {
    "type": "object",
    "required": ["path", "before", "after", "is_binary"],
    "properties": {
        "path": {"type": "string", "minLength": 1},
        "before": {"type": ["string", "null"]},
        "after": {"type": ["string", "null"]},
        "is_binary": {"type": "boolean"},
    },
}

COMMIT_SCHEMA: Final[dict[str, Any]] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["id", "author_name", "author_email", "timestamp", "is_merge", "files"],
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "author_name": {"type": "string"},
        "author_email": {"type": "string"},
        "timestamp": {"type": "integer", "minimum": 0},
        "is_merge": {"type": "boolean"},
        "files": {"type": "array", "items": FILE_SCHEMA},
    },
}

IDENTITY_MAP_SCHEMA: Final[dict[str, Any]] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["identities"],
    "properties": {
        "identities": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["author_id", "email"],
                "properties": {
                    "author_id": {"type": "string", "minLength": 1},
                    "email": {"type": "string", "minLength": 1},
                    "name": {"type": "string"},
                },
            },
        },
    },
}

PROFILES_SCHEMA: Final[dict[str, Any]] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["profiles"],
    "properties": {
        "profiles": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "extensions", "decision_tokens"],
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "extensions": {"type": "array", "items": {"type": "string", "minLength": 1}},
                    "decision_tokens": {"type": "array", "items": {"type": "string", "minLength": 1}},
                    "function_tokens": {"type": "array", "items": {"type": "string", "minLength": 1}},
                    "line_comments": {"type": "array", "items": {"type": "string", "minLength": 1}},
                    "block_comments": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "items": {"type": "string", "minLength": 1},
                            "minItems": 2,
                            "maxItems": 2,
                        },
                    },
                    "string_delimiters": {"type": "array", "items": {"type": "string", "minLength": 1}},
                },
            },
        },
    },
}

MODEL_SCHEMA: Final[dict[str, Any]] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["metric", "bounds", "global_rho", "total_support", "per_author"],
    "properties": {
        "metric": {"enum": ["loc", "lev", "cc"]},
        "bounds": {
            "type": "object",
            "required": ["t_min_seconds", "t_max_seconds", "trim_fraction"],
            "properties": {
                "t_min_seconds": {"type": "integer", "exclusiveMinimum": 0},
                "t_max_seconds": {"type": "integer", "exclusiveMinimum": 0},
                "trim_fraction": {"type": "number", "minimum": 0, "exclusiveMaximum": 0.5},
            },
            "additionalProperties": False,
        },
        "global_rho": {"type": "number", "exclusiveMinimum": 0},
        "total_support": {"type": "integer", "minimum": 0},
        "per_author": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["rho", "support"],
                "properties": {
                    "rho": {"type": "number", "exclusiveMinimum": 0},
                    "support": {"type": "integer", "minimum": 1},
                },
            },
        },
    },
}

_TYPE_PHRASES: Final[dict[str, str]] = {
    "integer": "an integer",
    "number": "a number",
    "string": "a string",
    "boolean": "a boolean",
    "array": "an array",
    "object": "an object",
    "null": "null",
}


def _field_name(error: ValidationError) -> str:
    """Render the JSON path of a validation error as a dotted field name."""
    return ".".join(str(p) for p in error.absolute_path)


def _first_error(data: JsonData, schema: dict[str, Any]) -> ValidationError | None:
    """Return the first validation error in path order, if any.

    Args:
        data: The document to validate.
        schema: The JSON schema to validate against.

    Returns:
        The first error, or None when the document is valid.
    """
    validator_class = validators.validator_for(schema)
    validator = validator_class(schema, registry=EMPTY_REGISTRY)
    errors = sorted(validator.iter_errors(data), key=lambda e: [str(p) for p in e.absolute_path])
    return errors[0] if errors else None


def describe_error(error: ValidationError) -> str:
    """Format a validation error for human-readable output.

    Args:
        error: Validation error from jsonschema.

    Returns:
        Message naming the offending field, e.g. ``timestamp not an integer``.
    """
    name = _field_name(error)
    if error.validator == "required" and isinstance(error.instance, dict):
        missing = next(key for key in error.validator_value if key not in error.instance)
        field = f"{name}.{missing}" if name else missing
        return f"missing required field '{field}'"
    if error.validator == "type":
        expected = error.validator_value
        options = expected if isinstance(expected, list) else [expected]
        phrase = " or ".join(_TYPE_PHRASES.get(option, option) for option in options)
        return f"{name or 'document'} not {phrase}"
    return f"{name or 'document'}: {error.message}"


def validate_document(data: JsonData, schema: dict[str, Any], where: str) -> None:
    """Validate a document, raising InputError on the first violation.

    Args:
        data: The parsed JSON document.
        schema: The JSON schema to validate against.
        where: Location suffix for the message, such as ``line 3`` or a file path.

    Raises:
        InputError: If the document violates the schema.
    """
    error = _first_error(data, schema)
    if error is not None:
        raise InputError(f"{describe_error(error)}, {where}")


def load_json_document(path: str | Path, schema: dict[str, Any]) -> Any:  # noqa: ANN401
    """Load a JSON file and validate it against a schema.

    Args:
        path: Path to the JSON file.
        schema: The JSON schema to validate against.

    Returns:
        The loaded, validated document.

    Raises:
        InputError: If the file is missing, is not JSON, or violates the schema.
    """
    path_obj = Path(path)
    try:
        with path_obj.open("r", encoding="utf-8") as file:
            data = json.load(file)
    except FileNotFoundError as e:
        raise InputError(f"file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON in {path}: {e.msg} (line {e.lineno})") from e
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"cannot read {path}: {e}") from e
    validate_document(data, schema, str(path))
    return data
