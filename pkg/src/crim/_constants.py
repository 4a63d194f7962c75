"""Constants used throughout the package."""

from typing import Final

# Time units
SECONDS_PER_HOUR: Final[int] = 3600
SECONDS_PER_DAY: Final[int] = 86_400

# Rate model defaults
DEFAULT_T_MIN_SECONDS: Final[int] = 60
DEFAULT_T_MAX_SECONDS: Final[int] = 28_800  # one workday
DEFAULT_TRIM_FRACTION: Final[float] = 0.05
DEFAULT_MIN_SUPPORT: Final[int] = 5

# Measurement limits
DEFAULT_MAX_FILE_CHARS: Final[int] = 1_000_000
BINARY_SNIFF_BYTES: Final[int] = 8000

# Report layout
CSV_HEADER: Final[tuple[str, ...]] = (
    "author_id",
    "bucket_start",
    "bucket_kind",
    "commits",
    "measured_hours",
    "imputed_hours",
    "total_hours",
    "capped_count",
)
TREND_CSV_HEADER: Final[tuple[str, ...]] = ("bucket_start", "bucket_kind", "rho", "support")
HOURS_DECIMALS: Final[int] = 4
TIMESTAMP_FORMAT: Final[str] = "%Y-%m-%dT%H:%M:%SZ"

# Git adapter
GIT_FIELD_SEPARATOR: Final[str] = "\x00"
GIT_RECORD_SEPARATOR: Final[str] = "\x1e"
GIT_LOG_FORMAT: Final[str] = "%x1e%H%x00%P%x00%an%x00%ae%x00%at"
GIT_SUBMODULE_MODE: Final[str] = "160000"

# Logging
DEFAULT_LOG_LEVEL: Final[str] = "WARNING"
LOG_FORMAT: Final[str] = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Error messages
ERROR_INSUFFICIENT_DATA: Final[str] = "insufficient observed samples to fit MBCR"
ERROR_ZERO_RATE: Final[str] = "observed contribution rates average to zero; cannot fit MBCR"
ERROR_MERGE_COMMIT: Final[str] = "merge commits cannot be measured"
ERROR_UNRESOLVED_AUTHOR: Final[str] = "author_id is not resolved"
ERROR_ZERO_CTD: Final[str] = "contribution rate undefined for a zero-length interval"
ERROR_NON_POSITIVE_RHO: Final[str] = "model contribution rate must be positive"
