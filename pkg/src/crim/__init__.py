"""crim - developer effort estimation from version-control history with mean-bound contribution rates."""

from ._config import ConfigFileLoader, ReportKind, RunConfig
from ._errors import (
    ComplexityUnavailable,
    ContractViolation,
    CrimError,
    DomainError,
    GitCommandFailed,
    InputError,
    InsufficientData,
    ParameterError,
    ToolEnvironmentError,
)
from ._git_adapter import GitHistoryReader, collect_from_git
from ._impute import estimate_commit_effort, estimate_history, forecast, impute_time
from ._ingest import (
    filter_window,
    load_identity_map,
    normalize_email,
    order_commits,
    parse_jsonl,
    read_jsonl,
    render_jsonl,
    resolve_authors,
)
from ._metrics import (
    cc_delta,
    count_function_entries,
    cyclomatic_complexity,
    levenshtein_words,
    line_diff_delta,
    measure_commit,
    measure_history,
    tokenize_words,
)
from ._models import (
    AuthorRate,
    BucketKind,
    CommitRecord,
    CommitTimeDelta,
    ContributionMeasure,
    EffortEstimate,
    EffortReportRow,
    EffortSource,
    FallbackReason,
    FileChange,
    IdentityMap,
    MetricKind,
    ObservationClass,
    PerFileMeasure,
    RateBounds,
    RateModel,
    RateSample,
    RateTrendRow,
)
from ._pipeline import AnalysisResult, analyze, analyze_records, build_report, explain, stage
from ._profiles import (
    BUILTIN_PROFILES,
    C_LIKE,
    MARKUP,
    RUST,
    SCRIPTING,
    SHELL,
    LanguageProfile,
    ProfileRegistry,
    builtin_registry,
    dump_profiles,
    load_profiles,
)
from ._rates import (
    bucket_start,
    build_samples,
    classify,
    contribution_rate,
    fit_mbcr,
    fit_model,
    fit_trend,
    load_model,
    save_model,
    select_rho,
)
from ._report_generator import ReportFormat, aggregate, format_timestamp, render, render_trend
from ._synth import (
    ErrorSummary,
    EvaluationReport,
    GapProfile,
    GroundTruth,
    SynthParams,
    TruthEntry,
    evaluate,
    generate,
    write_truth_csv,
)
from ._timedelta import compute_ctds
from ._types import RateProvider

__all__ = [
    "BUILTIN_PROFILES",
    "C_LIKE",
    "MARKUP",
    "RUST",
    "SCRIPTING",
    "SHELL",
    "AnalysisResult",
    "AuthorRate",
    "BucketKind",
    "CommitRecord",
    "CommitTimeDelta",
    "ComplexityUnavailable",
    "ConfigFileLoader",
    "ContractViolation",
    "ContributionMeasure",
    "CrimError",
    "DomainError",
    "EffortEstimate",
    "EffortReportRow",
    "EffortSource",
    "ErrorSummary",
    "EvaluationReport",
    "FallbackReason",
    "FileChange",
    "GapProfile",
    "GitCommandFailed",
    "GitHistoryReader",
    "GroundTruth",
    "IdentityMap",
    "InputError",
    "InsufficientData",
    "LanguageProfile",
    "MetricKind",
    "ObservationClass",
    "ParameterError",
    "PerFileMeasure",
    "ProfileRegistry",
    "RateBounds",
    "RateModel",
    "RateProvider",
    "RateSample",
    "RateTrendRow",
    "ReportFormat",
    "ReportKind",
    "RunConfig",
    "SynthParams",
    "ToolEnvironmentError",
    "TruthEntry",
    "aggregate",
    "analyze",
    "analyze_records",
    "bucket_start",
    "build_report",
    "build_samples",
    "builtin_registry",
    "cc_delta",
    "classify",
    "collect_from_git",
    "compute_ctds",
    "contribution_rate",
    "count_function_entries",
    "cyclomatic_complexity",
    "dump_profiles",
    "estimate_commit_effort",
    "estimate_history",
    "evaluate",
    "explain",
    "filter_window",
    "fit_mbcr",
    "fit_model",
    "fit_trend",
    "forecast",
    "format_timestamp",
    "generate",
    "impute_time",
    "levenshtein_words",
    "line_diff_delta",
    "load_identity_map",
    "load_model",
    "load_profiles",
    "measure_commit",
    "measure_history",
    "normalize_email",
    "order_commits",
    "parse_jsonl",
    "read_jsonl",
    "render",
    "render_jsonl",
    "render_trend",
    "resolve_authors",
    "save_model",
    "select_rho",
    "stage",
    "tokenize_words",
    "write_truth_csv",
]
