"""Continuous performance monitoring: efficiency tables, history charts, badges.

The package turns raw per-run measurement files produced during CI jobs into
self-contained HTML reports built on the hierarchical efficiency-factor model
for hybrid MPI+OpenMP executions. History lives in CI artifact storage; no
database is involved.
"""

from .measurement import (
    GLOBAL_REGION,
    ExperimentTree,
    GitMetadata,
    NoMetadataSourceError,
    RegionMeasurement,
    ResourceConfig,
    RunMeasurement,
    SchemaError,
    SourcedRun,
    VersionError,
    Violation,
    inject_git_metadata,
    parse_run_measurement,
    resolve_timestamp,
    scan_experiment_tree,
    serialize_run_measurement,
    validate_consistency,
)
from .pop_model import DomainError, PopMetrics, compute_pop_metrics
from .scaling import (
    EfficiencyTable,
    RegionMissingError,
    ScalingFactors,
    ScalingMode,
    build_efficiency_table,
    detect_scaling_mode,
    latest_per_config,
    select_reference,
)
from .report import (
    Badge,
    EmptyTreeError,
    ReportBundle,
    TimeSeriesBundle,
    build_time_series,
    color_for,
    export_table_csv,
    render_badge_svg,
    render_report,
)
from .ci_client import (
    ArchiveError,
    ArtifactNotFound,
    ArtifactSource,
    AuthError,
    MergeStats,
    PathTraversalError,
    TransportError,
    download_artifacts,
    extract_archive,
    merge_history,
)

__all__ = [
    "GLOBAL_REGION",
    "ArchiveError",
    "ArtifactNotFound",
    "ArtifactSource",
    "AuthError",
    "Badge",
    "DomainError",
    "EfficiencyTable",
    "EmptyTreeError",
    "ExperimentTree",
    "GitMetadata",
    "MergeStats",
    "NoMetadataSourceError",
    "PathTraversalError",
    "PopMetrics",
    "RegionMeasurement",
    "RegionMissingError",
    "ReportBundle",
    "ResourceConfig",
    "RunMeasurement",
    "ScalingFactors",
    "ScalingMode",
    "SchemaError",
    "SourcedRun",
    "TimeSeriesBundle",
    "TransportError",
    "VersionError",
    "Violation",
    "build_efficiency_table",
    "build_time_series",
    "color_for",
    "compute_pop_metrics",
    "detect_scaling_mode",
    "download_artifacts",
    "export_table_csv",
    "extract_archive",
    "inject_git_metadata",
    "latest_per_config",
    "merge_history",
    "parse_run_measurement",
    "render_badge_svg",
    "render_report",
    "resolve_timestamp",
    "scan_experiment_tree",
    "select_reference",
    "serialize_run_measurement",
    "validate_consistency",
]

__version__ = "0.1.0"
