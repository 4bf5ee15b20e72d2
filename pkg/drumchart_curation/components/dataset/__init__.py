from .pipeline import CurationPipeline, PipelineConfig, TrackResult
from .records import SCHEMA_VERSION, DiscardReason, Manifest, ManifestError, TrackRecord, TrackStatus
from .screening import ScoreFileError, parse_scores, read_scores, score_filter
from .settings import DatasetSettings
from .splits import (
    FoldRoles,
    InvalidFoldError,
    SplitAssignment,
    SplitError,
    SplitFileError,
    TooFewArtistsError,
    build_splits,
    fold_roles,
    read_splits,
    write_splits,
)
from .statistics import DatasetStats, format_stats, plot_genres, stats

__all__ = [
    "CurationPipeline",
    "PipelineConfig",
    "TrackResult",
    "SCHEMA_VERSION",
    "DiscardReason",
    "Manifest",
    "ManifestError",
    "TrackRecord",
    "TrackStatus",
    "ScoreFileError",
    "parse_scores",
    "read_scores",
    "score_filter",
    "DatasetSettings",
    "FoldRoles",
    "InvalidFoldError",
    "SplitAssignment",
    "SplitError",
    "SplitFileError",
    "TooFewArtistsError",
    "build_splits",
    "fold_roles",
    "read_splits",
    "write_splits",
    "DatasetStats",
    "format_stats",
    "plot_genres",
    "stats",
]
