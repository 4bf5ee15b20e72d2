from .annotations import (
    AnnotationFormatError,
    format_annotations,
    format_report,
    parse_annotations,
    read_annotations,
    write_annotations,
)
from .metrics import (
    Counts,
    EvalCounts,
    EvalReport,
    Score,
    aggregate_folds,
    evaluate_track,
    f_measure,
    match_onsets,
)
from .peaks import Activation, peak_pick
from .service import EvaluationService
from .settings import EvaluationSettings

__all__ = [
    "AnnotationFormatError",
    "format_annotations",
    "format_report",
    "parse_annotations",
    "read_annotations",
    "write_annotations",
    "Counts",
    "EvalCounts",
    "EvalReport",
    "Score",
    "aggregate_folds",
    "evaluate_track",
    "f_measure",
    "match_onsets",
    "Activation",
    "peak_pick",
    "EvaluationService",
    "EvaluationSettings",
]
