from .beats import (
    BeatEstimator,
    FileBeatEstimator,
    SpectralFluxBeatEstimator,
    estimate_beats,
    format_beats,
    parse_beats,
    read_beats,
)
from .errors import AlignmentError, BadBeatsFileError, BeatEstimationError, InsufficientAnchorsError, NoBeatsFoundError
from .matching import (
    Anchor,
    AlignmentReport,
    BeatSeq,
    DeviationProfile,
    Verdict,
    correct_onsets,
    correct_times,
    interpolate_deviation,
    match_beats,
    sanity_check,
)
from .service import AlignmentResult, AlignmentService
from .settings import AlignmentSettings

__all__ = [
    "BeatEstimator",
    "FileBeatEstimator",
    "SpectralFluxBeatEstimator",
    "estimate_beats",
    "format_beats",
    "parse_beats",
    "read_beats",
    "AlignmentError",
    "BadBeatsFileError",
    "BeatEstimationError",
    "InsufficientAnchorsError",
    "NoBeatsFoundError",
    "Anchor",
    "AlignmentReport",
    "BeatSeq",
    "DeviationProfile",
    "Verdict",
    "correct_onsets",
    "correct_times",
    "interpolate_deviation",
    "match_beats",
    "sanity_check",
    "AlignmentResult",
    "AlignmentService",
    "AlignmentSettings",
]
