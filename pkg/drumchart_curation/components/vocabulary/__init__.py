from .classes import DrumClass, map_animation, map_gameplay
from .resolution import (
    Discrepancy,
    DiscrepancyAction,
    DiscrepancyReport,
    LabeledOnset,
    Provenance,
    class_histogram,
    resolve_track,
)
from .settings import VocabularySettings

__all__ = [
    "DrumClass",
    "map_animation",
    "map_gameplay",
    "Discrepancy",
    "DiscrepancyAction",
    "DiscrepancyReport",
    "LabeledOnset",
    "Provenance",
    "class_histogram",
    "resolve_track",
    "VocabularySettings",
]
