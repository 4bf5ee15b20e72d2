from collections import Counter
from enum import StrEnum
from typing import Iterable, Sequence

from pydantic import Field
from structlog import get_logger

from drumchart_curation.components.chart.schemas import AnimationLabel, GameplayLabel
from drumchart_curation.core.data.dto import ValueDTO

from .classes import DrumClass, map_animation, map_gameplay

logger = get_logger(__name__)

# Events closer than one 10 ms model frame cannot be told apart as targets.
DEFAULT_CHORD_WINDOW = 0.010

_TIME_EPSILON = 1e-12
_CLASS_ORDER = {drum_class: index for index, drum_class in enumerate(DrumClass)}


class Provenance(StrEnum):
    GAMEPLAY = "gameplay"
    ANIMATION_RESOLVED = "animation-resolved"


class DiscrepancyAction(StrEnum):
    REPLACED = "replaced-by-animation"
    IGNORED = "animation-only-ignored"


class LabeledOnset(ValueDTO):
    time: float = Field(ge=0)
    drum_class: DrumClass
    provenance: Provenance = Provenance.GAMEPLAY


class Discrepancy(ValueDTO):
    time: float
    gameplay_classes: tuple[DrumClass, ...]
    animation_classes: tuple[DrumClass, ...]
    action: DiscrepancyAction


class DiscrepancyReport(ValueDTO):
    rows: tuple[Discrepancy, ...] = ()

    @property
    def replaced(self) -> int:
        return sum(1 for row in self.rows if row.action == DiscrepancyAction.REPLACED)


def sort_onsets(onsets: Iterable[LabeledOnset], deduplicate: bool = True) -> list[LabeledOnset]:
    """
    Sort by time then class, dropping later duplicates of an identical (time, class) pair unless
    deduplicate is off. The sort is stable.
    """
    if not deduplicate:
        return sorted(onsets, key=lambda o: (o.time, _CLASS_ORDER[o.drum_class]))
    unique: dict[tuple[float, DrumClass], LabeledOnset] = {}
    for onset in onsets:
        unique.setdefault((onset.time, onset.drum_class), onset)
    return sorted(unique.values(), key=lambda o: (o.time, _CLASS_ORDER[o.drum_class]))


def _chords(events: list[tuple[float, int, DrumClass]], chord_window: float) -> list[list[tuple[float, int, DrumClass]]]:
    chords: list[list[tuple[float, int, DrumClass]]] = []
    start = None
    for event in events:
        if start is None or event[0] - start > chord_window + _TIME_EPSILON:
            chords.append([])
            start = event[0]
        chords[-1].append(event)
    return chords


def resolve_track(
    gameplay: Sequence[tuple[float, GameplayLabel]],
    animation: Sequence[tuple[float, AnimationLabel]],
    chord_window: float = DEFAULT_CHORD_WINDOW,
) -> tuple[list[LabeledOnset], DiscrepancyReport]:
    """
    Reduce a track to the five drum classes, trusting animation annotations over gameplay ones.

    Without animation events every gameplay event is mapped on its own. Otherwise events of both
    lanes are grouped into chords (every event within chord_window of the chord's first event).
    A chord whose gameplay class multiset differs from its animation class multiset is replaced
    by the animation classes, emitted at gameplay times. Chords without animation events keep
    their gameplay classes; chords without gameplay events are dropped and reported.

    Args:
        gameplay (Sequence[tuple[float, GameplayLabel]]): Time-sorted gameplay events in seconds.
        animation (Sequence[tuple[float, AnimationLabel]]): Time-sorted animation events in seconds.
        chord_window (float): Grouping tolerance in seconds.

    Returns:
        tuple[list[LabeledOnset], DiscrepancyReport]: Sorted unique onsets and the discrepancies found.
    """
    if chord_window <= 0:
        raise ValueError(f"chord_window must be positive, got {chord_window}")

    if not animation:
        return sort_onsets(LabeledOnset(time=t, drum_class=map_gameplay(label)) for t, label in gameplay), DiscrepancyReport()

    events = [(t, 0, map_gameplay(label)) for t, label in gameplay]
    events += [(t, 1, map_animation(label)) for t, label in animation]
    events.sort(key=lambda e: (e[0], e[1]))

    onsets: list[LabeledOnset] = []
    rows: list[Discrepancy] = []
    for chord in _chords(events, chord_window):
        played = [(t, c) for t, source, c in chord if source == 0]
        animated = [c for _, source, c in chord if source == 1]
        played_classes = Counter(c for _, c in played)

        if not played:
            rows.append(
                Discrepancy(
                    time=chord[0][0],
                    gameplay_classes=(),
                    animation_classes=tuple(animated),
                    action=DiscrepancyAction.IGNORED,
                )
            )
            continue

        if not animated or played_classes == Counter(animated):
            onsets.extend(LabeledOnset(time=t, drum_class=c) for t, c in played)
            continue

        first_time = min(t for t, _ in played)
        for drum_class in dict.fromkeys(animated):
            times = [t for t, c in played if c == drum_class]
            onsets.append(
                LabeledOnset(
                    time=min(times) if times else first_time,
                    drum_class=drum_class,
                    provenance=Provenance.ANIMATION_RESOLVED,
                )
            )
        rows.append(
            Discrepancy(
                time=first_time,
                gameplay_classes=tuple(c for _, c in played),
                animation_classes=tuple(animated),
                action=DiscrepancyAction.REPLACED,
            )
        )
        logger.debug(
            f"Chord at {first_time:.3f}s: gameplay {[c.value for _, c in played]} replaced by animation "
            f"{[c.value for c in animated]}"
        )

    return sort_onsets(onsets), DiscrepancyReport(rows=tuple(rows))


def class_histogram(onsets: Iterable[LabeledOnset]) -> dict[DrumClass, int]:
    counts = Counter(onset.drum_class for onset in onsets)
    return {drum_class: counts.get(drum_class, 0) for drum_class in DrumClass}


__all__ = [
    "DEFAULT_CHORD_WINDOW",
    "Provenance",
    "DiscrepancyAction",
    "LabeledOnset",
    "Discrepancy",
    "DiscrepancyReport",
    "sort_onsets",
    "resolve_track",
    "class_histogram",
]
