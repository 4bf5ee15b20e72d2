from collections import Counter
from typing import Sequence

from structlog import get_logger

from drumchart_curation.components.timing.tempo_map import TempoMap

from .errors import EmptyGameplayError, NoDrumTrackError
from .schemas import (
    CYMBAL_TO_DRUM,
    PAD_OF_CYMBAL,
    AnimationLabel,
    Chart,
    ChartMetadata,
    GameplayLabel,
    MidiEventKind,
    PitchMapConfig,
    RawMidiEvent,
    TomPad,
)

logger = get_logger(__name__)

Track = Sequence[RawMidiEvent]

_UNBOUNDED = float("inf")


def track_name(track: Track) -> str | None:
    for event in track:
        if event.kind == MidiEventKind.TRACK_NAME:
            return (event.text or "").strip()
    return None


def find_track(tracks: Sequence[Track], name: str) -> Track | None:
    wanted = name.strip()
    for track in tracks:
        if track_name(track) == wanted:
            return track
    return None


def _marker_intervals(track: Track, markers: dict[int, TomPad]) -> dict[TomPad, list[tuple[int, float]]]:
    """
    Half-open [on, off) tick intervals during which each pad's tom marker is held.
    Overlapping note-ons of one marker pitch nest; a marker left open lasts until the end.
    """
    intervals: dict[TomPad, list[tuple[int, float]]] = {pad: [] for pad in TomPad}
    depth: Counter[int] = Counter()
    opened_at: dict[int, int] = {}

    for event in track:
        if event.pitch not in markers:
            continue
        if event.kind == MidiEventKind.NOTE_ON:
            if depth[event.pitch] == 0:
                opened_at[event.pitch] = event.tick
            depth[event.pitch] += 1
        elif event.kind == MidiEventKind.NOTE_OFF and depth[event.pitch] > 0:
            depth[event.pitch] -= 1
            if depth[event.pitch] == 0:
                intervals[markers[event.pitch]].append((opened_at.pop(event.pitch), event.tick))

    for pitch, start in opened_at.items():
        intervals[markers[pitch]].append((start, _UNBOUNDED))

    return intervals


def _marker_held(intervals: list[tuple[int, float]], tick: int) -> bool:
    return any(start <= tick < end for start, end in intervals)


def _resolve_gameplay(
    track: Track,
    pitch_map: PitchMapConfig,
    unmapped: Counter[int],
) -> list[tuple[int, GameplayLabel]]:
    intervals = _marker_intervals(track, pitch_map.tom_markers)
    known = set(pitch_map.tom_markers) | set(pitch_map.animation)

    hits: list[tuple[int, GameplayLabel]] = []
    for event in track:
        if event.kind != MidiEventKind.NOTE_ON or event.pitch is None:
            continue
        label = pitch_map.gameplay.get(event.pitch)
        if label is None:
            if event.pitch not in known:
                unmapped[event.pitch] += 1
            continue
        pad = PAD_OF_CYMBAL.get(label)
        if pad is not None and _marker_held(intervals[pad], event.tick):
            label = CYMBAL_TO_DRUM[label]
        hits.append((event.tick, label))

    return sorted(hits, key=lambda hit: hit[0])


def _resolve_animation(track: Track, pitch_map: PitchMapConfig) -> list[tuple[int, AnimationLabel]]:
    events: list[tuple[int, AnimationLabel]] = []
    for event in track:
        if event.kind != MidiEventKind.NOTE_ON or event.pitch is None:
            continue
        label = pitch_map.animation.get(event.pitch)
        if label is not None:
            events.append((event.tick, label))

    return sorted(events, key=lambda item: item[0])


def assemble_chart(
    tracks: Sequence[Track],
    ticks_per_quarter: int,
    metadata: ChartMetadata,
    pitch_map: PitchMapConfig,
) -> Chart:
    """
    Turn parsed MIDI tracks into a Chart.

    Tempo events are collected from every track in file order. Gameplay hits on a pad's cymbal
    pitch become that pad's drum while the pad's tom marker is held. Note-offs only matter for
    tom markers. Unmapped gameplay and animation pitches are counted, not guessed.

    Args:
        tracks (Sequence[Track]): Parsed tracks with absolute ticks.
        ticks_per_quarter (int): The file's PPQ resolution.
        metadata (ChartMetadata): Parsed song metadata.
        pitch_map (PitchMapConfig): Pitch vocabulary and track names.

    Returns:
        Chart: The assembled chart.

    Raises:
        NoDrumTrackError: If no track carries the configured drum track name.
        EmptyGameplayError: If the drum track has no mapped gameplay notes.
    """
    tempo_events = [
        (event.tick, event.tempo_us_per_quarter)
        for track in tracks
        for event in track
        if event.kind == MidiEventKind.TEMPO_CHANGE and event.tempo_us_per_quarter is not None
    ]
    tempo_map = TempoMap.from_events(ticks_per_quarter, tempo_events)

    drum_track = find_track(tracks, pitch_map.drum_track)
    if drum_track is None:
        raise NoDrumTrackError(pitch_map.drum_track, [name for t in tracks if (name := track_name(t)) is not None])

    unmapped: Counter[int] = Counter()
    gameplay = _resolve_gameplay(drum_track, pitch_map, unmapped)
    if not gameplay:
        raise EmptyGameplayError(pitch_map.drum_track)
    animation = _resolve_animation(drum_track, pitch_map)

    beat_ticks: tuple[int, ...] = ()
    beat_track = find_track(tracks, pitch_map.beat_track)
    if beat_track is not None:
        beat_ticks = tuple(sorted({e.tick for e in beat_track if e.kind == MidiEventKind.NOTE_ON}))

    if unmapped:
        logger.debug(f"Unmapped drum pitches: {dict(sorted(unmapped.items()))}")

    return Chart(
        metadata=metadata,
        tempo_map=tempo_map,
        gameplay=tuple(gameplay),
        animation=tuple(animation),
        beat_ticks=beat_ticks,
        unmapped_pitches=dict(sorted(unmapped.items())),
    )


__all__ = [
    "track_name",
    "find_track",
    "assemble_chart",
]
