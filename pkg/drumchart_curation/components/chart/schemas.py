from enum import StrEnum
from pathlib import Path

from pydantic import Field, field_validator, model_validator

from drumchart_curation.components.timing.tempo_map import TempoMap
from drumchart_curation.core.data.dto import ValueDTO


class MidiEventKind(StrEnum):
    NOTE_ON = "note-on"
    NOTE_OFF = "note-off"
    TEMPO_CHANGE = "tempo-change"
    TRACK_NAME = "track-name"
    OTHER_META = "other-meta"


class RawMidiEvent(ValueDTO):
    """
    A single event of a Standard MIDI File track, positioned at an absolute tick.
    """

    tick: int = Field(ge=0, description="Absolute tick (accumulated delta times)")
    kind: MidiEventKind
    pitch: int | None = Field(None, ge=0, le=127)
    velocity: int | None = Field(None, ge=0, le=127)
    channel: int | None = Field(None, ge=0, le=15)
    tempo_us_per_quarter: int | None = Field(None, gt=0)
    text: str | None = None
    meta_type: int | None = Field(None, ge=0, le=127)

    @model_validator(mode="after")
    def _check_payload(self) -> "RawMidiEvent":
        if self.kind in (MidiEventKind.NOTE_ON, MidiEventKind.NOTE_OFF):
            if self.pitch is None or self.velocity is None:
                raise ValueError("note events require pitch and velocity")
        elif self.kind == MidiEventKind.TEMPO_CHANGE and self.tempo_us_per_quarter is None:
            raise ValueError("tempo events require tempo_us_per_quarter")
        elif self.kind == MidiEventKind.TRACK_NAME and self.text is None:
            raise ValueError("track-name events require text")
        return self


class MidiFileData(ValueDTO):
    ticks_per_quarter: int = Field(gt=0)
    format: int = Field(ge=0, le=1)
    tracks: tuple[tuple[RawMidiEvent, ...], ...]


class GameplayLabel(StrEnum):
    ORANGE_DRUM = "OrangeDrum"
    RED_DRUM = "RedDrum"
    YELLOW_DRUM = "YellowDrum"
    BLUE_DRUM = "BlueDrum"
    GREEN_DRUM = "GreenDrum"
    YELLOW_CYMBAL = "YellowCymbal"
    BLUE_CYMBAL = "BlueCymbal"
    GREEN_CYMBAL = "GreenCymbal"


class AnimationLabel(StrEnum):
    BASS_DRUM = "BassDrum"
    SNARE_DRUM = "SnareDrum"
    RACK_TOM_1 = "RackTom1"
    RACK_TOM_2 = "RackTom2"
    FLOOR_TOM = "FloorTom"
    HI_HAT_OPEN = "HiHatOpen"
    HI_HAT_CLOSE = "HiHatClose"
    CRASH_1 = "Crash1"
    CRASH_2 = "Crash2"
    RIDE_CYMBAL = "RideCymbal"


class TomPad(StrEnum):
    YELLOW = "Yellow"
    BLUE = "Blue"
    GREEN = "Green"


# A held tom marker turns the pad's cymbal into its drum.
CYMBAL_TO_DRUM: dict[GameplayLabel, GameplayLabel] = {
    GameplayLabel.YELLOW_CYMBAL: GameplayLabel.YELLOW_DRUM,
    GameplayLabel.BLUE_CYMBAL: GameplayLabel.BLUE_DRUM,
    GameplayLabel.GREEN_CYMBAL: GameplayLabel.GREEN_DRUM,
}

PAD_OF_CYMBAL: dict[GameplayLabel, TomPad] = {
    GameplayLabel.YELLOW_CYMBAL: TomPad.YELLOW,
    GameplayLabel.BLUE_CYMBAL: TomPad.BLUE,
    GameplayLabel.GREEN_CYMBAL: TomPad.GREEN,
}


class PitchMapConfig(ValueDTO):
    """
    MIDI pitch vocabulary of a chart family, plus the names of the tracks to read.
    """

    gameplay: dict[int, GameplayLabel]
    tom_markers: dict[int, TomPad] = Field(default_factory=dict)
    animation: dict[int, AnimationLabel] = Field(default_factory=dict)
    drum_track: str = "PART DRUMS"
    beat_track: str = "BEAT"

    @field_validator("gameplay", "tom_markers", "animation")
    @classmethod
    def _pitches_in_range(cls, value: dict) -> dict:
        for pitch in value:
            if not 0 <= pitch <= 127:
                raise ValueError(f"pitch {pitch} outside 0-127")
        return value


class ChartMetadata(ValueDTO):
    title: str = ""
    artist: str = Field(min_length=1)
    genre: str = ""
    extra: dict[str, str] = Field(default_factory=dict)

    @property
    def pro_drums(self) -> bool:
        return self.extra.get("pro_drums", "").strip().lower() in ("true", "1", "yes", "on")


class Chart(ValueDTO):
    metadata: ChartMetadata
    tempo_map: TempoMap
    gameplay: tuple[tuple[int, GameplayLabel], ...]
    animation: tuple[tuple[int, AnimationLabel], ...] = ()
    beat_ticks: tuple[int, ...] = ()
    audio_path: Path | None = None
    unmapped_pitches: dict[int, int] = Field(default_factory=dict)

    @field_validator("gameplay", "animation")
    @classmethod
    def _sorted_events(cls, events: tuple) -> tuple:
        ticks = [tick for tick, _ in events]
        if any(tick < 0 for tick in ticks):
            raise ValueError("negative tick")
        if ticks != sorted(ticks):
            raise ValueError("events must be sorted by tick")
        return events

    @field_validator("beat_ticks")
    @classmethod
    def _sorted_beats(cls, ticks: tuple[int, ...]) -> tuple[int, ...]:
        if any(b <= a for a, b in zip(ticks, ticks[1:])):
            raise ValueError("beat ticks must be strictly increasing")
        return ticks

    @property
    def last_tick(self) -> int:
        candidates = [0]
        if self.gameplay:
            candidates.append(self.gameplay[-1][0])
        if self.animation:
            candidates.append(self.animation[-1][0])
        if self.beat_ticks:
            candidates.append(self.beat_ticks[-1])
        return max(candidates)


__all__ = [
    "MidiEventKind",
    "RawMidiEvent",
    "MidiFileData",
    "GameplayLabel",
    "AnimationLabel",
    "TomPad",
    "CYMBAL_TO_DRUM",
    "PAD_OF_CYMBAL",
    "PitchMapConfig",
    "ChartMetadata",
    "Chart",
]
