from .assembly import assemble_chart
from .errors import (
    ChartError,
    ChartNotFoundError,
    EmptyGameplayError,
    MissingArtistError,
    NoDrumTrackError,
    NotProDrumsError,
)
from .metadata import parse_metadata
from .midi import (
    MalformedHeaderError,
    MidiParseError,
    TruncatedFileError,
    UnsupportedFormatError,
    parse_smf,
    write_smf,
)
from .pitch_map import PitchMapError, default_pitch_map, load_pitch_map
from .schemas import (
    AnimationLabel,
    Chart,
    ChartMetadata,
    GameplayLabel,
    MidiEventKind,
    PitchMapConfig,
    RawMidiEvent,
    TomPad,
)
from .service import ChartIngestService
from .settings import ChartSettings

__all__ = [
    "assemble_chart",
    "ChartError",
    "ChartNotFoundError",
    "EmptyGameplayError",
    "MissingArtistError",
    "NoDrumTrackError",
    "NotProDrumsError",
    "parse_metadata",
    "MalformedHeaderError",
    "MidiParseError",
    "TruncatedFileError",
    "UnsupportedFormatError",
    "parse_smf",
    "write_smf",
    "PitchMapError",
    "default_pitch_map",
    "load_pitch_map",
    "AnimationLabel",
    "Chart",
    "ChartMetadata",
    "GameplayLabel",
    "MidiEventKind",
    "PitchMapConfig",
    "RawMidiEvent",
    "TomPad",
    "ChartIngestService",
    "ChartSettings",
]
