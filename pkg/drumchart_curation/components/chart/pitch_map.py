from configparser import ConfigParser, Error as ConfigParserError
from importlib import resources
from pathlib import Path

from pydantic import ValidationError
from structlog import get_logger

from .schemas import AnimationLabel, GameplayLabel, PitchMapConfig, TomPad

logger = get_logger(__name__)

DEFAULT_PITCH_MAP_RESOURCE = "default_pitch_map.ini"


class PitchMapError(Exception):
    def __init__(self, reason: str, *args: object) -> None:
        super().__init__(f"Invalid pitch map: {reason}", *args)
        self.reason = reason


def _section(parser: ConfigParser, name: str, enum_cls) -> dict:
    if not parser.has_section(name):
        return {}

    entries = {}
    for key, value in parser.items(name):
        try:
            pitch = int(key)
        except ValueError as e:
            raise PitchMapError(f"[{name}] key {key!r} is not a MIDI pitch") from e
        try:
            entries[pitch] = enum_cls(value.strip())
        except ValueError as e:
            raise PitchMapError(f"[{name}] {value!r} is not one of {[m.value for m in enum_cls]}") from e
    return entries


def load_pitch_map(text: str) -> PitchMapConfig:
    """
    Parse a pitch-map file: `pitch=LABEL` lines grouped under `[gameplay]`, `[tom_markers]` and
    `[animation]`, plus the `drums` and `beat` track names under `[tracks]`.

    Args:
        text (str): The file content.

    Returns:
        PitchMapConfig: The validated pitch map.

    Raises:
        PitchMapError: On syntax errors, unknown labels or out-of-range pitches.
    """
    parser = ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except ConfigParserError as e:
        raise PitchMapError(str(e)) from e

    gameplay = _section(parser, "gameplay", GameplayLabel)
    if not gameplay:
        raise PitchMapError("[gameplay] section is missing or empty")

    tracks = dict(parser.items("tracks")) if parser.has_section("tracks") else {}
    try:
        return PitchMapConfig(
            gameplay=gameplay,
            tom_markers=_section(parser, "tom_markers", TomPad),
            animation=_section(parser, "animation", AnimationLabel),
            drum_track=tracks.get("drums", "PART DRUMS"),
            beat_track=tracks.get("beat", "BEAT"),
        )
    except ValidationError as e:
        raise PitchMapError(str(e)) from e


def read_pitch_map(path: Path) -> PitchMapConfig:
    return load_pitch_map(path.read_text(encoding="utf-8"))


def default_pitch_map() -> PitchMapConfig:
    """
    The pitch map shipped with the package (expert lane of the community drum chart format).
    """
    text = resources.files(__package__).joinpath(DEFAULT_PITCH_MAP_RESOURCE).read_text(encoding="utf-8")
    return load_pitch_map(text)


__all__ = [
    "PitchMapError",
    "load_pitch_map",
    "read_pitch_map",
    "default_pitch_map",
]
