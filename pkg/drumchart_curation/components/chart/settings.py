from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict


class ChartSettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="DRUMCHART_CHART_")

    PITCH_MAP: Path | None = None
    METADATA_FILE: str = "song.ini"
    MIDI_FILE: str = "notes.mid"
    AUDIO_FILE: str = "song.wav"
    REQUIRE_PRO_DRUMS: bool = False


__all__ = [
    "ChartSettings",
]
