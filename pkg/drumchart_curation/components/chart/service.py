from pathlib import Path

from drumchart_curation.core.layers.service import BaseService

from .assembly import assemble_chart
from .errors import ChartNotFoundError, NotProDrumsError
from .metadata import decode_metadata, parse_metadata
from .midi import parse_smf
from .pitch_map import default_pitch_map, read_pitch_map
from .schemas import Chart, PitchMapConfig
from .settings import ChartSettings


class ChartIngestService(BaseService[ChartSettings]):
    """
    Reads extracted chart directories (MIDI chart, song.ini and optional PCM WAV audio).
    """

    def __init__(self, settings: ChartSettings, pitch_map: PitchMapConfig | None = None) -> None:
        """
        Initialize the service with the settings.

        Args:
            settings (ChartSettings): The settings to use.
            pitch_map (PitchMapConfig | None): Overrides both the packaged map and settings.PITCH_MAP.
        """
        super().__init__(settings)
        if pitch_map is None:
            pitch_map = read_pitch_map(settings.PITCH_MAP) if settings.PITCH_MAP else default_pitch_map()
        self.pitch_map = pitch_map

    def _midi_path(self, chart_dir: Path) -> Path:
        preferred = chart_dir / self.settings.MIDI_FILE
        if preferred.is_file():
            return preferred

        candidates = sorted(p for p in chart_dir.iterdir() if p.suffix.lower() in (".mid", ".midi"))
        if len(candidates) != 1:
            raise ChartNotFoundError(str(chart_dir), f"exactly one MIDI chart (found {len(candidates)})")
        return candidates[0]

    def _audio_path(self, chart_dir: Path) -> Path | None:
        preferred = chart_dir / self.settings.AUDIO_FILE
        if preferred.is_file():
            return preferred

        candidates = sorted(p for p in chart_dir.iterdir() if p.suffix.lower() == ".wav")
        return candidates[0] if candidates else None

    def load_chart(self, chart_dir: Path) -> Chart:
        """
        Parse a chart directory into a Chart.

        Args:
            chart_dir (Path): The extracted chart directory.

        Returns:
            Chart: The chart, with audio_path set when a WAV file is present.

        Raises:
            ChartError: If a file is missing or the chart content is unusable.
            MidiParseError: If the MIDI file is malformed.
        """
        metadata_path = chart_dir / self.settings.METADATA_FILE
        if not metadata_path.is_file():
            raise ChartNotFoundError(str(chart_dir), self.settings.METADATA_FILE)

        metadata = parse_metadata(decode_metadata(metadata_path.read_bytes()))
        if self.settings.REQUIRE_PRO_DRUMS and not metadata.pro_drums:
            raise NotProDrumsError(str(chart_dir))

        midi = parse_smf(self._midi_path(chart_dir).read_bytes())
        chart = assemble_chart(midi.tracks, midi.ticks_per_quarter, metadata, self.pitch_map)

        self.logger.debug(
            f"Loaded chart with {len(chart.gameplay)} gameplay and {len(chart.animation)} animation events",
        )
        return chart.model_copy(update={"audio_path": self._audio_path(chart_dir)})


__all__ = [
    "ChartIngestService",
]
