"""
End-to-end conversion of chart directories into dataset tracks.

Each track goes through ingest, label resolution and beat alignment on its own; a failure in any
stage becomes a discarded manifest record and never stops the batch. Outputs are written with a
rename so an interrupted run leaves no partial file behind.
"""

from concurrent.futures import ProcessPoolExecutor, as_completed
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator

import structlog
from opentelemetry import trace
from pydantic import Field

from drumchart_curation.components.alignment.beats import SpectralFluxBeatEstimator, format_beats, read_beats
from drumchart_curation.components.alignment.errors import BeatEstimationError
from drumchart_curation.components.alignment.matching import BeatSeq
from drumchart_curation.components.alignment.service import AlignmentService
from drumchart_curation.components.alignment.settings import AlignmentSettings
from drumchart_curation.components.chart.errors import ChartError, EmptyGameplayError
from drumchart_curation.components.chart.midi import MidiParseError
from drumchart_curation.components.chart.schemas import Chart, PitchMapConfig
from drumchart_curation.components.chart.service import ChartIngestService
from drumchart_curation.components.chart.settings import ChartSettings
from drumchart_curation.components.evaluation.annotations import write_annotations
from drumchart_curation.components.evaluation.service import ANNOTATION_SUFFIX
from drumchart_curation.components.features.audio import load_wav, wav_duration
from drumchart_curation.components.features.errors import FeatureError
from drumchart_curation.components.timing.tempo_map import beat_grid
from drumchart_curation.components.vocabulary.resolution import LabeledOnset, class_histogram, resolve_track
from drumchart_curation.components.vocabulary.settings import VocabularySettings
from drumchart_curation.core.data.dto import ValueDTO
from drumchart_curation.core.layers.service import BaseService
from drumchart_curation.core.observability.context import BatchContext, TrackContext
from drumchart_curation.core.observability.logs import ObservabilitySettings, configure_logging
from drumchart_curation.core.observability.tracing import span_context, span_function
from drumchart_curation.core.utils.files import atomic_write_text

from .records import DiscardReason, Manifest, TrackRecord, TrackStatus
from .settings import DatasetSettings

logger = structlog.getLogger(__name__)

BEATS_SUFFIX = ".txt"


class PipelineConfig(ValueDTO):
    """
    Everything a worker process needs to convert a track.
    """

    chart: ChartSettings
    vocabulary: VocabularySettings
    alignment: AlignmentSettings
    dataset: DatasetSettings
    pitch_map: PitchMapConfig | None = None
    observability: ObservabilitySettings = Field(default_factory=ObservabilitySettings)

    @classmethod
    def from_env(cls, pitch_map: PitchMapConfig | None = None) -> "PipelineConfig":
        return cls(
            chart=ChartSettings(),
            vocabulary=VocabularySettings(),
            alignment=AlignmentSettings(),
            dataset=DatasetSettings(),
            pitch_map=pitch_map,
            observability=ObservabilitySettings(),
        )


class TrackResult(ValueDTO):
    record: TrackRecord
    onsets: tuple[LabeledOnset, ...] = ()
    beats: BeatSeq | None = None


class _Discard(Exception):
    def __init__(self, reason: DiscardReason, detail: str) -> None:
        super().__init__(detail)
        self.reason = reason
        self.detail = detail


@contextmanager
def _stage(name: str) -> Iterator[None]:
    attributes = {"track.id": TrackContext.id.get("")}
    with span_context(trace.get_tracer(__name__), name, **attributes), TrackContext.bind(stage=name):
        yield


class CurationPipeline(BaseService[DatasetSettings]):
    def __init__(self, config: PipelineConfig) -> None:
        super().__init__(config.dataset)
        self.config = config
        self.ingest = ChartIngestService(config.chart, config.pitch_map)
        self.alignment = AlignmentService(config.alignment)

    def annotation_path(self, output_dir: Path, track_id: str) -> Path:
        return output_dir / self.config.dataset.ANNOTATIONS_DIR / f"{track_id}{ANNOTATION_SUFFIX}"

    def beats_path(self, output_dir: Path, track_id: str) -> Path:
        return output_dir / self.config.dataset.BEATS_DIR / f"{track_id}{BEATS_SUFFIX}"

    def _load(self, chart_dir: Path) -> Chart:
        with _stage("ingest"):
            try:
                return self.ingest.load_chart(chart_dir)
            except EmptyGameplayError as e:
                raise _Discard(DiscardReason.EMPTY, str(e)) from e
            except (ChartError, MidiParseError, OSError, ValueError) as e:
                raise _Discard(DiscardReason.PARSE_ERROR, f"{type(e).__name__}: {e}") from e

    def _annotated_beats(self, chart: Chart) -> BeatSeq:
        tempo_map = chart.tempo_map
        if chart.beat_ticks:
            times = [tempo_map.tick_to_seconds(tick) for tick in chart.beat_ticks]
        else:
            times = beat_grid(tempo_map, chart.last_tick)
        return BeatSeq(times=tuple(times))

    def _estimated_beats(self, chart: Chart, track_id: str, beats_dir: Path | None) -> BeatSeq:
        try:
            if beats_dir is not None:
                beats_file = beats_dir / f"{track_id}{BEATS_SUFFIX}"
                if beats_file.is_file():
                    return read_beats(beats_file)
            if chart.audio_path is not None:
                return SpectralFluxBeatEstimator(self.config.alignment).estimate(load_wav(chart.audio_path))
        except (BeatEstimationError, FeatureError, OSError) as e:
            raise _Discard(DiscardReason.ALIGNMENT_SANITY, f"{type(e).__name__}: {e}") from e
        raise _Discard(DiscardReason.ALIGNMENT_SANITY, "no beats file and no audio to estimate beats from")

    def _duration(self, chart: Chart, onsets: tuple[LabeledOnset, ...]) -> float:
        if chart.audio_path is not None:
            try:
                return wav_duration(chart.audio_path)
            except FeatureError as e:
                self.logger.warning(f"Falling back to annotation length: {e}")
        last = max((onset.time for onset in onsets), default=0.0)
        return last + self.config.dataset.TAIL_PADDING

    def _write(self, output_dir: Path, track_id: str, onsets: tuple[LabeledOnset, ...], beats: BeatSeq) -> None:
        with _stage("write"):
            write_annotations(self.annotation_path(output_dir, track_id), ((o.time, o.drum_class) for o in onsets))
            atomic_write_text(self.beats_path(output_dir, track_id), format_beats(beats))

    def _remove_outputs(self, output_dir: Path, track_id: str) -> None:
        self.annotation_path(output_dir, track_id).unlink(missing_ok=True)
        self.beats_path(output_dir, track_id).unlink(missing_ok=True)

    @span_function("convert_track")
    def convert_track(self, chart_dir: Path, output_dir: Path | None = None, beats_dir: Path | None = None) -> TrackResult:
        """
        Convert one chart directory.

        Args:
            chart_dir (Path): The chart directory; its name is the track id.
            output_dir (Path | None): Dataset root receiving annotations/ and beats/. Nothing is
                written when None.
            beats_dir (Path | None): Directory of precomputed `<track id>.txt` beat files.

        Returns:
            TrackResult: The manifest record, and for kept tracks the onsets and beats.
        """
        track_id = chart_dir.name
        with TrackContext.bind(id=track_id):
            try:
                result = self._convert(chart_dir, track_id, beats_dir)
            except _Discard as discard:
                self.logger.info(f"Discarded ({discard.reason.value}): {discard.detail}")
                result = TrackResult(
                    record=TrackRecord(
                        id=track_id,
                        status=TrackStatus.DISCARDED,
                        discard_reason=discard.reason,
                        detail=discard.detail,
                    )
                )

            if output_dir is not None:
                if result.record.kept and result.beats is not None:
                    self._write(output_dir, track_id, result.onsets, result.beats)
                else:
                    self._remove_outputs(output_dir, track_id)
            return result

    def _convert(self, chart_dir: Path, track_id: str, beats_dir: Path | None) -> TrackResult:
        chart = self._load(chart_dir)
        metadata = chart.metadata
        base = dict(
            id=track_id,
            title=metadata.title,
            artist=metadata.artist,
            genre=metadata.genre,
            unmapped_pitches=chart.unmapped_pitches,
        )

        with _stage("resolve"):
            tempo_map = chart.tempo_map
            onsets, discrepancies = resolve_track(
                [(tempo_map.tick_to_seconds(tick), label) for tick, label in chart.gameplay],
                [(tempo_map.tick_to_seconds(tick), label) for tick, label in chart.animation],
                self.config.vocabulary.CHORD_WINDOW,
            )
        base["discrepancies"] = discrepancies.rows
        if not onsets:
            raise _Discard(DiscardReason.EMPTY, "no onsets after label resolution")

        beats = self._annotated_beats(chart)
        alignment = None
        if self.config.alignment.ENABLED:
            with _stage("align"):
                estimated = self._estimated_beats(chart, track_id, beats_dir)
                aligned = self.alignment.align(beats, estimated, onsets)
            alignment = aligned.report
            if not aligned.kept or aligned.beats is None:
                record = TrackRecord(
                    **base,
                    duration=self._duration(chart, tuple(onsets)),
                    n_onsets_per_class=class_histogram(onsets),
                    alignment=alignment,
                    status=TrackStatus.DISCARDED,
                    discard_reason=DiscardReason.ALIGNMENT_SANITY,
                    detail=alignment.reason,
                )
                self.logger.info(f"Discarded ({DiscardReason.ALIGNMENT_SANITY.value}): {alignment.reason}")
                return TrackResult(record=record)
            onsets, beats = list(aligned.onsets), aligned.beats

        record = TrackRecord(
            **base,
            duration=self._duration(chart, tuple(onsets)),
            n_onsets_per_class=class_histogram(onsets),
            alignment=alignment,
            status=TrackStatus.KEPT,
        )
        return TrackResult(record=record, onsets=tuple(onsets), beats=beats)

    def discover(self, input_dir: Path) -> list[Path]:
        return sorted(p for p in input_dir.iterdir() if p.is_dir() and not p.name.startswith("."))

    def convert_directory(self, input_dir: Path, output_dir: Path, beats_dir: Path | None = None) -> Manifest:
        """
        Convert every chart directory below input_dir and write the manifest.

        With DatasetSettings.JOBS > 1 tracks are converted in a pool of worker processes. The
        manifest is ordered by track id whatever the completion order.

        Args:
            input_dir (Path): Directory whose subdirectories are charts.
            output_dir (Path): Dataset root.
            beats_dir (Path | None): Directory of precomputed beat files.

        Returns:
            Manifest: One record per discovered chart directory.
        """
        chart_dirs = self.discover(input_dir)
        jobs = self.config.dataset.JOBS
        with BatchContext.bind(input_dir=str(input_dir), output_dir=str(output_dir)):
            self.logger.info(f"Converting {len(chart_dirs)} charts with {jobs} worker(s)")
            if jobs > 1 and len(chart_dirs) > 1:
                records = []
                with ProcessPoolExecutor(
                    max_workers=jobs,
                    initializer=configure_logging,
                    initargs=(self.config.observability,),
                ) as executor:
                    futures = [
                        executor.submit(_convert_in_worker, self.config, chart_dir, output_dir, beats_dir)
                        for chart_dir in chart_dirs
                    ]
                    for future in as_completed(futures):
                        records.append(future.result())
            else:
                records = [_safe_convert(self, chart_dir, output_dir, beats_dir) for chart_dir in chart_dirs]

            manifest = Manifest.of(records)
            manifest.save(output_dir / self.config.dataset.MANIFEST_FILE)

            kept = len(manifest.kept)
            self.logger.info(f"Kept {kept} of {len(manifest.records)} tracks")
        return manifest


def _safe_convert(pipeline: CurationPipeline, chart_dir: Path, output_dir: Path, beats_dir: Path | None) -> TrackRecord:
    try:
        return pipeline.convert_track(chart_dir, output_dir, beats_dir).record
    except Exception as e:
        logger.exception(f"Unexpected failure converting {chart_dir.name}")
        return TrackRecord(
            id=chart_dir.name,
            status=TrackStatus.DISCARDED,
            discard_reason=DiscardReason.PARSE_ERROR,
            detail=f"{type(e).__name__}: {e}",
        )


def _convert_in_worker(config: PipelineConfig, chart_dir: Path, output_dir: Path, beats_dir: Path | None) -> TrackRecord:
    return _safe_convert(CurationPipeline(config), chart_dir, output_dir, beats_dir)


__all__ = [
    "PipelineConfig",
    "TrackResult",
    "CurationPipeline",
]
