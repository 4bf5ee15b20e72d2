"""
Command line interface: `drumchart <command>`.

Exit status is 0 on success, 1 on a usage error and 2 when an input cannot be read or written.
Failures of single tracks during `convert` are recorded in the manifest and do not change the
exit status.
"""

import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, TypeVar

import click
import structlog
from pydantic_settings import BaseSettings

from drumchart_curation.components.alignment.errors import BeatEstimationError
from drumchart_curation.components.alignment.settings import AlignmentSettings
from drumchart_curation.components.chart.pitch_map import PitchMapError, read_pitch_map
from drumchart_curation.components.chart.settings import ChartSettings
from drumchart_curation.components.dataset.pipeline import CurationPipeline, PipelineConfig
from drumchart_curation.components.dataset.records import Manifest, ManifestError
from drumchart_curation.components.dataset.screening import ScoreFileError, read_scores, score_filter
from drumchart_curation.components.dataset.settings import DatasetSettings
from drumchart_curation.components.dataset.splits import SplitError, TooFewArtistsError, build_splits, read_splits, write_splits
from drumchart_curation.components.dataset.statistics import format_stats, plot_genres, stats
from drumchart_curation.components.evaluation.annotations import AnnotationFormatError, format_report, write_annotations
from drumchart_curation.components.evaluation.peaks import Activation
from drumchart_curation.components.evaluation.service import EvaluationService
from drumchart_curation.components.evaluation.settings import EvaluationSettings
from drumchart_curation.components.features.audio import load_wav
from drumchart_curation.components.features.errors import FeatureError
from drumchart_curation.components.features.service import FeatureExtractionService
from drumchart_curation.components.features.settings import FeatureSettings
from drumchart_curation.components.features.storage import read_features, write_features
from drumchart_curation.components.vocabulary.settings import VocabularySettings
from drumchart_curation.core.observability.logs import ObservabilitySettings, configure_logging
from drumchart_curation.core.observability.tracing import OpenTelemetrySettings, configure_tracing

logger = structlog.getLogger(__name__)

EXIT_USAGE = 1
EXIT_IO = 2

SettingsT = TypeVar("SettingsT", bound=BaseSettings)

_IO_ERRORS = (
    OSError,
    ManifestError,
    PitchMapError,
    ScoreFileError,
    AnnotationFormatError,
    FeatureError,
    BeatEstimationError,
    SplitError,
)


class _Group(click.Group):
    """
    Click group reporting usage errors with exit status 1.
    """

    def main(self, *args, **kwargs):
        kwargs["standalone_mode"] = False
        try:
            status = super().main(*args, **kwargs)
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE)
        sys.exit(status if isinstance(status, int) else 0)


@contextmanager
def _fatal_io() -> Iterator[None]:
    try:
        yield
    except _IO_ERRORS as e:
        logger.error(f"{type(e).__name__}: {e}")
        sys.exit(EXIT_IO)


def _override(settings: SettingsT, **values) -> SettingsT:
    """
    Apply the command line values that were given on top of the environment settings.
    """
    return settings.model_copy(update={key: value for key, value in values.items() if value is not None})


def _ms(value: float | None) -> float | None:
    return None if value is None else value / 1000.0


@click.group(cls=_Group)
@click.pass_context
def main(ctx: click.Context) -> None:
    """
    Curate rhythm-game drum charts into a drum transcription dataset.
    """
    ctx.obj = ObservabilitySettings()
    configure_logging(ctx.obj)
    configure_tracing(OpenTelemetrySettings())


@main.command()
@click.option("--input", "input_dir", required=True, type=click.Path(exists=True, file_okay=False, path_type=Path), help="Directory of chart directories")
@click.option("--output", "output_dir", required=True, type=click.Path(file_okay=False, path_type=Path), help="Dataset root")
@click.option("--beats-dir", type=click.Path(exists=True, file_okay=False, path_type=Path), help="Precomputed <track id>.txt beat files")
@click.option("--no-align", is_flag=True, default=False, help="Skip beat alignment")
@click.option("--match-window-ms", type=click.FloatRange(min=0, min_open=True), help="Tolerance of a matched beat")
@click.option("--snap-radius-ms", type=click.FloatRange(min=0, min_open=True), help="Search radius of beat snapping")
@click.option("--majority-window-ms", type=click.FloatRange(min=0, min_open=True), help="Tolerance of the matched-fraction check")
@click.option("--max-correction-ms", type=click.FloatRange(min=0), help="Largest allowed beat correction")
@click.option("--min-matched-fraction", type=click.FloatRange(0, 1), help="Share of beats that must be matched")
@click.option("--chord-window-ms", type=click.FloatRange(min=0, min_open=True), help="Chord grouping tolerance")
@click.option("--pitch-map", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Pitch map file")
@click.option("--jobs", type=click.IntRange(min=1), help="Worker processes")
@click.pass_obj
def convert(
    observability: ObservabilitySettings,
    input_dir: Path,
    output_dir: Path,
    beats_dir: Path | None,
    no_align: bool,
    match_window_ms: float | None,
    majority_window_ms: float | None,
    snap_radius_ms: float | None,
    max_correction_ms: float | None,
    min_matched_fraction: float | None,
    chord_window_ms: float | None,
    pitch_map: Path | None,
    jobs: int | None,
) -> None:
    """
    Convert chart directories into annotations, beats and a manifest.
    """
    with _fatal_io():
        config = PipelineConfig(
            chart=ChartSettings(),
            vocabulary=_override(VocabularySettings(), CHORD_WINDOW=_ms(chord_window_ms)),
            alignment=_override(
                AlignmentSettings(),
                ENABLED=False if no_align else None,
                MATCH_WINDOW=_ms(match_window_ms),
                MAJORITY_WINDOW=_ms(majority_window_ms),
                SNAP_RADIUS=_ms(snap_radius_ms),
                MAX_CORRECTION=_ms(max_correction_ms),
                MIN_MATCHED_FRACTION=min_matched_fraction,
            ),
            dataset=_override(DatasetSettings(), JOBS=jobs),
            pitch_map=read_pitch_map(pitch_map) if pitch_map else None,
            observability=observability,
        )
        manifest = CurationPipeline(config).convert_directory(input_dir, output_dir, beats_dir)

    click.echo(f"{len(manifest.kept)} of {len(manifest.records)} tracks kept")


@main.command()
@click.option("--manifest", "manifest_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--folds", type=click.IntRange(min=2), default=None, help="Number of folds")
@click.option("--seed", type=int, default=None)
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path), help="Splits file, next to the manifest by default")
def split(manifest_path: Path, folds: int | None, seed: int | None, out_path: Path | None) -> None:
    """
    Assign kept tracks to artist-disjoint folds.
    """
    settings = _override(DatasetSettings(), N_FOLDS=folds, SEED=seed)
    with _fatal_io():
        manifest = Manifest.load(manifest_path)
        try:
            assignment = build_splits(manifest.records, settings.N_FOLDS, settings.SEED)
        except TooFewArtistsError as e:
            raise click.BadParameter(str(e), param_hint="--folds")
        write_splits(out_path or manifest_path.parent / settings.SPLITS_FILE, assignment)

    click.echo(f"Fold sizes: {' '.join(str(size) for size in assignment.fold_sizes)}")


@main.command("stats")
@click.option("--manifest", "manifest_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False, path_type=Path), help="PNG file of the genre histogram")
def stats_command(manifest_path: Path, plot_path: Path | None) -> None:
    """
    Print dataset statistics as TSV.
    """
    with _fatal_io():
        dataset_stats = stats(Manifest.load(manifest_path).records)
        if plot_path is not None:
            plot_genres(dataset_stats, plot_path)

    click.echo(format_stats(dataset_stats), nl=False)


@main.command("eval")
@click.option("--ref", "ref_dir", required=True, type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--est", "est_dir", required=True, type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--window-ms", type=click.FloatRange(min=0, min_open=True), help="Hit tolerance")
@click.option("--folds", "folds_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Splits file")
def eval_command(ref_dir: Path, est_dir: Path, window_ms: float | None, folds_path: Path | None) -> None:
    """
    Score estimated annotations against references and print the report as TSV.
    """
    service = EvaluationService(_override(EvaluationSettings(), WINDOW=_ms(window_ms)))
    with _fatal_io():
        folds = read_splits(folds_path).folds if folds_path else None
        track_counts = service.count_directory(ref_dir, est_dir)
        try:
            report, counts = service.evaluate(track_counts, folds)
        except ValueError as e:
            raise click.BadParameter(str(e), param_hint="--folds")

    click.echo(format_report(report, counts), nl=False)


@main.command()
@click.option("--audio", "audio_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--window", type=click.IntRange(min=1))
@click.option("--hop", type=click.IntRange(min=1))
@click.option("--bands-per-octave", type=click.IntRange(min=1))
@click.option("--fmin", type=click.FloatRange(min=0, min_open=True))
@click.option("--fmax", type=click.FloatRange(min=0, min_open=True))
def features(
    audio_path: Path,
    out_path: Path,
    window: int | None,
    hop: int | None,
    bands_per_octave: int | None,
    fmin: float | None,
    fmax: float | None,
) -> None:
    """
    Write the log-frequency spectrogram of a WAV file.
    """
    settings = _override(
        FeatureSettings(),
        WINDOW=window,
        HOP=hop,
        BANDS_PER_OCTAVE=bands_per_octave,
        F_MIN=fmin,
        F_MAX=fmax,
    )
    with _fatal_io():
        extracted = FeatureExtractionService(settings).extract(load_wav(audio_path))
        write_features(out_path, extracted)

    click.echo(f"{extracted.shape[0]} frames x {extracted.shape[1]} bands")


@main.command()
@click.option("--manifest", "manifest_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--scores", "scores_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--fraction", type=click.FloatRange(0, 1), help="Share of scored tracks to flag")
@click.option("--discard-flagged", is_flag=True, default=False, help="Discard flagged tracks instead of only flagging them")
def flag(manifest_path: Path, scores_path: Path, fraction: float | None, discard_flagged: bool) -> None:
    """
    Flag the tracks with the lowest external score and rewrite the manifest.
    """
    settings = _override(DatasetSettings(), FLAG_FRACTION=fraction)
    with _fatal_io():
        manifest = Manifest.load(manifest_path)
        records = score_filter(manifest.records, read_scores(scores_path), settings.FLAG_FRACTION, discard_flagged)
        updated = Manifest.of(records)
        updated.save(manifest_path)

    click.echo(f"{sum(1 for record in updated.records if record.flagged)} tracks flagged")


@main.command()
@click.option("--activation", "activation_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--threshold", type=click.FloatRange(0, 1, min_open=True, max_open=True))
@click.option("--pre-max", type=click.IntRange(min=0))
@click.option("--post-max", type=click.IntRange(min=0))
@click.option("--avg-window", type=click.IntRange(min=0))
@click.option("--min-distance", type=click.IntRange(min=0))
def peaks(
    activation_path: Path,
    out_path: Path,
    threshold: float | None,
    pre_max: int | None,
    post_max: int | None,
    avg_window: int | None,
    min_distance: int | None,
) -> None:
    """
    Pick onsets from a five-column activation feature file and write them as annotations.
    """
    settings = _override(
        EvaluationSettings(),
        THRESHOLD=threshold,
        PRE_MAX=pre_max,
        POST_MAX=post_max,
        AVG_WINDOW=avg_window,
        MIN_DISTANCE=min_distance,
    )
    with _fatal_io():
        try:
            activation = Activation.from_features(read_features(activation_path))
        except ValueError as e:
            raise click.BadParameter(str(e), param_hint="--activation")
        onsets = EvaluationService(settings).pick_peaks(activation)
        write_annotations(out_path, onsets)

    click.echo(f"{len(onsets)} onsets")


__all__ = [
    "EXIT_USAGE",
    "EXIT_IO",
    "main",
]
