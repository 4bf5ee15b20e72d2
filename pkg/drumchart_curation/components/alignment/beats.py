"""
Beat estimators.

Any estimator producing a strictly increasing BeatSeq can drive the alignment. Two are provided:
beat times read from a file computed elsewhere, and a baseline that tracks beats in a
spectral-flux onset envelope with librosa.
"""

from abc import ABC, abstractmethod
from pathlib import Path

import librosa
import numpy as np
from structlog import get_logger

from drumchart_curation.components.features.audio import AudioBuffer
from drumchart_curation.components.features.spectrogram import (
    DEFAULT_WINDOW,
    LogSpectrogram,
    log_filterbank,
    log_spectrogram,
    spectral_flux,
)

from .errors import BadBeatsFileError, NoBeatsFoundError
from .matching import BeatSeq
from .settings import AlignmentSettings

logger = get_logger(__name__)

BASELINE_FRAME_RATE = 100.0


def parse_beats(text: str, source: str = "<string>") -> BeatSeq:
    """
    Parse a beats file: one decimal time in seconds per line, strictly increasing. Blank lines are
    skipped; columns after the first (such as beat positions) are ignored.

    Raises:
        BadBeatsFileError: On a non-numeric, negative or out-of-order value.
        NoBeatsFoundError: If the file lists no beats.
    """
    times: list[float] = []
    for number, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if not fields:
            continue
        try:
            value = float(fields[0])
        except ValueError:
            raise BadBeatsFileError(source, number, f"{fields[0]!r} is not a number")
        if not np.isfinite(value) or value < 0:
            raise BadBeatsFileError(source, number, f"{value} is not a non-negative time")
        if times and value <= times[-1]:
            raise BadBeatsFileError(source, number, f"{value} does not follow {times[-1]}")
        times.append(value)

    if not times:
        raise NoBeatsFoundError(source)
    return BeatSeq(times=tuple(times))


def format_beats(beats: BeatSeq) -> str:
    return "".join(f"{t:.6f}\n" for t in beats.times)


def read_beats(path: Path) -> BeatSeq:
    return parse_beats(path.read_text(encoding="utf-8", errors="replace"), str(path))


class BeatEstimator(ABC):
    @abstractmethod
    def estimate(self, source) -> BeatSeq:
        pass


class FileBeatEstimator(BeatEstimator):
    """
    Reads beats computed by an external tracker.
    """

    def estimate(self, source: Path) -> BeatSeq:
        return read_beats(Path(source))


class SpectralFluxBeatEstimator(BeatEstimator):
    """
    Baseline beat tracker.

    A log-filtered spectrogram at 100 frames per second gives a spectral-flux onset envelope.
    librosa estimates the global tempo from it and places beats by dynamic programming that
    rewards onset strength and penalizes inter-beat intervals deviating from the tempo period.
    """

    def __init__(self, settings: AlignmentSettings | None = None) -> None:
        self.settings = settings or AlignmentSettings()

    @staticmethod
    def hop(sample_rate: int) -> int:
        return max(1, round(sample_rate / BASELINE_FRAME_RATE))

    def onset_envelope(self, audio: AudioBuffer) -> LogSpectrogram:
        filterbank = log_filterbank(DEFAULT_WINDOW // 2 + 1, audio.sample_rate)
        return log_spectrogram(audio, filterbank, window=DEFAULT_WINDOW, hop=self.hop(audio.sample_rate))

    def estimate_tempo(self, envelope: np.ndarray, sample_rate: int) -> float:
        tempo = librosa.feature.tempo(
            onset_envelope=envelope,
            sr=sample_rate,
            hop_length=self.hop(sample_rate),
            start_bpm=self.settings.BASELINE_START_BPM,
            max_tempo=self.settings.BASELINE_MAX_BPM,
        )
        return float(np.atleast_1d(tempo)[0])

    def estimate(self, source: AudioBuffer) -> BeatSeq:
        """
        Track beats in an audio buffer.

        Raises:
            NoBeatsFoundError: If the audio has no onsets to track.
        """
        envelope = spectral_flux(self.onset_envelope(source))
        spread = envelope.std(ddof=1) if envelope.size > 1 else 0.0
        if not spread > 0:
            raise NoBeatsFoundError("audio without onsets")
        envelope = envelope / spread

        bpm = self.estimate_tempo(envelope, source.sample_rate)
        _, beats = librosa.beat.beat_track(
            onset_envelope=envelope,
            sr=source.sample_rate,
            hop_length=self.hop(source.sample_rate),
            start_bpm=self.settings.BASELINE_START_BPM,
            tightness=self.settings.BASELINE_TIGHTNESS,
            bpm=bpm,
            trim=True,
            units="time",
        )

        times = np.unique(np.asarray(beats, dtype=np.float64))
        times = times[times <= source.duration]
        if times.size == 0:
            raise NoBeatsFoundError("audio")

        logger.debug(f"Baseline tracker: {bpm:.1f} BPM, {times.size} beats")
        return BeatSeq(times=tuple(float(t) for t in times))


def estimate_beats(source: AudioBuffer | Path, settings: AlignmentSettings | None = None) -> BeatSeq:
    """
    Estimate beats from audio with the baseline tracker, or read them from a beats file.

    Args:
        source (AudioBuffer | Path): Audio to track, or a precomputed beats file.
        settings (AlignmentSettings | None): Baseline tracker parameters.

    Returns:
        BeatSeq: Strictly increasing beat times within the audio.

    Raises:
        NoBeatsFoundError: If no beat was found.
        BadBeatsFileError: If the beats file is malformed.
    """
    if isinstance(source, AudioBuffer):
        return SpectralFluxBeatEstimator(settings).estimate(source)
    return FileBeatEstimator().estimate(source)


__all__ = [
    "BASELINE_FRAME_RATE",
    "parse_beats",
    "format_beats",
    "read_beats",
    "BeatEstimator",
    "FileBeatEstimator",
    "SpectralFluxBeatEstimator",
    "estimate_beats",
]
