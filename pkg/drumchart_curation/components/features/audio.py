from pathlib import Path

import numpy as np
import soundfile as sf
from pydantic import Field, field_validator
from structlog import get_logger

from drumchart_curation.core.data.dto import ArrayDTO

from .errors import UnsupportedAudioError

logger = get_logger(__name__)

REFERENCE_SAMPLE_RATE = 44100
SUPPORTED_SUBTYPES = ("PCM_16", "PCM_24", "FLOAT")


class AudioBuffer(ArrayDTO):
    """
    Mono PCM audio. Multi-channel input is mean-downmixed on construction.
    """

    samples: np.ndarray
    sample_rate: int = Field(gt=0)

    @field_validator("samples", mode="before")
    @classmethod
    def _to_mono_float(cls, value) -> np.ndarray:
        samples = np.asarray(value, dtype=np.float64)
        if samples.ndim == 2:
            samples = samples.mean(axis=1)
        if samples.ndim != 1:
            raise ValueError(f"expected mono or (samples, channels) audio, got shape {samples.shape}")
        samples = np.ascontiguousarray(samples)
        samples.setflags(write=False)
        return samples

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


def wav_duration(path: Path) -> float:
    """
    Length of a WAV file in seconds, read from its header.
    """
    try:
        return float(sf.info(str(path)).duration)
    except RuntimeError as e:
        raise UnsupportedAudioError(str(path), str(e)) from e


def load_wav(path: Path) -> AudioBuffer:
    """
    Read a PCM WAV file (16/24-bit integer or 32-bit float) as mono audio.

    Args:
        path (Path): The WAV file.

    Returns:
        AudioBuffer: Samples in [-1, 1] at the file's sample rate.

    Raises:
        UnsupportedAudioError: If the file is not a WAV file of a supported sample format.
    """
    try:
        info = sf.info(str(path))
    except RuntimeError as e:
        raise UnsupportedAudioError(str(path), str(e)) from e

    if info.format != "WAV" or info.subtype not in SUPPORTED_SUBTYPES:
        raise UnsupportedAudioError(str(path), f"{info.format}/{info.subtype} is not PCM WAV")

    data, sample_rate = sf.read(str(path), dtype="float64", always_2d=True)
    if sample_rate != REFERENCE_SAMPLE_RATE:
        logger.warning(
            f"{path.name} is sampled at {sample_rate} Hz; frame rates are only exact at {REFERENCE_SAMPLE_RATE} Hz"
        )

    return AudioBuffer(samples=data, sample_rate=sample_rate)


__all__ = [
    "REFERENCE_SAMPLE_RATE",
    "AudioBuffer",
    "load_wav",
    "wav_duration",
]
