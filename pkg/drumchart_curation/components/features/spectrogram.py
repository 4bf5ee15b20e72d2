"""
Log-frequency, log-magnitude short-time Fourier transform.

Frames are centered (window/2 zeros on both sides) so that frame i describes time i * hop /
sample_rate. With 44.1 kHz audio and a hop of 441 samples that is exactly one frame every 10 ms.
"""

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from pydantic import Field
from scipy.signal import get_window
from structlog import get_logger

from drumchart_curation.core.data.dto import ArrayDTO

from .audio import AudioBuffer
from .errors import DimensionMismatchError, EmptyAudioError, InvalidRangeError

logger = get_logger(__name__)

DEFAULT_WINDOW = 2048
DEFAULT_HOP = 441
DEFAULT_BANDS_PER_OCTAVE = 12
DEFAULT_F_MIN = 20.0
DEFAULT_F_MAX = 20000.0

_OCTAVE_EPSILON = 1e-9


class Spectrogram(ArrayDTO):
    values: np.ndarray = Field(description="Complex STFT, shape (n_frames, window // 2 + 1)")
    sample_rate: int = Field(gt=0)
    window: int = Field(gt=0)
    hop: int = Field(gt=0)

    @property
    def frame_rate(self) -> float:
        return self.sample_rate / self.hop

    @property
    def n_bins(self) -> int:
        return self.values.shape[1]

    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)


class Filterbank(ArrayDTO):
    weights: np.ndarray = Field(description="Shape (n_fft_bins, n_bands)")
    center_bins: np.ndarray
    center_frequencies: np.ndarray

    @property
    def n_bands(self) -> int:
        return self.weights.shape[1]


class LogSpectrogram(ArrayDTO):
    frames: np.ndarray = Field(description="Shape (n_frames, n_bands), non-negative")
    frame_rate: float = Field(gt=0)
    band_center_frequencies: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.frames.shape


def _frame_view(audio: AudioBuffer, window: int, hop: int, center: bool) -> np.ndarray:
    """
    Read-only (n_frames, window) view over the zero-padded signal.
    """
    if window <= 0 or hop <= 0:
        raise ValueError(f"window and hop must be positive, got window={window}, hop={hop}")

    samples = audio.samples
    if samples.size == 0:
        raise EmptyAudioError()

    n_frames = math.ceil(samples.size / hop)
    pad_left = window // 2 if center else 0
    padded = np.zeros((n_frames - 1) * hop + window, dtype=np.float64)
    usable = min(samples.size, padded.size - pad_left)
    padded[pad_left : pad_left + usable] = samples[:usable]

    return sliding_window_view(padded, window)[::hop][:n_frames]


def stft(
    audio: AudioBuffer,
    window: int = DEFAULT_WINDOW,
    hop: int = DEFAULT_HOP,
    window_function: str = "hann",
    center: bool = True,
) -> Spectrogram:
    """
    Short-time Fourier transform with ceil(n_samples / hop) frames.

    Args:
        audio (AudioBuffer): Mono input.
        window (int): Frame length in samples.
        hop (int): Hop size in samples.
        window_function (str): Any window name understood by scipy.signal.get_window.
        center (bool): Pad window // 2 zeros on both ends so frames are centered on i * hop.

    Returns:
        Spectrogram: Complex spectrum keeping the window // 2 + 1 non-negative frequency bins.

    Raises:
        EmptyAudioError: If the buffer has no samples.
    """
    frames = _frame_view(audio, window, hop, center)
    weights = get_window(window_function, window, fftbins=True)
    values = np.fft.rfft(frames * weights, axis=1)

    return Spectrogram(values=values, sample_rate=audio.sample_rate, window=window, hop=hop)


def log_filterbank(
    n_fft_bins: int,
    sample_rate: int,
    bands_per_octave: int = DEFAULT_BANDS_PER_OCTAVE,
    f_min: float = DEFAULT_F_MIN,
    f_max: float = DEFAULT_F_MAX,
) -> Filterbank:
    """
    Triangular filters on a logarithmic frequency axis.

    Target centers are f_min * 2 ** (k / bands_per_octave) up to f_max (capped at Nyquist). They
    are quantized to FFT bins and repeated bins are merged, so each filter has its own center
    bin. A filter rises from the previous center bin, peaks at 1 on its own and falls to the next.
    The first and last filters use the next target below f_min and above f_max as outer edges.

    Args:
        n_fft_bins (int): Number of non-negative frequency bins (window // 2 + 1).
        sample_rate (int): Audio sample rate in Hz.
        bands_per_octave (int): Filters per octave.
        f_min (float): Lowest center frequency in Hz.
        f_max (float): Highest center frequency in Hz.

    Returns:
        Filterbank: Weights of shape (n_fft_bins, n_bands).

    Raises:
        InvalidRangeError: If f_min <= 0 or f_min >= f_max (after capping f_max at Nyquist).
    """
    nyquist = sample_rate / 2
    if f_max > nyquist:
        f_max = nyquist
    if f_min <= 0 or f_min >= f_max:
        raise InvalidRangeError(f_min, f_max)

    n_fft = 2 * (n_fft_bins - 1)
    bin_hz = sample_rate / n_fft

    n_targets = int(math.floor(bands_per_octave * math.log2(f_max / f_min) + _OCTAVE_EPSILON)) + 1
    targets = f_min * 2.0 ** (np.arange(-1, n_targets + 1) / bands_per_octave)
    target_bins = np.clip(np.round(targets / bin_hz).astype(int), 0, n_fft_bins - 1)

    inner_bins = target_bins[1:-1]
    center_bins, first_index = np.unique(inner_bins, return_index=True)
    center_frequencies = targets[1:-1][first_index]

    edges = np.concatenate(([min(target_bins[0], center_bins[0])], center_bins, [max(target_bins[-1], center_bins[-1])]))
    weights = np.zeros((n_fft_bins, center_bins.size), dtype=np.float64)
    for band, (left, center, right) in enumerate(zip(edges[:-2], edges[1:-1], edges[2:])):
        if center > left:
            weights[left:center, band] = (np.arange(left, center) - left) / (center - left)
        weights[center, band] = 1.0
        if right > center:
            weights[center + 1 : right, band] = (right - np.arange(center + 1, right)) / (right - center)

    return Filterbank(weights=weights, center_bins=center_bins, center_frequencies=center_frequencies)


def log_magnitude(spectrogram: Spectrogram, filterbank: Filterbank, add: float = 1.0) -> LogSpectrogram:
    """
    Apply a filterbank to the magnitude spectrum and compress with log10(add + x).

    Raises:
        DimensionMismatchError: If the filterbank was built for another number of bins.
    """
    if spectrogram.n_bins != filterbank.weights.shape[0]:
        raise DimensionMismatchError(spectrogram.n_bins, filterbank.weights.shape[0])

    filtered = spectrogram.magnitude() @ filterbank.weights
    return LogSpectrogram(
        frames=np.log10(add + filtered),
        frame_rate=spectrogram.frame_rate,
        band_center_frequencies=filterbank.center_frequencies,
    )


def log_spectrogram(
    audio: AudioBuffer,
    filterbank: Filterbank,
    window: int = DEFAULT_WINDOW,
    hop: int = DEFAULT_HOP,
    window_function: str = "hann",
    center: bool = True,
    add: float = 1.0,
    block_frames: int = 1024,
) -> LogSpectrogram:
    """
    Same result as log_magnitude(stft(...), filterbank) computed block by block, so the complex
    spectrogram of a whole song never has to be held in memory.
    """
    frames = _frame_view(audio, window, hop, center)
    if window // 2 + 1 != filterbank.weights.shape[0]:
        raise DimensionMismatchError(window // 2 + 1, filterbank.weights.shape[0])

    weights = get_window(window_function, window, fftbins=True)
    out = np.empty((frames.shape[0], filterbank.n_bands), dtype=np.float64)
    for start in range(0, frames.shape[0], block_frames):
        block = np.abs(np.fft.rfft(frames[start : start + block_frames] * weights, axis=1))
        out[start : start + block_frames] = np.log10(add + block @ filterbank.weights)

    return LogSpectrogram(
        frames=out,
        frame_rate=audio.sample_rate / hop,
        band_center_frequencies=filterbank.center_frequencies,
    )


def spectral_flux(features: LogSpectrogram) -> np.ndarray:
    """
    Onset strength per frame: sum over bands of the positive frame-to-frame increase.
    """
    frames = features.frames
    flux = np.zeros(frames.shape[0], dtype=np.float64)
    if frames.shape[0] > 1:
        flux[1:] = np.maximum(np.diff(frames, axis=0), 0.0).sum(axis=1)
    return flux


__all__ = [
    "DEFAULT_WINDOW",
    "DEFAULT_HOP",
    "DEFAULT_BANDS_PER_OCTAVE",
    "DEFAULT_F_MIN",
    "DEFAULT_F_MAX",
    "Spectrogram",
    "Filterbank",
    "LogSpectrogram",
    "stft",
    "log_filterbank",
    "log_magnitude",
    "log_spectrogram",
    "spectral_flux",
]
