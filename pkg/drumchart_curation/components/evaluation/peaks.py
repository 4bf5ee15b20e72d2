import numpy as np
from pydantic import Field, model_validator
from scipy.ndimage import maximum_filter1d

from drumchart_curation.components.features.spectrogram import LogSpectrogram
from drumchart_curation.components.vocabulary.classes import DrumClass
from drumchart_curation.core.data.dto import ArrayDTO

DEFAULT_THRESHOLD = 0.2
DEFAULT_PRE_MAX = 2
DEFAULT_POST_MAX = 2
DEFAULT_AVG_WINDOW = 5
DEFAULT_MIN_DISTANCE = 3


class Activation(ArrayDTO):
    """
    Per-class activation functions in [0, 1], one value per frame.
    """

    frame_rate: float = Field(gt=0)
    series: dict[DrumClass, np.ndarray]

    @model_validator(mode="after")
    def _complete_and_aligned(self) -> "Activation":
        missing = [drum_class.value for drum_class in DrumClass if drum_class not in self.series]
        if missing:
            raise ValueError(f"missing activation for {missing}")
        lengths = {np.asarray(values).shape for values in self.series.values()}
        if len(lengths) != 1 or len(next(iter(lengths))) != 1:
            raise ValueError(f"activations must be 1-D and of equal length, got shapes {sorted(lengths)}")
        for drum_class, values in self.series.items():
            values = np.asarray(values)
            if values.size and (values.min() < 0 or values.max() > 1):
                raise ValueError(f"{drum_class.value} activation leaves [0, 1]")
        return self

    @property
    def n_frames(self) -> int:
        return len(next(iter(self.series.values())))

    @classmethod
    def from_features(cls, features: LogSpectrogram) -> "Activation":
        """
        Read a five-column feature matrix as activations, columns in class order.
        """
        if features.shape[1] != len(DrumClass):
            raise ValueError(f"expected {len(DrumClass)} activation columns, got {features.shape[1]}")
        return cls(
            frame_rate=features.frame_rate,
            series={drum_class: np.ascontiguousarray(features.frames[:, i]) for i, drum_class in enumerate(DrumClass)},
        )


def _window_mean(values: np.ndarray, half_width: int) -> np.ndarray:
    """
    Mean over [i - half_width, i + half_width], clipped at both ends.
    """
    n = len(values)
    cumulative = np.concatenate(([0.0], np.cumsum(values)))
    index = np.arange(n)
    lo = np.maximum(index - half_width, 0)
    hi = np.minimum(index + half_width + 1, n)
    return (cumulative[hi] - cumulative[lo]) / (hi - lo)


def _pick(values: np.ndarray, threshold: float, pre_max: int, post_max: int, avg_window: int, min_distance: int) -> list[int]:
    if values.size == 0:
        return []
    size = pre_max + post_max + 1
    moving_max = maximum_filter1d(values, size, mode="nearest", origin=pre_max - size // 2)
    moving_mean = _window_mean(values, avg_window)
    candidates = np.flatnonzero((values == moving_max) & (values >= moving_mean + threshold))

    peaks: list[int] = []
    for frame in candidates:
        if not peaks or frame - peaks[-1] >= min_distance:
            peaks.append(int(frame))
    return peaks


def peak_pick(
    activation: Activation,
    threshold: float = DEFAULT_THRESHOLD,
    pre_max: int = DEFAULT_PRE_MAX,
    post_max: int = DEFAULT_POST_MAX,
    avg_window: int = DEFAULT_AVG_WINDOW,
    min_distance: int = DEFAULT_MIN_DISTANCE,
) -> dict[DrumClass, list[float]]:
    """
    Extract onsets from activation functions.

    Frame i is an onset when it equals the maximum over [i - pre_max, i + post_max], reaches the
    mean over [i - avg_window, i + avg_window] plus threshold, and lies at least min_distance
    frames after the previous onset of its class. Windows are clipped at the signal edges.

    Args:
        activation (Activation): Per-class activation functions.
        threshold (float): Height above the local mean, in (0, 1).
        pre_max (int): Frames before i in the maximum window.
        post_max (int): Frames after i in the maximum window.
        avg_window (int): Half width of the mean window in frames.
        min_distance (int): Smallest distance in frames between two onsets of one class.

    Returns:
        dict[DrumClass, list[float]]: Onset times in seconds per class.
    """
    if not 0 < threshold < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    if min(pre_max, post_max, avg_window, min_distance) < 0:
        raise ValueError("window parameters must be non-negative")

    return {
        drum_class: [
            frame / activation.frame_rate
            for frame in _pick(
                np.asarray(activation.series[drum_class], dtype=np.float64),
                threshold,
                pre_max,
                post_max,
                avg_window,
                min_distance,
            )
        ]
        for drum_class in DrumClass
    }


__all__ = [
    "DEFAULT_THRESHOLD",
    "DEFAULT_PRE_MAX",
    "DEFAULT_POST_MAX",
    "DEFAULT_AVG_WINDOW",
    "DEFAULT_MIN_DISTANCE",
    "Activation",
    "peak_pick",
]
