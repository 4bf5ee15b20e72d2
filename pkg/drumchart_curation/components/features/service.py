from drumchart_curation.core.layers.service import BaseService

from .audio import AudioBuffer
from .spectrogram import Filterbank, LogSpectrogram, log_filterbank, log_spectrogram
from .settings import FeatureSettings

# Below this rate Nyquist falls under the nominal 20 kHz upper band edge.
_FULL_RANGE_SAMPLE_RATE = 40_000


class FeatureExtractionService(BaseService[FeatureSettings]):
    """
    Computes log-frequency log-magnitude spectrograms. Filterbanks are cached per sample rate.
    """

    def __init__(self, settings: FeatureSettings) -> None:
        super().__init__(settings)
        self._filterbanks: dict[int, Filterbank] = {}

    def filterbank(self, sample_rate: int) -> Filterbank:
        if sample_rate not in self._filterbanks:
            self._filterbanks[sample_rate] = log_filterbank(
                self.settings.WINDOW // 2 + 1,
                sample_rate,
                self.settings.BANDS_PER_OCTAVE,
                self.settings.F_MIN,
                self.settings.F_MAX,
            )
        return self._filterbanks[sample_rate]

    def extract(self, audio: AudioBuffer) -> LogSpectrogram:
        """
        Compute the feature matrix of an audio buffer.

        Args:
            audio (AudioBuffer): Mono audio.

        Returns:
            LogSpectrogram: Shape (ceil(n_samples / HOP), n_bands).

        Raises:
            EmptyAudioError: If the buffer has no samples.
            InvalidRangeError: If the configured frequency range is empty at this sample rate.
        """
        if audio.sample_rate < _FULL_RANGE_SAMPLE_RATE and self.settings.F_MAX > audio.sample_rate / 2:
            self.logger.warning(
                f"Sample rate {audio.sample_rate} Hz caps the upper band edge at {audio.sample_rate / 2} Hz",
            )

        features = log_spectrogram(
            audio,
            self.filterbank(audio.sample_rate),
            window=self.settings.WINDOW,
            hop=self.settings.HOP,
            window_function=self.settings.WINDOW_FUNCTION,
            center=self.settings.CENTER,
            add=self.settings.LOG_ADD,
        )
        self.logger.debug(f"Extracted {features.shape[0]} frames x {features.shape[1]} bands at {features.frame_rate} Hz")
        return features


__all__ = [
    "FeatureExtractionService",
]
