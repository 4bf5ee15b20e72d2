from .audio import REFERENCE_SAMPLE_RATE, AudioBuffer, load_wav, wav_duration
from .errors import (
    BadFeatureFileError,
    DimensionMismatchError,
    EmptyAudioError,
    FeatureError,
    InvalidRangeError,
    UnsupportedAudioError,
)
from .service import FeatureExtractionService
from .settings import FeatureSettings
from .spectrogram import (
    Filterbank,
    LogSpectrogram,
    Spectrogram,
    log_filterbank,
    log_magnitude,
    log_spectrogram,
    spectral_flux,
    stft,
)
from .storage import read_features, write_features

__all__ = [
    "REFERENCE_SAMPLE_RATE",
    "AudioBuffer",
    "load_wav",
    "wav_duration",
    "BadFeatureFileError",
    "DimensionMismatchError",
    "EmptyAudioError",
    "FeatureError",
    "InvalidRangeError",
    "UnsupportedAudioError",
    "FeatureExtractionService",
    "FeatureSettings",
    "Filterbank",
    "LogSpectrogram",
    "Spectrogram",
    "log_filterbank",
    "log_magnitude",
    "log_spectrogram",
    "spectral_flux",
    "stft",
    "read_features",
    "write_features",
]
