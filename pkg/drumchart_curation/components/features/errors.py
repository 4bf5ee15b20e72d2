class FeatureError(Exception):
    pass


class EmptyAudioError(FeatureError):
    def __init__(self, *args: object) -> None:
        super().__init__("Audio buffer contains no samples", *args)


class InvalidRangeError(FeatureError):
    def __init__(self, f_min: float, f_max: float, *args: object) -> None:
        super().__init__(f"Invalid frequency range: f_min={f_min} Hz, f_max={f_max} Hz", *args)
        self.f_min = f_min
        self.f_max = f_max


class DimensionMismatchError(FeatureError):
    def __init__(self, spectrogram_bins: int, filterbank_bins: int, *args: object) -> None:
        super().__init__(
            f"Spectrogram has {spectrogram_bins} frequency bins but the filterbank expects {filterbank_bins}",
            *args,
        )
        self.spectrogram_bins = spectrogram_bins
        self.filterbank_bins = filterbank_bins


class UnsupportedAudioError(FeatureError):
    def __init__(self, path: str, reason: str, *args: object) -> None:
        super().__init__(f"Cannot read {path}: {reason}", *args)
        self.path = path
        self.reason = reason


class BadFeatureFileError(FeatureError):
    def __init__(self, path: str, reason: str, *args: object) -> None:
        super().__init__(f"Invalid feature file {path}: {reason}", *args)
        self.path = path
        self.reason = reason


__all__ = [
    "FeatureError",
    "EmptyAudioError",
    "InvalidRangeError",
    "DimensionMismatchError",
    "UnsupportedAudioError",
    "BadFeatureFileError",
]
