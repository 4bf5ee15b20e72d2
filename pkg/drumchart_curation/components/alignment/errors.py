class AlignmentError(Exception):
    pass


class InsufficientAnchorsError(AlignmentError):
    def __init__(self, n_matched: int, *args: object) -> None:
        super().__init__(f"Interpolation needs at least two matched beats, got {n_matched}", *args)
        self.n_matched = n_matched


class BeatEstimationError(Exception):
    pass


class NoBeatsFoundError(BeatEstimationError):
    def __init__(self, source: str, *args: object) -> None:
        super().__init__(f"No beats found in {source}", *args)
        self.source = source


class BadBeatsFileError(BeatEstimationError):
    def __init__(self, path: str, line: int, reason: str, *args: object) -> None:
        super().__init__(f"{path}:{line}: {reason}", *args)
        self.path = path
        self.line = line
        self.reason = reason


__all__ = [
    "AlignmentError",
    "InsufficientAnchorsError",
    "BeatEstimationError",
    "NoBeatsFoundError",
    "BadBeatsFileError",
]
