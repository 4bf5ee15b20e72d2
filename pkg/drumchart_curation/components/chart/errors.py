class ChartError(Exception):
    """
    Base class for chart directories that cannot be turned into a Chart value.
    """

    pass


class MissingArtistError(ChartError):
    def __init__(self, *args: object) -> None:
        super().__init__("Chart metadata has no artist (or a blank one)", *args)


class NoDrumTrackError(ChartError):
    def __init__(self, track_name: str, available: list[str], *args: object) -> None:
        super().__init__(f"No track named {track_name!r}; tracks found: {available}", *args)
        self.track_name = track_name
        self.available = available


class EmptyGameplayError(ChartError):
    def __init__(self, track_name: str, *args: object) -> None:
        super().__init__(f"Track {track_name!r} has no mapped gameplay notes", *args)
        self.track_name = track_name


class ChartNotFoundError(ChartError):
    def __init__(self, chart_dir: str, missing: str, *args: object) -> None:
        super().__init__(f"{chart_dir} does not contain {missing}", *args)
        self.chart_dir = chart_dir
        self.missing = missing


class NotProDrumsError(ChartError):
    def __init__(self, chart_dir: str, *args: object) -> None:
        super().__init__(f"{chart_dir} is not tagged pro_drums", *args)
        self.chart_dir = chart_dir


__all__ = [
    "ChartError",
    "MissingArtistError",
    "NoDrumTrackError",
    "EmptyGameplayError",
    "ChartNotFoundError",
    "NotProDrumsError",
]
