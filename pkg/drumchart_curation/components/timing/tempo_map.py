from bisect import bisect_right
from typing import Iterable

from pydantic import Field, PrivateAttr, model_validator

from drumchart_curation.core.data.dto import ValueDTO

# MIDI default when a file declares no tempo at tick 0: 120 BPM
DEFAULT_US_PER_QUARTER = 500_000


class TempoChange(ValueDTO):
    tick: int = Field(ge=0)
    us_per_quarter: int = Field(gt=0)


class TempoMap(ValueDTO):
    """
    Tick to seconds authority of a chart.

    Changes are kept sorted strictly by tick, with an entry at tick 0 (the MIDI default tempo is
    inserted when the file does not declare one). The elapsed seconds at every change are
    precomputed so a lookup is a bisection plus one affine step.
    """

    ticks_per_quarter: int = Field(gt=0)
    changes: tuple[TempoChange, ...] = ()

    _change_ticks: list[int] = PrivateAttr(default_factory=list)
    _change_seconds: list[float] = PrivateAttr(default_factory=list)

    @model_validator(mode="before")
    @classmethod
    def _normalize_changes(cls, data):
        if not isinstance(data, dict):
            return data

        raw = [
            change if isinstance(change, TempoChange) else TempoChange.model_validate(change)
            for change in data.get("changes", ())
        ]
        # stable sort keeps file order, so the last of several simultaneous changes wins
        by_tick: dict[int, TempoChange] = {}
        for change in sorted(raw, key=lambda c: c.tick):
            by_tick[change.tick] = change
        if 0 not in by_tick:
            by_tick[0] = TempoChange(tick=0, us_per_quarter=DEFAULT_US_PER_QUARTER)

        return {**data, "changes": tuple(by_tick[tick] for tick in sorted(by_tick))}

    def model_post_init(self, __context) -> None:
        seconds = 0.0
        ticks: list[int] = []
        elapsed: list[float] = []
        previous: TempoChange | None = None
        for change in self.changes:
            if previous is not None:
                seconds += self._segment_seconds(previous.us_per_quarter, change.tick - previous.tick)
            ticks.append(change.tick)
            elapsed.append(seconds)
            previous = change

        self._change_ticks = ticks
        self._change_seconds = elapsed

    @classmethod
    def from_events(cls, ticks_per_quarter: int, tempo_events: Iterable[tuple[int, int]]) -> "TempoMap":
        """
        Build a map from (tick, microseconds per quarter) pairs given in file order.

        Args:
            ticks_per_quarter (int): The file's PPQ resolution.
            tempo_events (Iterable[tuple[int, int]]): Tempo events in file order.

        Returns:
            TempoMap: The normalized tempo map.
        """
        changes = [TempoChange(tick=tick, us_per_quarter=tempo) for tick, tempo in tempo_events]
        return cls(ticks_per_quarter=ticks_per_quarter, changes=tuple(changes))

    def _segment_seconds(self, us_per_quarter: int, ticks: int) -> float:
        return ticks * us_per_quarter / (self.ticks_per_quarter * 1_000_000)

    def _governing_index(self, tick: int) -> int:
        return bisect_right(self._change_ticks, tick) - 1

    def tick_to_seconds(self, tick: int) -> float:
        if tick < 0:
            raise ValueError(f"tick must be non-negative, got {tick}")
        index = self._governing_index(tick)
        change = self.changes[index]
        return self._change_seconds[index] + self._segment_seconds(change.us_per_quarter, tick - change.tick)

    def bpm_at(self, tick: int) -> float:
        return 60_000_000 / self.changes[self._governing_index(tick)].us_per_quarter

    def beat_grid(self, end_tick: int) -> list[float]:
        if end_tick < 0:
            raise ValueError(f"end_tick must be non-negative, got {end_tick}")
        return [self.tick_to_seconds(tick) for tick in range(0, end_tick + 1, self.ticks_per_quarter)]


def tick_to_seconds(tempo_map: TempoMap, tick: int) -> float:
    """
    Convert an absolute MIDI tick to seconds.

    Args:
        tempo_map (TempoMap): The chart's tempo map.
        tick (int): Absolute tick, non-negative.

    Returns:
        float: Seconds from the start of the chart.
    """
    return tempo_map.tick_to_seconds(tick)


def beat_grid(tempo_map: TempoMap, end_tick: int) -> list[float]:
    """
    Quarter-note beat times from tick 0 up to and including end_tick.

    Args:
        tempo_map (TempoMap): The chart's tempo map.
        end_tick (int): Last tick the grid may reach.

    Returns:
        list[float]: Strictly increasing beat times in seconds.
    """
    return tempo_map.beat_grid(end_tick)


__all__ = [
    "DEFAULT_US_PER_QUARTER",
    "TempoChange",
    "TempoMap",
    "tick_to_seconds",
    "beat_grid",
]
