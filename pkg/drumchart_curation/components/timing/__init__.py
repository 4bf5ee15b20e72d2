from .tempo_map import DEFAULT_US_PER_QUARTER, TempoChange, TempoMap, beat_grid, tick_to_seconds

__all__ = [
    "DEFAULT_US_PER_QUARTER",
    "TempoChange",
    "TempoMap",
    "beat_grid",
    "tick_to_seconds",
]
