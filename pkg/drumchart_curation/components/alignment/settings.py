from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class AlignmentSettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="DRUMCHART_ALIGNMENT_")

    ENABLED: bool = True
    MATCH_WINDOW: float = Field(0.05, gt=0, description="Seconds within which a beat counts as matched")
    MAX_CORRECTION: float = Field(0.080, gt=0, description="Largest tolerated correction in seconds")
    MIN_MATCHED_FRACTION: float = Field(0.5, ge=0, le=1)
    MAJORITY_WINDOW: float | None = Field(None, gt=0, description="Tolerance of the majority check, MATCH_WINDOW if unset")
    SNAP_RADIUS: float | None = Field(
        None, gt=0, description="Search radius of beat snapping, MAX_CORRECTION + MATCH_WINDOW if unset"
    )

    BASELINE_TIGHTNESS: float = Field(100.0, gt=0)
    BASELINE_MAX_BPM: float = Field(300.0, gt=0)
    BASELINE_START_BPM: float = Field(120.0, gt=0)

    @property
    def snap_radius(self) -> float:
        return self.SNAP_RADIUS if self.SNAP_RADIUS is not None else self.MAX_CORRECTION + self.MATCH_WINDOW

    @property
    def majority_window(self) -> float:
        return self.MAJORITY_WINDOW if self.MAJORITY_WINDOW is not None else self.MATCH_WINDOW


__all__ = [
    "AlignmentSettings",
]
