from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class FeatureSettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="DRUMCHART_FEATURES_")

    WINDOW: int = Field(2048, gt=0)
    HOP: int = Field(441, gt=0)
    BANDS_PER_OCTAVE: int = Field(12, gt=0)
    F_MIN: float = Field(20.0, gt=0)
    F_MAX: float = Field(20000.0, gt=0)
    LOG_ADD: float = Field(1.0, gt=0, description="Constant added before log10")
    CENTER: bool = True
    WINDOW_FUNCTION: str = "hann"


__all__ = [
    "FeatureSettings",
]
