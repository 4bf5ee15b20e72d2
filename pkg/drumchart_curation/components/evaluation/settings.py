from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class EvaluationSettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="DRUMCHART_EVALUATION_")

    WINDOW: float = Field(0.050, gt=0, description="Onset matching tolerance in seconds (inclusive)")
    EMPTY_SCORE: float = Field(1.0, ge=0, le=1, description="Precision, recall and F of a class with no events at all")

    THRESHOLD: float = Field(0.2, gt=0, lt=1)
    PRE_MAX: int = Field(2, ge=0)
    POST_MAX: int = Field(2, ge=0)
    AVG_WINDOW: int = Field(5, ge=0)
    MIN_DISTANCE: int = Field(3, ge=0)


__all__ = [
    "EvaluationSettings",
]
