from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class VocabularySettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="DRUMCHART_VOCABULARY_")

    CHORD_WINDOW: float = Field(0.010, gt=0, description="Seconds within which events form one chord")


__all__ = [
    "VocabularySettings",
]
