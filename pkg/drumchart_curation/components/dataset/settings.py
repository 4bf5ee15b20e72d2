from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class DatasetSettings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="DRUMCHART_DATASET_")

    JOBS: int = Field(1, ge=1, description="Worker processes for batch conversion")
    N_FOLDS: int = Field(10, ge=2)
    SEED: int = 0
    FLAG_FRACTION: float = Field(0.10, ge=0, le=1)
    VALIDATION_FRACTION: float = Field(0.15, ge=0, le=1)
    TAIL_PADDING: float = Field(2.0, ge=0, description="Seconds added after the last onset when there is no audio")

    MANIFEST_FILE: str = "manifest.json"
    ANNOTATIONS_DIR: str = "annotations"
    BEATS_DIR: str = "beats"
    SPLITS_FILE: str = "splits.tsv"


__all__ = [
    "DatasetSettings",
]
