from enum import StrEnum
from pathlib import Path
from typing import Iterable, Literal

from pydantic import Field, ValidationError, field_validator, model_validator
from pydantic_core import from_json
from structlog import get_logger

from drumchart_curation.components.alignment.matching import AlignmentReport
from drumchart_curation.components.vocabulary.classes import DrumClass
from drumchart_curation.components.vocabulary.resolution import Discrepancy
from drumchart_curation.core.data.dto import ValueDTO
from drumchart_curation.core.utils.files import atomic_write_text

logger = get_logger(__name__)

SCHEMA_VERSION = 1


class TrackStatus(StrEnum):
    KEPT = "kept"
    DISCARDED = "discarded"


class DiscardReason(StrEnum):
    ALIGNMENT_SANITY = "alignment-sanity"
    LABEL_SCREEN = "label-screen"
    PARSE_ERROR = "parse-error"
    EMPTY = "empty"


def _zero_counts() -> dict[DrumClass, int]:
    return {drum_class: 0 for drum_class in DrumClass}


class TrackRecord(ValueDTO):
    """
    Manifest entry of one chart directory.
    """

    id: str = Field(min_length=1, description="Chart directory name")
    title: str = ""
    artist: str = ""
    genre: str = ""
    duration: float = Field(0.0, ge=0, description="Seconds")
    n_onsets_per_class: dict[DrumClass, int] = Field(default_factory=_zero_counts)
    status: TrackStatus
    discard_reason: DiscardReason | None = None
    detail: str = ""
    flagged: bool = False
    score: float | None = None
    alignment: AlignmentReport | None = None
    discrepancies: tuple[Discrepancy, ...] = ()
    unmapped_pitches: dict[int, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _status_consistency(self) -> "TrackRecord":
        if self.status == TrackStatus.DISCARDED and self.discard_reason is None:
            raise ValueError(f"discarded track {self.id} needs a discard reason")
        if self.status == TrackStatus.KEPT:
            if self.discard_reason is not None:
                raise ValueError(f"kept track {self.id} cannot have a discard reason")
            if self.duration <= 0:
                raise ValueError(f"kept track {self.id} needs a positive duration")
        return self

    @property
    def kept(self) -> bool:
        return self.status == TrackStatus.KEPT

    @property
    def n_onsets(self) -> int:
        return sum(self.n_onsets_per_class.values())

    def discard(self, reason: DiscardReason, detail: str = "") -> "TrackRecord":
        return TrackRecord.convert_from(self, status=TrackStatus.DISCARDED, discard_reason=reason, detail=detail)


class ManifestError(Exception):
    def __init__(self, path: str, reason: str, *args: object) -> None:
        super().__init__(f"Invalid manifest {path}: {reason}", *args)
        self.path = path
        self.reason = reason


class Manifest(ValueDTO):
    """
    All tracks of a dataset, ordered by id.
    """

    schema_version: Literal[1] = SCHEMA_VERSION
    records: tuple[TrackRecord, ...] = ()

    @field_validator("records")
    @classmethod
    def _sorted_unique(cls, records: tuple[TrackRecord, ...]) -> tuple[TrackRecord, ...]:
        records = tuple(sorted(records, key=lambda record: record.id))
        duplicates = sorted({a.id for a, b in zip(records, records[1:]) if a.id == b.id})
        if duplicates:
            raise ValueError(f"duplicate track ids {duplicates}")
        return records

    @classmethod
    def of(cls, records: Iterable[TrackRecord]) -> "Manifest":
        return cls(records=tuple(records))

    @property
    def kept(self) -> list[TrackRecord]:
        return [record for record in self.records if record.kept]

    def dumps(self) -> str:
        return self.model_dump_json(indent=2) + "\n"

    def save(self, path: Path) -> None:
        atomic_write_text(path, self.dumps())
        logger.debug(f"Saved manifest with {len(self.records)} records to {path}")

    @classmethod
    def load(cls, path: Path) -> "Manifest":
        """
        Read a manifest. Keys unknown to this version are ignored at any depth.

        Raises:
            ManifestError: If the file is not a valid manifest.
        """
        try:
            data = from_json(path.read_bytes())
        except ValueError as e:
            raise ManifestError(str(path), f"not JSON: {e}") from e

        records = data.get("records", []) if isinstance(data, dict) else None
        if not isinstance(records, list) or not all(isinstance(record, dict) for record in records):
            raise ManifestError(str(path), "expected an object with a list of record objects")

        try:
            return cls.from_dict(data)
        except ValidationError as e:
            raise ManifestError(str(path), f"{e.error_count()} validation errors, first: {e.errors()[0]['msg']}") from e


__all__ = [
    "SCHEMA_VERSION",
    "TrackStatus",
    "DiscardReason",
    "TrackRecord",
    "ManifestError",
    "Manifest",
]
