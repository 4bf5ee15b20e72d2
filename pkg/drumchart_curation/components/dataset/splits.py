"""
Artist-disjoint cross-validation folds.

All tracks of an artist land in one fold. Artist groups are placed largest first, each into the
currently smallest fold, which keeps the fold sizes within one artist group of each other.
"""

import math
import random
from collections import defaultdict
from pathlib import Path
from typing import Iterable

from pydantic import Field, model_validator
from structlog import get_logger

from drumchart_curation.core.data.dto import ValueDTO
from drumchart_curation.core.utils.files import atomic_write_text

from .records import TrackRecord

logger = get_logger(__name__)

DEFAULT_N_FOLDS = 10
DEFAULT_VALIDATION_FRACTION = 0.15


class SplitError(Exception):
    pass


class TooFewArtistsError(SplitError):
    def __init__(self, n_artists: int, n_folds: int, *args: object) -> None:
        super().__init__(f"{n_artists} distinct artists cannot fill {n_folds} artist-disjoint folds", *args)
        self.n_artists = n_artists
        self.n_folds = n_folds


class InvalidFoldError(SplitError):
    def __init__(self, fold: int, n_folds: int, *args: object) -> None:
        super().__init__(f"Fold {fold} is outside [0, {n_folds})", *args)
        self.fold = fold
        self.n_folds = n_folds


class SplitFileError(SplitError):
    def __init__(self, path: str, line: int, reason: str, *args: object) -> None:
        super().__init__(f"{path}:{line}: {reason}", *args)
        self.path = path
        self.line = line
        self.reason = reason


class SplitAssignment(ValueDTO):
    n_folds: int = Field(ge=2)
    folds: dict[str, int]

    @model_validator(mode="after")
    def _folds_in_range(self) -> "SplitAssignment":
        for track_id, fold in self.folds.items():
            if not 0 <= fold < self.n_folds:
                raise ValueError(f"track {track_id} has fold {fold} outside [0, {self.n_folds})")
        return self

    def members(self, fold: int) -> list[str]:
        return sorted(track_id for track_id, f in self.folds.items() if f == fold)

    @property
    def fold_sizes(self) -> list[int]:
        sizes = [0] * self.n_folds
        for fold in self.folds.values():
            sizes[fold] += 1
        return sizes


class FoldRoles(ValueDTO):
    train: tuple[str, ...]
    validation: tuple[str, ...]
    test: tuple[str, ...]


def artist_key(artist: str) -> str:
    return artist.strip().casefold()


def build_splits(records: Iterable[TrackRecord], n_folds: int = DEFAULT_N_FOLDS, seed: int = 0) -> SplitAssignment:
    """
    Assign every kept track to one of n_folds artist-disjoint folds.

    Artist names are compared case-insensitively. Groups of equal size are placed in an order
    shuffled with seed; on equal fold sizes the lowest fold index wins.

    Args:
        records (Iterable[TrackRecord]): Manifest records; discarded tracks are ignored.
        n_folds (int): Number of folds, at least 2.
        seed (int): Seed of the tie-breaking shuffle.

    Returns:
        SplitAssignment: Fold index per kept track id.

    Raises:
        TooFewArtistsError: If there are fewer distinct artists than folds.
    """
    if n_folds < 2:
        raise ValueError(f"n_folds must be at least 2, got {n_folds}")

    groups: dict[str, list[str]] = defaultdict(list)
    for record in records:
        if record.kept:
            groups[artist_key(record.artist)].append(record.id)

    if len(groups) < n_folds:
        raise TooFewArtistsError(len(groups), n_folds)

    order = sorted(groups)
    random.Random(seed).shuffle(order)
    order.sort(key=lambda artist: len(groups[artist]), reverse=True)

    sizes = [0] * n_folds
    folds: dict[str, int] = {}
    for artist in order:
        fold = min(range(n_folds), key=lambda f: (sizes[f], f))
        for track_id in groups[artist]:
            folds[track_id] = fold
        sizes[fold] += len(groups[artist])

    logger.info(f"Split {len(folds)} tracks of {len(groups)} artists into {n_folds} folds of sizes {sizes}")
    return SplitAssignment(n_folds=n_folds, folds=dict(sorted(folds.items())))


def fold_roles(
    assignment: SplitAssignment,
    test_fold: int,
    validation_fraction: float | None = None,
    seed: int = 0,
) -> FoldRoles:
    """
    Split the tracks into train, validation and test sets around a test fold.

    By default the validation set is the fold after the test fold (cyclically). With
    validation_fraction, the tracks outside the test fold are shuffled with seed and the first
    floor(fraction * n + 0.5) become the validation set.

    Raises:
        InvalidFoldError: If test_fold is not a fold of the assignment.
    """
    if not 0 <= test_fold < assignment.n_folds:
        raise InvalidFoldError(test_fold, assignment.n_folds)

    test = assignment.members(test_fold)
    if validation_fraction is None:
        validation_fold = (test_fold + 1) % assignment.n_folds
        validation = assignment.members(validation_fold)
        train = sorted(t for t, f in assignment.folds.items() if f not in (test_fold, validation_fold))
    else:
        rest = sorted(t for t, f in assignment.folds.items() if f != test_fold)
        random.Random(seed).shuffle(rest)
        n_validation = math.floor(validation_fraction * len(rest) + 0.5)
        validation = sorted(rest[:n_validation])
        train = sorted(rest[n_validation:])

    return FoldRoles(train=tuple(train), validation=tuple(validation), test=tuple(test))


def format_splits(assignment: SplitAssignment) -> str:
    lines = [f"# n_folds={assignment.n_folds}"]
    lines.extend(f"{track_id}\t{fold}" for track_id, fold in sorted(assignment.folds.items()))
    return "\n".join(lines) + "\n"


def parse_splits(text: str, source: str = "<string>") -> SplitAssignment:
    """
    Parse `track_id<TAB>fold` lines. A `# n_folds=K` comment sets the fold count, otherwise it is
    one more than the largest fold index.

    Raises:
        SplitFileError: On a malformed line or a repeated track id.
    """
    n_folds: int | None = None
    folds: dict[str, int] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            key, _, value = stripped.lstrip("# ").partition("=")
            if key.strip() == "n_folds":
                try:
                    n_folds = int(value)
                except ValueError:
                    raise SplitFileError(source, number, f"bad fold count {value!r}")
            continue

        fields = stripped.split("\t")
        if len(fields) != 2:
            raise SplitFileError(source, number, f"expected 2 tab-separated fields, got {len(fields)}")
        track_id, fold = fields[0].strip(), fields[1].strip()
        if not fold.isdigit():
            raise SplitFileError(source, number, f"fold {fold!r} is not a non-negative integer")
        if track_id in folds:
            raise SplitFileError(source, number, f"track {track_id} is listed twice")
        folds[track_id] = int(fold)

    if n_folds is None:
        n_folds = max(max(folds.values(), default=0) + 1, 2)
    try:
        return SplitAssignment(n_folds=n_folds, folds=folds)
    except ValueError as e:
        raise SplitFileError(source, 0, str(e)) from e


def write_splits(path: Path, assignment: SplitAssignment) -> None:
    atomic_write_text(path, format_splits(assignment))


def read_splits(path: Path) -> SplitAssignment:
    return parse_splits(path.read_text(encoding="utf-8"), str(path))


__all__ = [
    "DEFAULT_N_FOLDS",
    "DEFAULT_VALIDATION_FRACTION",
    "SplitError",
    "TooFewArtistsError",
    "InvalidFoldError",
    "SplitFileError",
    "SplitAssignment",
    "FoldRoles",
    "artist_key",
    "build_splits",
    "fold_roles",
    "format_splits",
    "parse_splits",
    "write_splits",
    "read_splits",
]
