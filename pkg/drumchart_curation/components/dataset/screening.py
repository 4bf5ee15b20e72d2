"""
Score-ranked screening: the tracks with the lowest external quality score are flagged for review.
"""

import math
from pathlib import Path
from typing import Mapping, Sequence

from structlog import get_logger

from .records import DiscardReason, TrackRecord

logger = get_logger(__name__)

DEFAULT_FLAG_FRACTION = 0.10


class ScoreFileError(Exception):
    def __init__(self, path: str, line: int, reason: str, *args: object) -> None:
        super().__init__(f"{path}:{line}: {reason}", *args)
        self.path = path
        self.line = line
        self.reason = reason


def parse_scores(text: str, source: str = "<string>") -> dict[str, float]:
    """
    Parse `track_id<TAB>score` lines; a later line for the same id wins.

    Raises:
        ScoreFileError: On a malformed line.
    """
    scores: dict[str, float] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.rstrip("\r").split("\t")
        if len(fields) != 2:
            raise ScoreFileError(source, number, f"expected 2 tab-separated fields, got {len(fields)}")
        try:
            value = float(fields[1])
        except ValueError:
            raise ScoreFileError(source, number, f"{fields[1]!r} is not a number")
        if math.isnan(value):
            raise ScoreFileError(source, number, "score is NaN")
        scores[fields[0].strip()] = value
    return scores


def read_scores(path: Path) -> dict[str, float]:
    return parse_scores(path.read_text(encoding="utf-8"), str(path))


def score_filter(
    records: Sequence[TrackRecord],
    scores: Mapping[str, float],
    fraction: float = DEFAULT_FLAG_FRACTION,
    discard_flagged: bool = False,
) -> list[TrackRecord]:
    """
    Flag the lowest-scoring fraction of kept tracks.

    k = floor(fraction * n + 0.5) of the n scored kept tracks are selected by ascending score;
    every track tied with the k-th lowest score is flagged too. Scores of unknown track ids are
    reported and skipped. Kept tracks without a score are never flagged.

    Args:
        records (Sequence[TrackRecord]): Manifest records.
        scores (Mapping[str, float]): External quality score per track id, lower is worse.
        fraction (float): Share of scored kept tracks to flag, in [0, 1].
        discard_flagged (bool): Discard flagged tracks (reason label-screen) instead of only
            flagging them.

    Returns:
        list[TrackRecord]: The records in input order with flags and scores updated.
    """
    if not 0 <= fraction <= 1:
        raise ValueError(f"fraction must lie in [0, 1], got {fraction}")

    known = {record.id for record in records}
    unknown = sorted(track_id for track_id in scores if track_id not in known)
    for track_id in unknown:
        logger.warning(f"Unknown track id {track_id!r} in scores, skipping it")

    ranked = sorted(scores[r.id] for r in records if r.kept and r.id in scores)
    k = math.floor(fraction * len(ranked) + 0.5)
    cutoff = ranked[k - 1] if k > 0 else None

    updated = []
    n_flagged = 0
    for record in records:
        if not record.kept or record.id not in scores:
            updated.append(record)
            continue

        score = scores[record.id]
        flagged = cutoff is not None and score <= cutoff
        record = TrackRecord.convert_from(record, score=score, flagged=flagged)
        if flagged:
            n_flagged += 1
            if discard_flagged:
                record = record.discard(DiscardReason.LABEL_SCREEN, f"score {score:g} in the lowest {fraction:.0%}")
        updated.append(record)

    logger.info(f"Flagged {n_flagged} of {len(ranked)} scored tracks")
    return updated


__all__ = [
    "DEFAULT_FLAG_FRACTION",
    "ScoreFileError",
    "parse_scores",
    "read_scores",
    "score_filter",
]
