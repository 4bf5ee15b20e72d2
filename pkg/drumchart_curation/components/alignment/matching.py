"""
Beat snapping and deviation interpolation.

Annotated beats are paired with estimated beats by an order-preserving alignment over the two
sorted sequences. The deviation (estimated - annotated) at every paired beat is then linearly
interpolated to correct everything annotated in between.
"""

from enum import StrEnum
from typing import Iterable, Sequence, TypeVar

import numpy as np
from pydantic import Field, field_validator, model_validator
from structlog import get_logger

from drumchart_curation.core.data.dto import ValueDTO

from .errors import InsufficientAnchorsError

logger = get_logger(__name__)

DEFAULT_MATCH_WINDOW = 0.05
DEFAULT_MIN_MATCHED_FRACTION = 0.5
DEFAULT_MAX_CORRECTION = 0.080

# Closed tolerance windows: a gap of exactly the window matches.
_TIME_EPSILON = 1e-12

REASON_TOO_FEW_ANCHORS = "fewer than two matched beats"
REASON_MAJORITY = "majority check failed"
REASON_MAX_CORRECTION = "max correction exceeded"

LabelT = TypeVar("LabelT")


class BeatSeq(ValueDTO):
    times: tuple[float, ...] = ()

    @field_validator("times")
    @classmethod
    def _strictly_increasing(cls, times: tuple[float, ...]) -> tuple[float, ...]:
        if any(t < 0 for t in times):
            raise ValueError("beat times must be non-negative")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("beat times must be strictly increasing")
        return times

    def __len__(self) -> int:
        return len(self.times)


class Anchor(ValueDTO):
    annotated_time: float
    estimated_time: float | None = None
    deviation: float | None = None
    matched: bool = False

    @model_validator(mode="after")
    def _deviation_iff_matched(self) -> "Anchor":
        if self.matched != (self.deviation is not None):
            raise ValueError("deviation is set exactly when the anchor is matched")
        return self


class DeviationProfile(ValueDTO):
    anchors: tuple[Anchor, ...] = ()

    @field_validator("anchors")
    @classmethod
    def _increasing(cls, anchors: tuple[Anchor, ...]) -> tuple[Anchor, ...]:
        if any(b.annotated_time <= a.annotated_time for a, b in zip(anchors, anchors[1:])):
            raise ValueError("anchor times must be strictly increasing")
        return anchors

    @property
    def matched_anchors(self) -> list[Anchor]:
        return [anchor for anchor in self.anchors if anchor.matched]

    @property
    def n_matched(self) -> int:
        return sum(1 for anchor in self.anchors if anchor.matched)

    @property
    def matched_fraction(self) -> float:
        return self.n_matched / len(self.anchors) if self.anchors else 0.0

    @property
    def max_abs_deviation(self) -> float:
        return max((abs(anchor.deviation) for anchor in self.anchors if anchor.deviation is not None), default=0.0)


class Verdict(StrEnum):
    KEEP = "keep"
    DISCARD = "discard"


class AlignmentReport(ValueDTO):
    matched_fraction: float = Field(ge=0, le=1)
    max_abs_deviation: float = Field(ge=0)
    n_annotated: int = Field(0, ge=0)
    n_matched: int = Field(0, ge=0)
    n_dropped_onsets: int = Field(0, ge=0, description="Onsets corrected to before the start of the audio")
    verdict: Verdict
    reason: str = ""

    @model_validator(mode="after")
    def _reason_on_discard(self) -> "AlignmentReport":
        if (self.verdict == Verdict.DISCARD) != bool(self.reason):
            raise ValueError("a discard verdict needs a reason and a keep verdict must not have one")
        return self


class _PrefixMax:
    """
    Fenwick tree over estimated-beat columns answering the best (score, cell) in columns [0, j).
    """

    def __init__(self, size: int) -> None:
        self._scores = [0.0] * (size + 1)
        self._cells = [-1] * (size + 1)

    def query(self, j: int) -> tuple[float, int]:
        best, cell = 0.0, -1
        while j > 0:
            if self._scores[j] > best:
                best, cell = self._scores[j], self._cells[j]
            j -= j & -j
        return best, cell

    def update(self, j: int, score: float, cell: int) -> None:
        j += 1
        while j < len(self._scores):
            if score > self._scores[j]:
                self._scores[j], self._cells[j] = score, cell
            j += j & -j


def _match_pairs(annotated: np.ndarray, estimated: np.ndarray, window: float) -> list[tuple[int, int]]:
    """
    Needleman-Wunsch style alignment without crossings. Each pair within the window is worth
    `bonus - |gap|`, with bonus larger than any possible total gap, so the pair count is maximized
    first and the summed absolute deviation second.

    Only the estimated beats inside the window of an annotated beat are ever visited, so the cost
    grows with the number of candidate pairs rather than with n * m.
    """
    n, m = len(annotated), len(estimated)
    bonus = min(n, m) * window + 1.0
    reach = window + 2 * _TIME_EPSILON
    lo = np.searchsorted(estimated, annotated - reach, side="left").tolist()
    hi = np.searchsorted(estimated, annotated + reach, side="right").tolist()
    a, e = annotated.tolist(), estimated.tolist()

    best = _PrefixMax(m)
    cells: list[tuple[int, int]] = []
    parents: list[int] = []
    top_score, top_cell = 0.0, -1
    for i in range(n):
        row = []
        for j in range(lo[i], hi[i]):
            gap = abs(e[j] - a[i])
            if gap > window + _TIME_EPSILON:
                continue
            previous, parent = best.query(j)
            score = previous + bonus - gap
            cells.append((i, j))
            parents.append(parent)
            row.append((j, score, len(cells) - 1))
            if score > top_score:
                top_score, top_cell = score, len(cells) - 1
        # a row only sees earlier rows, so its cells go in after all of them are scored
        for j, score, cell in row:
            best.update(j, score, cell)

    pairs: list[tuple[int, int]] = []
    cell = top_cell
    while cell >= 0:
        pairs.append(cells[cell])
        cell = parents[cell]
    pairs.reverse()
    return pairs


def match_beats(annotated: BeatSeq, estimated: BeatSeq, match_window: float = DEFAULT_MATCH_WINDOW) -> DeviationProfile:
    """
    Snap annotated beats onto estimated beats.

    The assignment never crosses (beat order is preserved), uses every estimated beat at most once
    and maximizes the number of pairs closer than match_window. Among assignments with that many
    pairs the one with the smallest total absolute deviation is chosen.

    Args:
        annotated (BeatSeq): Beats of the chart.
        estimated (BeatSeq): Beats estimated from the audio.
        match_window (float): Largest snapping distance in seconds (inclusive).

    Returns:
        DeviationProfile: One anchor per annotated beat.
    """
    if match_window <= 0:
        raise ValueError(f"match_window must be positive, got {match_window}")

    a = np.asarray(annotated.times, dtype=np.float64)
    e = np.asarray(estimated.times, dtype=np.float64)
    paired = dict(_match_pairs(a, e, match_window)) if len(a) and len(e) else {}

    anchors = []
    for index, time in enumerate(annotated.times):
        if index in paired:
            estimate = estimated.times[paired[index]]
            anchors.append(Anchor(annotated_time=time, estimated_time=estimate, deviation=estimate - time, matched=True))
        else:
            anchors.append(Anchor(annotated_time=time))

    return DeviationProfile(anchors=tuple(anchors))


def _anchor_arrays(profile: DeviationProfile) -> tuple[np.ndarray, np.ndarray]:
    matched = profile.matched_anchors
    if len(matched) < 2:
        raise InsufficientAnchorsError(len(matched))
    times = np.array([anchor.annotated_time for anchor in matched])
    deviations = np.array([anchor.deviation for anchor in matched])
    return times, deviations


def interpolate_deviation(profile: DeviationProfile, t: float) -> float:
    """
    Deviation at time t: linear between consecutive matched anchors, constant beyond the first
    and last one.

    Raises:
        InsufficientAnchorsError: If fewer than two anchors are matched.
    """
    times, deviations = _anchor_arrays(profile)
    return float(np.interp(t, times, deviations))


def correct_times(times: Sequence[float] | np.ndarray, profile: DeviationProfile) -> np.ndarray:
    """
    Vectorized correction: t + deviation(t), in input order. Early times may come out negative.
    """
    anchor_times, deviations = _anchor_arrays(profile)
    values = np.asarray(times, dtype=np.float64)
    return values + np.interp(values, anchor_times, deviations)


def correct_onsets(
    onsets: Iterable[tuple[float, LabelT]],
    profile: DeviationProfile,
) -> list[tuple[float, LabelT]]:
    """
    Shift every onset by the interpolated deviation at its time.

    Labels and event count are untouched, negative results included. The result is stably
    re-sorted by time.

    Args:
        onsets (Iterable[tuple[float, LabelT]]): (seconds, label) pairs.
        profile (DeviationProfile): Profile with at least two matched anchors.

    Returns:
        list[tuple[float, LabelT]]: Corrected onsets sorted by time.

    Raises:
        InsufficientAnchorsError: If fewer than two anchors are matched.
    """
    onsets = list(onsets)
    corrected = correct_times([t for t, _ in onsets], profile)
    shifted = [(float(t), label) for t, (_, label) in zip(corrected, onsets)]
    return sorted(shifted, key=lambda onset: onset[0])


def sanity_check(
    profile: DeviationProfile,
    min_matched_fraction: float = DEFAULT_MIN_MATCHED_FRACTION,
    max_correction: float = DEFAULT_MAX_CORRECTION,
    majority_profile: DeviationProfile | None = None,
) -> AlignmentReport:
    """
    Decide whether a track's timing can be trusted after correction.

    A track is discarded when fewer than two beats were matched, when less than
    min_matched_fraction of the annotated beats found an estimate, or when any correction
    exceeds max_correction.

    Args:
        profile (DeviationProfile): Result of match_beats.
        min_matched_fraction (float): Share of annotated beats that must be matched.
        max_correction (float): Largest allowed |deviation| in seconds.
        majority_profile (DeviationProfile | None): Matching computed with a separate majority
            tolerance. When given, the matched fraction is read from it.

    Returns:
        AlignmentReport: The verdict, naming every failed rule.
    """
    matched_fraction = (majority_profile or profile).matched_fraction
    max_abs_deviation = profile.max_abs_deviation

    failures = []
    if profile.n_matched < 2:
        failures.append(REASON_TOO_FEW_ANCHORS)
    if matched_fraction < min_matched_fraction:
        failures.append(REASON_MAJORITY)
    if max_abs_deviation > max_correction + _TIME_EPSILON:
        failures.append(REASON_MAX_CORRECTION)

    return AlignmentReport(
        matched_fraction=matched_fraction,
        max_abs_deviation=max_abs_deviation,
        n_annotated=len(profile.anchors),
        n_matched=profile.n_matched,
        verdict=Verdict.DISCARD if failures else Verdict.KEEP,
        reason="; ".join(failures),
    )


__all__ = [
    "DEFAULT_MATCH_WINDOW",
    "DEFAULT_MIN_MATCHED_FRACTION",
    "DEFAULT_MAX_CORRECTION",
    "REASON_TOO_FEW_ANCHORS",
    "REASON_MAJORITY",
    "REASON_MAX_CORRECTION",
    "BeatSeq",
    "Anchor",
    "DeviationProfile",
    "Verdict",
    "AlignmentReport",
    "match_beats",
    "interpolate_deviation",
    "correct_times",
    "correct_onsets",
    "sanity_check",
]
