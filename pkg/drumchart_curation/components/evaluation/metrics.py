"""
Onset matching and F-measure with per-class and pooled ("SUM") counting.

Counts are added up across tracks before any rate is computed. Across cross-validation folds the
rates of each fold are averaged instead.
"""

from typing import Iterable, Sequence

from pydantic import Field

from drumchart_curation.components.vocabulary.classes import DrumClass
from drumchart_curation.core.data.dto import ValueDTO

DEFAULT_WINDOW = 0.050
DEFAULT_EMPTY_SCORE = 1.0

_TIME_EPSILON = 1e-12


class Counts(ValueDTO):
    tp: int = Field(0, ge=0)
    fp: int = Field(0, ge=0)
    fn: int = Field(0, ge=0)

    def __add__(self, other: "Counts") -> "Counts":
        return Counts(tp=self.tp + other.tp, fp=self.fp + other.fp, fn=self.fn + other.fn)

    @property
    def is_empty(self) -> bool:
        return self.tp == self.fp == self.fn == 0


class EvalCounts(ValueDTO):
    per_class: dict[DrumClass, Counts] = Field(default_factory=lambda: {drum_class: Counts() for drum_class in DrumClass})

    def __add__(self, other: "EvalCounts") -> "EvalCounts":
        return EvalCounts(per_class={c: self.get(c) + other.get(c) for c in DrumClass})

    def get(self, drum_class: DrumClass) -> Counts:
        return self.per_class.get(drum_class, Counts())

    @property
    def total(self) -> Counts:
        return sum((self.get(c) for c in DrumClass), Counts())


class Score(ValueDTO):
    precision: float = Field(ge=0, le=1)
    recall: float = Field(ge=0, le=1)
    f_measure: float = Field(ge=0, le=1)


class EvalReport(ValueDTO):
    per_class: dict[DrumClass, Score]
    sum: Score

    @property
    def sum_f(self) -> float:
        return self.sum.f_measure


def match_onsets(reference: Sequence[float], estimated: Sequence[float], window: float = DEFAULT_WINDOW) -> tuple[int, int, int]:
    """
    Count hits between two onset lists.

    Each reference onset takes the earliest unused estimate within [r - window, r + window]. On
    sorted one-dimensional data with a common window this greedy pairing has maximum cardinality.

    Args:
        reference (Sequence[float]): Reference onset times in seconds.
        estimated (Sequence[float]): Estimated onset times in seconds.
        window (float): Tolerance in seconds; a gap of exactly window is a hit.

    Returns:
        tuple[int, int, int]: (tp, fp, fn).
    """
    reference = sorted(reference)
    estimated = sorted(estimated)

    tp = 0
    j = 0
    for r in reference:
        while j < len(estimated) and estimated[j] < r - window - _TIME_EPSILON:
            j += 1
        if j < len(estimated) and estimated[j] <= r + window + _TIME_EPSILON:
            tp += 1
            j += 1

    return tp, len(estimated) - tp, len(reference) - tp


def score(counts: Counts, empty_score: float = DEFAULT_EMPTY_SCORE) -> Score:
    """
    Precision, recall and F-measure of one set of counts.

    A class without any reference or estimated event scores empty_score throughout. Otherwise an
    undefined precision or recall (no estimates, or no references) is 0.
    """
    if counts.is_empty:
        return Score(precision=empty_score, recall=empty_score, f_measure=empty_score)

    precision = counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else 0.0
    recall = counts.tp / (counts.tp + counts.fn) if counts.tp + counts.fn else 0.0
    f = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return Score(precision=precision, recall=recall, f_measure=f)


def f_measure(counts: EvalCounts, empty_score: float = DEFAULT_EMPTY_SCORE) -> EvalReport:
    """
    Per-class scores plus the SUM score computed from counts pooled over all classes.
    """
    return EvalReport(
        per_class={c: score(counts.get(c), empty_score) for c in DrumClass},
        sum=score(counts.total, empty_score),
    )


def _mean(scores: list[Score]) -> Score:
    n = len(scores)
    return Score(
        precision=sum(s.precision for s in scores) / n,
        recall=sum(s.recall for s in scores) / n,
        f_measure=sum(s.f_measure for s in scores) / n,
    )


def aggregate_folds(folds: Sequence[EvalCounts], empty_score: float = DEFAULT_EMPTY_SCORE) -> EvalReport:
    """
    Average the per-fold scores.

    Args:
        folds (Sequence[EvalCounts]): Counts pooled within each fold.
        empty_score (float): Score of a class without events, see score.

    Returns:
        EvalReport: Arithmetic mean of the fold reports, per class and for SUM.
    """
    if not folds:
        raise ValueError("at least one fold is required")

    reports = [f_measure(counts, empty_score) for counts in folds]
    return EvalReport(
        per_class={c: _mean([r.per_class[c] for r in reports]) for c in DrumClass},
        sum=_mean([r.sum for r in reports]),
    )


def evaluate_track(
    reference: Iterable[tuple[float, DrumClass]],
    estimated: Iterable[tuple[float, DrumClass]],
    window: float = DEFAULT_WINDOW,
) -> EvalCounts:
    """
    Match onsets class by class.
    """
    by_class_ref: dict[DrumClass, list[float]] = {c: [] for c in DrumClass}
    by_class_est: dict[DrumClass, list[float]] = {c: [] for c in DrumClass}
    for t, drum_class in reference:
        by_class_ref[drum_class].append(t)
    for t, drum_class in estimated:
        by_class_est[drum_class].append(t)

    per_class = {}
    for drum_class in DrumClass:
        tp, fp, fn = match_onsets(by_class_ref[drum_class], by_class_est[drum_class], window)
        per_class[drum_class] = Counts(tp=tp, fp=fp, fn=fn)
    return EvalCounts(per_class=per_class)


__all__ = [
    "DEFAULT_WINDOW",
    "DEFAULT_EMPTY_SCORE",
    "Counts",
    "EvalCounts",
    "Score",
    "EvalReport",
    "match_onsets",
    "score",
    "f_measure",
    "aggregate_folds",
    "evaluate_track",
]
