from pathlib import Path
from typing import Mapping

from drumchart_curation.components.vocabulary.classes import DrumClass
from drumchart_curation.core.layers.service import BaseService

from .annotations import read_annotations
from .metrics import EvalCounts, EvalReport, aggregate_folds, evaluate_track, f_measure
from .peaks import Activation, peak_pick
from .settings import EvaluationSettings

ANNOTATION_SUFFIX = ".tsv"


class EvaluationService(BaseService[EvaluationSettings]):
    """
    Scores estimated annotation files against reference files of the same name.
    """

    def pick_peaks(self, activation: Activation) -> list[tuple[float, DrumClass]]:
        peaks = peak_pick(
            activation,
            self.settings.THRESHOLD,
            self.settings.PRE_MAX,
            self.settings.POST_MAX,
            self.settings.AVG_WINDOW,
            self.settings.MIN_DISTANCE,
        )
        return [(t, drum_class) for drum_class, times in peaks.items() for t in times]

    def count_directory(self, reference_dir: Path, estimated_dir: Path) -> dict[str, EvalCounts]:
        """
        Count hits for every reference file. A missing estimate counts as an empty one.
        """
        counts: dict[str, EvalCounts] = {}
        for reference_path in sorted(reference_dir.glob(f"*{ANNOTATION_SUFFIX}")):
            track_id = reference_path.stem
            estimated_path = estimated_dir / reference_path.name
            if estimated_path.is_file():
                estimated = read_annotations(estimated_path)
            else:
                self.logger.warning(f"No estimate for {track_id}, counting it as empty")
                estimated = []
            counts[track_id] = evaluate_track(read_annotations(reference_path), estimated, self.settings.WINDOW)

        orphans = sorted(p.stem for p in estimated_dir.glob(f"*{ANNOTATION_SUFFIX}") if p.stem not in counts)
        if orphans:
            self.logger.warning(f"Ignoring {len(orphans)} estimates without reference: {orphans}")
        return counts

    def evaluate(
        self,
        track_counts: Mapping[str, EvalCounts],
        folds: Mapping[str, int] | None = None,
    ) -> tuple[EvalReport, EvalCounts]:
        """
        Pool counts over all tracks, or average fold scores when a fold assignment is given.

        Args:
            track_counts (Mapping[str, EvalCounts]): Counts per track id.
            folds (Mapping[str, int] | None): Fold of each track id.

        Returns:
            tuple[EvalReport, EvalCounts]: The report and the counts pooled over all scored tracks.
        """
        if folds is None:
            pooled = sum(track_counts.values(), EvalCounts())
            return f_measure(pooled, self.settings.EMPTY_SCORE), pooled

        by_fold: dict[int, EvalCounts] = {}
        for track_id, counts in track_counts.items():
            if track_id not in folds:
                self.logger.warning(f"Track {track_id} has no fold, leaving it out")
                continue
            by_fold[folds[track_id]] = by_fold.get(folds[track_id], EvalCounts()) + counts

        if not by_fold:
            raise ValueError("no evaluated track belongs to a fold")
        ordered = [by_fold[fold] for fold in sorted(by_fold)]
        return aggregate_folds(ordered, self.settings.EMPTY_SCORE), sum(ordered, EvalCounts())


__all__ = [
    "ANNOTATION_SUFFIX",
    "EvaluationService",
]
