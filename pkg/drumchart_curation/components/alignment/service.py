import numpy as np

from drumchart_curation.components.vocabulary.resolution import LabeledOnset, sort_onsets
from drumchart_curation.core.data.dto import ValueDTO
from drumchart_curation.core.layers.service import BaseService

from .matching import AlignmentReport, BeatSeq, DeviationProfile, Verdict, correct_times, match_beats, sanity_check
from .settings import AlignmentSettings


class AlignmentResult(ValueDTO):
    report: AlignmentReport
    profile: DeviationProfile
    beats: BeatSeq | None = None
    onsets: tuple[LabeledOnset, ...] = ()

    @property
    def kept(self) -> bool:
        return self.report.verdict == Verdict.KEEP


class AlignmentService(BaseService[AlignmentSettings]):
    """
    Snaps a track's annotated beats onto estimated beats and carries the correction to its onsets.
    """

    def align(self, annotated: BeatSeq, estimated: BeatSeq, onsets: list[LabeledOnset]) -> AlignmentResult:
        """
        Match beats, check the result and, when the track is kept, correct beats and onsets.

        Beats are snapped within the snap radius, so a displacement beyond MAX_CORRECTION is still
        seen and rejected by name. The majority rule counts matches within the majority window.
        Onsets corrected to before zero are dropped and counted in the report.

        Args:
            annotated (BeatSeq): Beats of the chart.
            estimated (BeatSeq): Beats estimated from the audio.
            onsets (list[LabeledOnset]): Resolved onsets of the chart.

        Returns:
            AlignmentResult: The report, and on keep the corrected beats and onsets.
        """
        profile = match_beats(annotated, estimated, self.settings.snap_radius)
        majority_profile = match_beats(annotated, estimated, self.settings.majority_window)

        report = sanity_check(
            profile,
            self.settings.MIN_MATCHED_FRACTION,
            self.settings.MAX_CORRECTION,
            majority_profile,
        )
        if report.verdict == Verdict.DISCARD:
            self.logger.info(f"Alignment rejected: {report.reason}")
            return AlignmentResult(report=report, profile=profile)

        beat_times = correct_times(annotated.times, profile)
        beat_times = np.unique(beat_times[beat_times >= 0])
        onset_times = correct_times([onset.time for onset in onsets], profile)
        corrected = sort_onsets(
            (LabeledOnset.convert_from(onset, time=float(t)) for onset, t in zip(onsets, onset_times) if t >= 0),
            deduplicate=False,
        )

        n_dropped = len(onsets) - len(corrected)
        if n_dropped:
            self.logger.warning(f"Dropped {n_dropped} onsets corrected to before the start of the audio")
            report = AlignmentReport.convert_from(report, n_dropped_onsets=n_dropped)

        self.logger.debug(
            f"Matched {report.n_matched}/{report.n_annotated} beats, largest correction "
            f"{report.max_abs_deviation * 1000:.1f} ms",
        )
        return AlignmentResult(
            report=report,
            profile=profile,
            beats=BeatSeq(times=tuple(float(t) for t in beat_times)),
            onsets=tuple(corrected),
        )


__all__ = [
    "AlignmentResult",
    "AlignmentService",
]
