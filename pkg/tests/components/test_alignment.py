import itertools
import random
import tracemalloc

import numpy as np
import pytest
from pydantic import ValidationError

from drumchart_curation.components.alignment.beats import (
    FileBeatEstimator,
    SpectralFluxBeatEstimator,
    estimate_beats,
    format_beats,
    parse_beats,
)
from drumchart_curation.components.alignment.errors import (
    BadBeatsFileError,
    InsufficientAnchorsError,
    NoBeatsFoundError,
)
from drumchart_curation.components.alignment.matching import (
    REASON_MAJORITY,
    REASON_MAX_CORRECTION,
    REASON_TOO_FEW_ANCHORS,
    Anchor,
    BeatSeq,
    DeviationProfile,
    Verdict,
    correct_onsets,
    interpolate_deviation,
    match_beats,
    sanity_check,
)
from drumchart_curation.components.alignment.service import AlignmentService
from drumchart_curation.components.alignment.settings import AlignmentSettings
from drumchart_curation.components.features.audio import AudioBuffer
from drumchart_curation.components.features.spectrogram import spectral_flux
from drumchart_curation.components.vocabulary.classes import DrumClass
from drumchart_curation.components.vocabulary.resolution import LabeledOnset, Provenance
from tests.fixtures.charts import click_track


def profile_of(*anchors: tuple[float, float]) -> DeviationProfile:
    return DeviationProfile(
        anchors=tuple(
            Anchor(annotated_time=t, estimated_time=t + d, deviation=d, matched=True) for t, d in anchors
        )
    )


def deviations(profile: DeviationProfile) -> list[float | None]:
    return [anchor.deviation for anchor in profile.anchors]


def test_match_beats_nearest_pairing():
    profile = match_beats(BeatSeq(times=(1.0, 2.0, 3.0)), BeatSeq(times=(1.01, 2.02, 2.98)), 0.05)

    assert deviations(profile) == pytest.approx([0.01, 0.02, -0.02])
    assert profile.matched_fraction == 1.0


def test_match_beats_identity():
    beats = BeatSeq(times=(0.5, 1.0, 1.5, 2.0))
    profile = match_beats(beats, beats)
    assert deviations(profile) == [0.0, 0.0, 0.0, 0.0]


def test_match_beats_out_of_window():
    profile = match_beats(BeatSeq(times=(1.0, 2.0)), BeatSeq(times=(1.5,)), 0.05)
    assert profile.n_matched == 0
    assert all(not anchor.matched and anchor.deviation is None for anchor in profile.anchors)


def test_match_beats_window_is_inclusive():
    profile = match_beats(BeatSeq(times=(1.0,)), BeatSeq(times=(1.05,)), 0.05)
    assert profile.n_matched == 1


def test_match_beats_empty_estimate():
    profile = match_beats(BeatSeq(times=(1.0, 2.0)), BeatSeq())
    assert profile.n_matched == 0
    assert profile.matched_fraction == 0.0


def test_match_beats_rejects_non_positive_window():
    with pytest.raises(ValueError):
        match_beats(BeatSeq(times=(1.0,)), BeatSeq(times=(1.0,)), 0.0)


def test_beat_seq_must_increase():
    with pytest.raises(ValidationError):
        BeatSeq(times=(1.0, 1.0))
    with pytest.raises(ValidationError):
        BeatSeq(times=(-0.5, 1.0))


def _brute_force(annotated: list[float], estimated: list[float], window: float) -> tuple[int, float]:
    gap = [[abs(e - a) for e in estimated] for a in annotated]
    best = (0, 0.0)
    for k in range(1, min(len(annotated), len(estimated)) + 1):
        for a_idx in itertools.combinations(range(len(annotated)), k):
            for e_idx in itertools.combinations(range(len(estimated)), k):
                gaps = [gap[i][j] for i, j in zip(a_idx, e_idx)]
                if max(gaps) > window + 1e-12:
                    continue
                total = sum(gaps)
                if k > best[0] or (k == best[0] and total < best[1]):
                    best = (k, total)
    return best


def test_match_beats_against_exhaustive_search():
    rng = random.Random(7)
    window = 0.3
    for _ in range(1000):
        annotated = sorted(set(round(rng.uniform(0, 3), 3) for _ in range(rng.randint(0, 8))))
        estimated = sorted(set(round(rng.uniform(0, 3), 3) for _ in range(rng.randint(0, 8))))

        profile = match_beats(BeatSeq(times=tuple(annotated)), BeatSeq(times=tuple(estimated)), window)
        matched = profile.matched_anchors
        pairs = [(a.annotated_time, a.estimated_time) for a in matched]

        used = [e for _, e in pairs]
        assert len(set(used)) == len(used)
        assert used == sorted(used), "matching must preserve beat order"
        assert all(abs(e - a) <= window + 1e-12 for a, e in pairs)

        expected_count, expected_total = _brute_force(annotated, estimated, window)
        assert len(matched) == expected_count
        assert sum(abs(a.deviation) for a in matched) == pytest.approx(expected_total, abs=1e-9)


def test_match_beats_long_track_stays_banded():
    rng = np.random.default_rng(3)
    annotated = 1.0 + np.arange(10000) * 0.5
    estimated = annotated + rng.uniform(-0.03, 0.03, annotated.size)

    tracemalloc.start()
    try:
        profile = match_beats(BeatSeq(times=tuple(annotated)), BeatSeq(times=tuple(estimated)), 0.05)
        _, peak = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()

    assert profile.n_matched == annotated.size
    assert deviations(profile) == pytest.approx(list(estimated - annotated))
    assert peak < 256 * 2**20


def test_interpolate_between_anchors():
    profile = profile_of((1.0, 0.02), (2.0, 0.04))
    assert interpolate_deviation(profile, 1.5) == pytest.approx(0.03)


def test_interpolate_constant_deviation():
    profile = profile_of((1.0, 0.05), (2.0, 0.05))
    assert interpolate_deviation(profile, 1.37) == pytest.approx(0.05)


def test_interpolate_holds_boundary_values():
    profile = profile_of((1.0, 0.02), (2.0, 0.04))
    assert interpolate_deviation(profile, 0.5) == pytest.approx(0.02)
    assert interpolate_deviation(profile, 7.0) == pytest.approx(0.04)


def test_interpolate_skips_unmatched_anchors():
    profile = DeviationProfile(
        anchors=(
            Anchor(annotated_time=1.0, estimated_time=1.02, deviation=0.02, matched=True),
            Anchor(annotated_time=1.5),
            Anchor(annotated_time=2.0, estimated_time=2.04, deviation=0.04, matched=True),
        )
    )
    assert interpolate_deviation(profile, 1.5) == pytest.approx(0.03)


def test_interpolate_needs_two_anchors():
    with pytest.raises(InsufficientAnchorsError) as e:
        interpolate_deviation(profile_of((1.0, 0.02)), 1.0)
    assert e.value.n_matched == 1


def test_anchor_deviation_set_exactly_when_matched():
    with pytest.raises(ValidationError):
        Anchor(annotated_time=1.0, deviation=0.01)


def test_correct_onsets_shifts_by_interpolated_deviation():
    profile = profile_of((1.0, 0.02), (2.0, 0.04))
    [(time, label)] = correct_onsets([(1.5, DrumClass.SD)], profile)
    assert time == pytest.approx(1.53)
    assert label == DrumClass.SD


def test_correct_onsets_zero_profile_is_identity():
    onsets = [(0.3, DrumClass.BD), (1.2, DrumClass.HH), (4.0, DrumClass.SD)]
    assert correct_onsets(onsets, profile_of((1.0, 0.0), (2.0, 0.0))) == onsets


def test_correct_onsets_on_anchor_uses_its_deviation():
    profile = profile_of((1.0, 0.02), (2.0, 0.04))
    [(time, _)] = correct_onsets([(2.0, DrumClass.TT)], profile)
    assert time == pytest.approx(2.04)


def test_correct_onsets_keeps_count_and_order():
    profile = profile_of((1.0, 0.03), (2.0, -0.03))
    onsets = [(t / 10, DrumClass.BD) for t in range(40)]
    corrected = correct_onsets(onsets, profile)
    assert len(corrected) == len(onsets)
    assert [t for t, _ in corrected] == sorted(t for t, _ in corrected)


def test_correct_onsets_keeps_onsets_moved_before_zero():
    profile = profile_of((0.5, -0.04), (1.0, -0.04))
    corrected = correct_onsets([(0.0, "BD"), (0.02, "BD")], profile)
    assert [t for t, _ in corrected] == pytest.approx([-0.04, -0.02])
    assert [label for _, label in corrected] == ["BD", "BD"]


def test_sanity_check_keeps_perfect_alignment():
    report = sanity_check(profile_of((1.0, 0.0), (2.0, 0.0), (3.0, 0.0)))
    assert report.verdict == Verdict.KEEP
    assert report.reason == ""


def test_sanity_check_max_correction():
    report = sanity_check(profile_of((1.0, 0.0), (2.0, 0.1), (3.0, 0.0)))
    assert report.verdict == Verdict.DISCARD
    assert report.reason == REASON_MAX_CORRECTION
    assert report.max_abs_deviation == pytest.approx(0.1)


def test_sanity_check_majority():
    matched = [Anchor(annotated_time=t, estimated_time=t, deviation=0.0, matched=True) for t in (1.0, 2.0)]
    unmatched = [Anchor(annotated_time=t) for t in (3.0, 4.0, 5.0)]
    report = sanity_check(DeviationProfile(anchors=tuple(matched + unmatched)))
    assert report.matched_fraction == pytest.approx(0.4)
    assert report.verdict == Verdict.DISCARD
    assert report.reason == REASON_MAJORITY


def test_sanity_check_names_every_failed_rule():
    report = sanity_check(DeviationProfile(anchors=(Anchor(annotated_time=1.0), Anchor(annotated_time=2.0))))
    assert report.reason == f"{REASON_TOO_FEW_ANCHORS}; {REASON_MAJORITY}"


def test_sanity_check_uses_majority_profile():
    tight = match_beats(BeatSeq(times=(1.0, 2.0, 3.0)), BeatSeq(times=(1.0, 2.0, 3.03)), 0.05)
    strict = match_beats(BeatSeq(times=(1.0, 2.0, 3.0)), BeatSeq(times=(1.0, 2.0, 3.03)), 0.01)
    report = sanity_check(tight, min_matched_fraction=0.9, majority_profile=strict)
    assert report.matched_fraction == pytest.approx(2 / 3)
    assert report.reason == REASON_MAJORITY


def test_parse_beats():
    assert parse_beats("0.5\n1.0\n1.5\n").times == (0.5, 1.0, 1.5)


def test_parse_beats_ignores_extra_columns_and_blank_lines():
    assert parse_beats("0.5\t1\n\n1.0\t2\n").times == (0.5, 1.0)


@pytest.mark.parametrize(
    "text",
    [
        "1.0\n0.5\n",
        "0.5\n0.5\n",
        "0.5\nbeat\n",
        "-1.0\n",
    ],
)
def test_parse_beats_rejects_bad_values(text):
    with pytest.raises(BadBeatsFileError) as e:
        parse_beats(text, "beats.txt")
    assert e.value.path == "beats.txt"


def test_parse_beats_unsorted_reports_line():
    with pytest.raises(BadBeatsFileError) as e:
        parse_beats("0.5\n1.5\n1.0\n")
    assert e.value.line == 3


def test_parse_beats_empty():
    with pytest.raises(NoBeatsFoundError):
        parse_beats("\n\n")


def test_format_beats():
    assert format_beats(BeatSeq(times=(0.5, 1.25))) == "0.500000\n1.250000\n"


def test_file_estimator(tmp_path):
    path = tmp_path / "song.txt"
    path.write_text("0.5\n1.0\n1.5\n")
    assert FileBeatEstimator().estimate(path).times == (0.5, 1.0, 1.5)
    assert estimate_beats(path).times == (0.5, 1.0, 1.5)


def test_baseline_tracks_click_track():
    audio, clicks = click_track(bpm=120, duration=20.0)
    beats = estimate_beats(AudioBuffer(samples=audio, sample_rate=44100))

    estimated = np.asarray(beats.times)
    hits = sum(1 for t in clicks if np.min(np.abs(estimated - t)) <= 0.020)
    assert hits >= 0.9 * len(clicks)


def test_baseline_rejects_silence():
    with pytest.raises(NoBeatsFoundError):
        SpectralFluxBeatEstimator().estimate(AudioBuffer(samples=np.zeros(44100), sample_rate=44100))


def test_baseline_tempo_estimate():
    audio, _ = click_track(bpm=120, duration=20.0)
    estimator = SpectralFluxBeatEstimator()
    features = estimator.onset_envelope(AudioBuffer(samples=audio, sample_rate=44100))
    bpm = estimator.estimate_tempo(spectral_flux(features), 44100)
    assert bpm == pytest.approx(120, rel=0.05)


def test_baseline_tempo_respects_max_bpm():
    audio, _ = click_track(bpm=120, duration=20.0)
    estimator = SpectralFluxBeatEstimator(AlignmentSettings(BASELINE_MAX_BPM=100))
    features = estimator.onset_envelope(AudioBuffer(samples=audio, sample_rate=44100))
    assert estimator.estimate_tempo(spectral_flux(features), 44100) <= 100


def onsets_at(*times: float) -> list[LabeledOnset]:
    return [LabeledOnset(time=t, drum_class=DrumClass.SD) for t in times]


def test_service_corrects_beats_and_onsets():
    service = AlignmentService(AlignmentSettings())
    annotated = BeatSeq(times=(1.0, 2.0, 3.0))
    estimated = BeatSeq(times=(1.02, 2.04, 3.04))

    result = service.align(annotated, estimated, onsets_at(1.5, 2.5))

    assert result.kept
    assert result.beats.times == pytest.approx((1.02, 2.04, 3.04))
    assert [o.time for o in result.onsets] == pytest.approx([1.53, 2.54])
    assert all(o.provenance == Provenance.GAMEPLAY for o in result.onsets)


def test_service_discards_large_deviation():
    service = AlignmentService(AlignmentSettings(MATCH_WINDOW=0.15))
    result = service.align(BeatSeq(times=(1.0, 2.0, 3.0)), BeatSeq(times=(1.0, 2.1, 3.0)), onsets_at(1.5))

    assert not result.kept
    assert result.beats is None
    assert result.onsets == ()
    assert REASON_MAX_CORRECTION in result.report.reason


def test_service_majority_window():
    settings = AlignmentSettings(MATCH_WINDOW=0.05, MAJORITY_WINDOW=0.01, MIN_MATCHED_FRACTION=0.9)
    result = AlignmentService(settings).align(
        BeatSeq(times=(1.0, 2.0, 3.0)), BeatSeq(times=(1.0, 2.0, 3.03)), onsets_at(1.5)
    )
    assert not result.kept
    assert result.report.reason == REASON_MAJORITY


def test_service_defaults_name_the_max_correction_rule():
    annotated = BeatSeq(times=(1.0, 1.5, 2.0, 2.5, 3.0))
    estimated = BeatSeq(times=tuple(t + 0.1 for t in annotated.times))

    result = AlignmentService(AlignmentSettings()).align(annotated, estimated, onsets_at(1.25))

    assert not result.kept
    assert result.report.reason == f"{REASON_MAJORITY}; {REASON_MAX_CORRECTION}"
    assert result.report.n_matched == 5
    assert result.report.max_abs_deviation == pytest.approx(0.1)


def test_service_snap_radius_setting():
    annotated = BeatSeq(times=(1.0, 1.5, 2.0, 2.5, 3.0))
    estimated = BeatSeq(times=tuple(t + 0.1 for t in annotated.times))
    settings = AlignmentSettings(SNAP_RADIUS=0.05)

    result = AlignmentService(settings).align(annotated, estimated, onsets_at(1.25))

    assert settings.snap_radius == 0.05
    assert AlignmentSettings().snap_radius == pytest.approx(0.13)
    assert result.report.n_matched == 0
    assert REASON_TOO_FEW_ANCHORS in result.report.reason


def test_service_counts_onsets_corrected_before_zero():
    annotated = BeatSeq(times=(0.5, 1.0, 1.5, 2.0))
    estimated = BeatSeq(times=tuple(t - 0.04 for t in annotated.times))
    onsets = [LabeledOnset(time=t, drum_class=DrumClass.BD) for t in (0.0, 0.02, 0.06, 0.07)]

    result = AlignmentService(AlignmentSettings()).align(annotated, estimated, onsets)

    assert result.kept
    assert result.report.n_dropped_onsets == 2
    assert len(result.onsets) + result.report.n_dropped_onsets == len(onsets)
    assert [o.time for o in result.onsets] == pytest.approx([0.02, 0.03])
