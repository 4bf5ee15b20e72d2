import random

import numpy as np
import pytest
from pydantic import ValidationError

from drumchart_curation.components.evaluation.annotations import (
    REPORT_COLUMNS,
    AnnotationFormatError,
    format_annotations,
    format_report,
    parse_annotations,
    read_annotations,
    write_annotations,
)
from drumchart_curation.components.evaluation.metrics import (
    Counts,
    EvalCounts,
    aggregate_folds,
    evaluate_track,
    f_measure,
    match_onsets,
    score,
)
from drumchart_curation.components.evaluation.peaks import Activation, peak_pick
from drumchart_curation.components.evaluation.service import EvaluationService
from drumchart_curation.components.evaluation.settings import EvaluationSettings
from drumchart_curation.components.features.spectrogram import LogSpectrogram
from drumchart_curation.components.vocabulary.classes import DrumClass


def counts(**per_class: tuple[int, int, int]) -> EvalCounts:
    values = {c: Counts() for c in DrumClass}
    for name, (tp, fp, fn) in per_class.items():
        values[DrumClass[name]] = Counts(tp=tp, fp=fp, fn=fn)
    return EvalCounts(per_class=values)


def activation(n_frames: int = 100, **impulses: list[int]) -> Activation:
    series = {c: np.zeros(n_frames) for c in DrumClass}
    for name, frames in impulses.items():
        series[DrumClass[name]][frames] = 1.0
    return Activation(frame_rate=100.0, series=series)


@pytest.mark.parametrize(
    "reference, estimated, expected",
    [
        ([1.0], [1.03], (1, 0, 0)),
        ([1.0], [1.06], (0, 1, 1)),
        ([1.00, 1.04], [1.02], (1, 0, 1)),
        ([], [], (0, 0, 0)),
        ([], [0.5, 0.7], (0, 2, 0)),
        ([0.5], [], (0, 0, 1)),
    ],
)
def test_match_onsets_examples(reference, estimated, expected):
    assert match_onsets(reference, estimated, 0.05) == expected


def test_match_onsets_window_is_inclusive():
    assert match_onsets([1.0], [1.05], 0.05) == (1, 0, 0)
    assert match_onsets([1.0], [1.0 + 0.05 + 1e-9], 0.05) == (0, 1, 1)


def _maximum_matching(reference: list[float], estimated: list[float], window: float) -> int:
    adjacency = [[j for j, e in enumerate(estimated) if abs(e - r) <= window + 1e-12] for r in reference]
    owner: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for j in adjacency[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in owner or augment(owner[j], seen):
                owner[j] = i
                return True
        return False

    return sum(1 for i in range(len(reference)) if augment(i, set()))


def test_match_onsets_is_a_maximum_matching():
    rng = random.Random(11)
    for _ in range(1000):
        reference = [round(rng.uniform(0, 1), 3) for _ in range(rng.randint(0, 8))]
        estimated = [round(rng.uniform(0, 1), 3) for _ in range(rng.randint(0, 8))]

        tp, fp, fn = match_onsets(reference, estimated, 0.05)
        assert tp == _maximum_matching(reference, estimated, 0.05)
        assert tp + fp == len(estimated)
        assert tp + fn == len(reference)


def test_match_onsets_is_symmetric():
    rng = random.Random(5)
    for _ in range(500):
        reference = [round(rng.uniform(0, 1), 3) for _ in range(rng.randint(0, 8))]
        estimated = [round(rng.uniform(0, 1), 3) for _ in range(rng.randint(0, 8))]

        tp, fp, fn = match_onsets(reference, estimated, 0.05)
        assert match_onsets(estimated, reference, 0.05) == (tp, fn, fp)


def test_score_formula():
    result = score(Counts(tp=1, fp=1, fn=0))
    assert result.precision == 0.5
    assert result.recall == 1.0
    assert result.f_measure == pytest.approx(2 / 3, abs=1e-12)


def test_score_of_empty_class():
    assert score(Counts()).f_measure == 1.0
    assert score(Counts(), empty_score=0.0).f_measure == 0.0


def test_score_without_hits():
    result = score(Counts(tp=0, fp=2, fn=3))
    assert result.f_measure == 0.0


def test_sum_pools_counts():
    report = f_measure(counts(BD=(1, 0, 0), SD=(0, 1, 1)))

    assert report.sum.precision == 0.5
    assert report.sum.recall == 0.5
    assert report.sum_f == 0.5
    assert report.per_class[DrumClass.BD].f_measure == 1.0
    assert report.per_class[DrumClass.SD].f_measure == 0.0
    assert report.per_class[DrumClass.HH].f_measure == 1.0


def test_eval_counts_add_up():
    total = counts(BD=(1, 2, 3)) + counts(BD=(1, 0, 0), HH=(2, 1, 0))
    assert total.get(DrumClass.BD) == Counts(tp=2, fp=2, fn=3)
    assert total.total == Counts(tp=4, fp=3, fn=3)


def test_aggregate_identical_folds():
    fold = counts(BD=(3, 1, 2), SD=(1, 1, 1))
    assert aggregate_folds([fold, fold, fold]).sum_f == pytest.approx(f_measure(fold).sum_f)


def test_aggregate_averages_fold_scores():
    report = aggregate_folds([counts(BD=(2, 3, 3)), counts(BD=(3, 2, 2))])
    assert report.per_class[DrumClass.BD].f_measure == pytest.approx(0.5)
    assert report.sum_f == pytest.approx(0.5)


def test_aggregate_single_fold_is_unchanged():
    fold = counts(BD=(3, 1, 2), TT=(0, 4, 1))
    assert aggregate_folds([fold]) == f_measure(fold)


def test_aggregate_needs_folds():
    with pytest.raises(ValueError):
        aggregate_folds([])


def test_evaluate_track_matches_per_class():
    reference = [(1.0, DrumClass.BD), (1.0, DrumClass.HH), (2.0, DrumClass.SD)]
    estimated = [(1.01, DrumClass.BD), (1.02, DrumClass.SD), (2.0, DrumClass.SD)]

    result = evaluate_track(reference, estimated)
    assert result.get(DrumClass.BD) == Counts(tp=1)
    assert result.get(DrumClass.HH) == Counts(fn=1)
    assert result.get(DrumClass.SD) == Counts(tp=1, fp=1)


def test_peak_pick_silence():
    assert all(times == [] for times in peak_pick(activation(), threshold=0.5).values())


def test_peak_pick_single_impulse():
    peaks = peak_pick(activation(BD=[50]), threshold=0.5)
    assert peaks[DrumClass.BD] == [0.5]
    assert peaks[DrumClass.SD] == []


def test_peak_pick_min_distance():
    peaks = peak_pick(activation(SD=[50, 52]), threshold=0.5, min_distance=3)
    assert peaks[DrumClass.SD] == [0.5]


def test_peak_pick_separated_impulses():
    peaks = peak_pick(activation(HH=[20, 60]), threshold=0.5)
    assert peaks[DrumClass.HH] == [0.2, 0.6]


def test_peak_pick_random_activations():
    rng = np.random.default_rng(17)
    for _ in range(200):
        threshold = float(rng.uniform(0.05, 0.6))
        pre_max, post_max, avg_window, min_distance = (int(v) for v in rng.integers(0, 6, size=4))
        values = rng.uniform(0, 1, 80) ** 3
        series = {c: np.zeros(80) for c in DrumClass}
        series[DrumClass.TT] = values

        times = peak_pick(
            Activation(frame_rate=100.0, series=series),
            threshold=threshold,
            pre_max=pre_max,
            post_max=post_max,
            avg_window=avg_window,
            min_distance=min_distance,
        )[DrumClass.TT]
        frames = [round(t * 100.0) for t in times]

        assert all(b - a >= min_distance for a, b in zip(frames, frames[1:]))
        for i in frames:
            local_mean = values[max(0, i - avg_window) : i + avg_window + 1].mean()
            assert values[i] >= threshold
            assert values[i] >= local_mean + threshold - 1e-12
            assert values[i] == values[max(0, i - pre_max) : i + post_max + 1].max()


def test_peak_pick_rejects_bad_threshold():
    with pytest.raises(ValueError):
        peak_pick(activation(), threshold=1.5)


def test_activation_validation():
    with pytest.raises(ValidationError):
        Activation(frame_rate=100.0, series={DrumClass.BD: np.zeros(3)})
    with pytest.raises(ValidationError):
        Activation(frame_rate=100.0, series={c: np.full(3, 2.0) for c in DrumClass})


def test_activation_from_features():
    frames = np.zeros((10, 5))
    frames[4, 3] = 1.0
    features = LogSpectrogram(frames=frames, frame_rate=100.0, band_center_frequencies=np.zeros(5))

    peaks = peak_pick(Activation.from_features(features), threshold=0.5)
    assert peaks[DrumClass.HH] == [0.04]

    with pytest.raises(ValueError):
        Activation.from_features(LogSpectrogram(frames=np.zeros((10, 4)), frame_rate=100.0, band_center_frequencies=np.zeros(4)))


def test_annotations_are_sorted_by_time_then_class():
    text = format_annotations([(1.0, DrumClass.HH), (0.5, DrumClass.SD), (1.0, DrumClass.BD)])
    assert text == "0.500000\tSD\n1.000000\tBD\n1.000000\tHH\n"


def test_parse_annotations():
    assert parse_annotations("1.000000\tCY+RD\n\n0.25\tTT\n") == [(0.25, DrumClass.TT), (1.0, DrumClass.CY_RD)]


@pytest.mark.parametrize(
    "text, line",
    [
        ("1.0 BD\n", 1),
        ("0.5\tBD\nsoon\tSD\n", 2),
        ("0.5\tKICK\n", 1),
        ("-0.5\tBD\n", 1),
    ],
)
def test_parse_annotations_errors(text, line):
    with pytest.raises(AnnotationFormatError) as e:
        parse_annotations(text, "track.tsv")
    assert e.value.line == line
    assert e.value.source == "track.tsv"


def test_annotation_file_io(tmp_path):
    path = tmp_path / "annotations" / "song.tsv"
    onsets = [(0.0, DrumClass.BD), (0.5, DrumClass.HH)]
    write_annotations(path, onsets)
    assert path.read_text(encoding="utf-8") == "0.000000\tBD\n0.500000\tHH\n"
    assert read_annotations(path) == onsets


def test_format_report():
    pooled = counts(BD=(1, 0, 0), SD=(0, 1, 1))
    lines = format_report(f_measure(pooled), pooled).splitlines()

    assert lines[0].split("\t") == list(REPORT_COLUMNS)
    assert lines[1] == "BD\t1.0000\t1.0000\t1.0000\t1\t0\t0"
    assert lines[-1] == "SUM\t0.5000\t0.5000\t0.5000\t1\t1\t1"
    assert len(lines) == 7


def test_service_counts_directory(tmp_path):
    reference_dir = tmp_path / "ref"
    estimated_dir = tmp_path / "est"
    write_annotations(reference_dir / "a.tsv", [(1.0, DrumClass.BD), (2.0, DrumClass.SD)])
    write_annotations(reference_dir / "b.tsv", [(1.0, DrumClass.HH)])
    write_annotations(estimated_dir / "a.tsv", [(1.02, DrumClass.BD), (2.2, DrumClass.SD)])
    write_annotations(estimated_dir / "orphan.tsv", [(1.0, DrumClass.HH)])

    service = EvaluationService(EvaluationSettings())
    track_counts = service.count_directory(reference_dir, estimated_dir)

    assert sorted(track_counts) == ["a", "b"]
    assert track_counts["a"].get(DrumClass.SD) == Counts(fp=1, fn=1)
    assert track_counts["b"].get(DrumClass.HH) == Counts(fn=1)

    report, pooled = service.evaluate(track_counts)
    assert pooled.total == Counts(tp=1, fp=1, fn=2)
    assert report.sum.precision == 0.5


def test_service_averages_folds():
    service = EvaluationService(EvaluationSettings())
    track_counts = {"a": counts(BD=(2, 3, 3)), "b": counts(BD=(3, 2, 2)), "c": counts(BD=(0, 9, 9))}

    report, pooled = service.evaluate(track_counts, folds={"a": 0, "b": 1})
    assert report.sum_f == pytest.approx(0.5)
    assert pooled.total == Counts(tp=5, fp=5, fn=5)


def test_service_requires_fold_members():
    with pytest.raises(ValueError):
        EvaluationService(EvaluationSettings()).evaluate({"a": counts()}, folds={"b": 0})
