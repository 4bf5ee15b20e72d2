import numpy as np
import pytest
import soundfile as sf
from click.testing import CliRunner

from drumchart_curation.cli import EXIT_IO, EXIT_USAGE, main
from drumchart_curation.components.dataset.records import DiscardReason, Manifest, TrackRecord, TrackStatus
from drumchart_curation.components.evaluation.annotations import read_annotations, write_annotations
from drumchart_curation.components.features.spectrogram import LogSpectrogram
from drumchart_curation.components.features.storage import read_features, write_features
from drumchart_curation.components.vocabulary.classes import DrumClass
from tests.fixtures.charts import GOLDEN_BEAT_TIMES, GOLDEN_TSV, golden_smf, write_beats_file, write_chart_dir


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def manifest_path(tmp_path):
    records = [
        TrackRecord(id=f"t{i}", artist=f"artist {i % 3}", genre="Rock", duration=60.0, status=TrackStatus.KEPT)
        for i in range(6)
    ]
    records.append(TrackRecord(id="gone", status=TrackStatus.DISCARDED, discard_reason=DiscardReason.EMPTY))
    path = tmp_path / "dataset" / "manifest.json"
    Manifest.of(records).save(path)
    return path


def test_convert(runner, golden_chart, charts_dir, beats_dir, tmp_path):
    output_dir = tmp_path / "dataset"
    result = runner.invoke(main, ["convert", "--input", str(charts_dir), "--output", str(output_dir), "--beats-dir", str(beats_dir)])

    assert result.exit_code == 0, result.output
    assert "1 of 1 tracks kept" in result.output
    assert (output_dir / "annotations" / "golden.tsv").read_text(encoding="utf-8") == GOLDEN_TSV
    assert Manifest.load(output_dir / "manifest.json").records[0].kept


def test_convert_without_alignment(runner, golden_chart, charts_dir, tmp_path):
    output_dir = tmp_path / "dataset"
    result = runner.invoke(main, ["convert", "--input", str(charts_dir), "--output", str(output_dir), "--no-align"])

    assert result.exit_code == 0, result.output
    assert Manifest.load(output_dir / "manifest.json").records[0].alignment is None


def test_convert_alignment_thresholds(runner, charts_dir, tmp_path):
    beats_dir = tmp_path / "shifted"
    write_chart_dir(charts_dir, "shifted", golden_smf())
    write_beats_file(beats_dir, "shifted", [t + 0.1 for t in GOLDEN_BEAT_TIMES])
    output_dir = tmp_path / "dataset"

    result = runner.invoke(
        main,
        [
            "convert",
            "--input",
            str(charts_dir),
            "--output",
            str(output_dir),
            "--beats-dir",
            str(beats_dir),
            "--match-window-ms",
            "150",
        ],
    )

    assert result.exit_code == 0, result.output
    assert "0 of 1 tracks kept" in result.output
    [record] = Manifest.load(output_dir / "manifest.json").records
    assert record.discard_reason == DiscardReason.ALIGNMENT_SANITY
    assert "max correction exceeded" in record.detail

    relaxed = runner.invoke(
        main,
        [
            "convert",
            "--input",
            str(charts_dir),
            "--output",
            str(output_dir),
            "--beats-dir",
            str(beats_dir),
            "--match-window-ms",
            "150",
            "--max-correction-ms",
            "120",
        ],
    )
    assert "1 of 1 tracks kept" in relaxed.output


def test_convert_requires_output(runner, charts_dir):
    result = runner.invoke(main, ["convert", "--input", str(charts_dir)])
    assert result.exit_code == EXIT_USAGE


def test_unknown_command(runner):
    assert runner.invoke(main, ["transcribe"]).exit_code == EXIT_USAGE


def test_split(runner, manifest_path):
    result = runner.invoke(main, ["split", "--manifest", str(manifest_path), "--folds", "3", "--seed", "1"])

    assert result.exit_code == 0, result.output
    assert "Fold sizes: 2 2 2" in result.output
    splits = (manifest_path.parent / "splits.tsv").read_text(encoding="utf-8").splitlines()
    assert splits[0] == "# n_folds=3"
    assert len(splits) == 7


def test_split_with_too_many_folds(runner, manifest_path):
    result = runner.invoke(main, ["split", "--manifest", str(manifest_path), "--folds", "4"])
    assert result.exit_code == EXIT_USAGE


def test_missing_manifest(runner, tmp_path):
    result = runner.invoke(main, ["split", "--manifest", str(tmp_path / "missing.json")])
    assert result.exit_code == EXIT_IO


def test_invalid_manifest(runner, tmp_path):
    path = tmp_path / "manifest.json"
    path.write_text("{not json")
    assert runner.invoke(main, ["stats", "--manifest", str(path)]).exit_code == EXIT_IO


def test_stats(runner, manifest_path, tmp_path):
    plot = tmp_path / "genres.png"
    result = runner.invoke(main, ["stats", "--manifest", str(manifest_path), "--plot", str(plot)])

    assert result.exit_code == 0, result.output
    assert "section\tkey\tvalue" in result.output
    assert "duration\thours\t0.100" in result.output
    assert "discard\tempty\t1" in result.output
    assert plot.read_bytes().startswith(b"\x89PNG")


def test_eval(runner, tmp_path):
    ref_dir, est_dir = tmp_path / "ref", tmp_path / "est"
    write_annotations(ref_dir / "a.tsv", [(1.0, DrumClass.BD), (2.0, DrumClass.SD)])
    write_annotations(est_dir / "a.tsv", [(1.03, DrumClass.BD), (2.06, DrumClass.SD)])

    result = runner.invoke(main, ["eval", "--ref", str(ref_dir), "--est", str(est_dir)])
    assert result.exit_code == 0, result.output
    assert "SUM\t0.5000\t0.5000\t0.5000\t1\t1\t1" in result.output

    wider = runner.invoke(main, ["eval", "--ref", str(ref_dir), "--est", str(est_dir), "--window-ms", "70"])
    assert "SUM\t1.0000\t1.0000\t1.0000\t2\t0\t0" in wider.output


def test_eval_with_folds(runner, tmp_path):
    ref_dir, est_dir = tmp_path / "ref", tmp_path / "est"
    write_annotations(ref_dir / "a.tsv", [(1.0, DrumClass.BD)])
    write_annotations(ref_dir / "b.tsv", [(1.0, DrumClass.BD)])
    write_annotations(est_dir / "a.tsv", [(1.0, DrumClass.BD)])
    splits = tmp_path / "splits.tsv"
    splits.write_text("# n_folds=2\na\t0\nb\t1\n")

    result = runner.invoke(main, ["eval", "--ref", str(ref_dir), "--est", str(est_dir), "--folds", str(splits)])
    assert result.exit_code == 0, result.output
    assert "SUM\t0.5000\t0.5000\t0.5000\t1\t0\t1" in result.output


def test_eval_rejects_malformed_annotations(runner, tmp_path):
    ref_dir, est_dir = tmp_path / "ref", tmp_path / "est"
    ref_dir.mkdir()
    est_dir.mkdir()
    (ref_dir / "a.tsv").write_text("1.0 BD\n")
    assert runner.invoke(main, ["eval", "--ref", str(ref_dir), "--est", str(est_dir)]).exit_code == EXIT_IO


def test_features(runner, tmp_path):
    audio = tmp_path / "song.wav"
    sf.write(str(audio), np.random.default_rng(0).uniform(-0.5, 0.5, 44100), 44100, subtype="PCM_16")
    out = tmp_path / "song.adtf"

    result = runner.invoke(main, ["features", "--audio", str(audio), "--out", str(out)])

    assert result.exit_code == 0, result.output
    features = read_features(out)
    assert features.shape[0] == 100
    assert f"100 frames x {features.shape[1]} bands" in result.output


def test_features_rejects_non_wav(runner, tmp_path):
    audio = tmp_path / "song.wav"
    audio.write_bytes(b"RIFF????")
    result = runner.invoke(main, ["features", "--audio", str(audio), "--out", str(tmp_path / "x.adtf")])
    assert result.exit_code == EXIT_IO


def test_flag(runner, manifest_path, tmp_path):
    scores = tmp_path / "scores.tsv"
    scores.write_text("".join(f"t{i}\t{i / 10}\n" for i in range(6)))

    result = runner.invoke(main, ["flag", "--manifest", str(manifest_path), "--scores", str(scores), "--fraction", "0.2"])

    assert result.exit_code == 0, result.output
    assert "1 tracks flagged" in result.output
    flagged = [r.id for r in Manifest.load(manifest_path).records if r.flagged]
    assert flagged == ["t0"]


def test_flag_and_discard(runner, manifest_path, tmp_path):
    scores = tmp_path / "scores.tsv"
    scores.write_text("t0\t0.1\nt1\t0.9\n")

    result = runner.invoke(
        main,
        ["flag", "--manifest", str(manifest_path), "--scores", str(scores), "--fraction", "0.5", "--discard-flagged"],
    )

    assert result.exit_code == 0, result.output
    record = next(r for r in Manifest.load(manifest_path).records if r.id == "t0")
    assert record.discard_reason == DiscardReason.LABEL_SCREEN


def write_activation(path, n_columns: int = 5) -> None:
    frames = np.zeros((100, n_columns))
    frames[50, 0] = 1.0
    frames[20, 2] = 0.9
    write_features(path, LogSpectrogram(frames=frames, frame_rate=100.0, band_center_frequencies=np.zeros(n_columns)))


def test_peaks(runner, tmp_path):
    activation = tmp_path / "song.adtf"
    write_activation(activation)
    out = tmp_path / "estimates" / "song.tsv"

    result = runner.invoke(main, ["peaks", "--activation", str(activation), "--out", str(out), "--threshold", "0.5"])

    assert result.exit_code == 0, result.output
    assert read_annotations(out) == [(0.2, DrumClass.TT), (0.5, DrumClass.BD)]


def test_peaks_requires_five_columns(runner, tmp_path):
    activation = tmp_path / "song.adtf"
    write_activation(activation, n_columns=4)
    result = runner.invoke(main, ["peaks", "--activation", str(activation), "--out", str(tmp_path / "x.tsv")])
    assert result.exit_code == EXIT_USAGE
