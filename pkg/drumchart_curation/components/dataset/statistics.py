from collections import Counter
from pathlib import Path
from typing import Iterable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from pydantic import Field  # noqa: E402

from drumchart_curation.components.vocabulary.classes import DrumClass  # noqa: E402
from drumchart_curation.core.data.dto import ValueDTO  # noqa: E402

from .records import DiscardReason, TrackRecord, TrackStatus  # noqa: E402


class DatasetStats(ValueDTO):
    n_tracks: int = 0
    n_kept: int = 0
    n_discarded: int = 0
    n_flagged: int = 0
    total_hours: float = 0.0
    genre_counts: dict[str, int] = Field(default_factory=dict)
    class_counts: dict[DrumClass, int] = Field(default_factory=lambda: {c: 0 for c in DrumClass})
    discard_counts: dict[DiscardReason, int] = Field(default_factory=lambda: {r: 0 for r in DiscardReason})


def stats(records: Iterable[TrackRecord]) -> DatasetStats:
    """
    Dataset statistics. Hours, genres and onset counts cover kept tracks only; tracks without a
    genre are not counted in the genre histogram.
    """
    records = list(records)
    kept = [r for r in records if r.status == TrackStatus.KEPT]

    genres = Counter(r.genre.strip() for r in kept if r.genre.strip())
    classes = Counter({c: 0 for c in DrumClass})
    for record in kept:
        classes.update(record.n_onsets_per_class)
    reasons = Counter(r.discard_reason for r in records if r.discard_reason is not None)

    return DatasetStats(
        n_tracks=len(records),
        n_kept=len(kept),
        n_discarded=len(records) - len(kept),
        n_flagged=sum(1 for r in records if r.flagged),
        total_hours=sum(r.duration for r in kept) / 3600,
        genre_counts=dict(sorted(genres.items(), key=lambda item: (-item[1], item[0]))),
        class_counts={c: classes[c] for c in DrumClass},
        discard_counts={reason: reasons.get(reason, 0) for reason in DiscardReason},
    )


def format_stats(dataset_stats: DatasetStats) -> str:
    rows = [
        ("tracks", "total", str(dataset_stats.n_tracks)),
        ("tracks", "kept", str(dataset_stats.n_kept)),
        ("tracks", "discarded", str(dataset_stats.n_discarded)),
        ("tracks", "flagged", str(dataset_stats.n_flagged)),
        ("duration", "hours", f"{dataset_stats.total_hours:.3f}"),
    ]
    rows += [("discard", reason.value, str(n)) for reason, n in dataset_stats.discard_counts.items()]
    rows += [("class", c.value, str(n)) for c, n in dataset_stats.class_counts.items()]
    rows += [("genre", genre, str(n)) for genre, n in dataset_stats.genre_counts.items()]
    return "section\tkey\tvalue\n" + "".join("\t".join(row) + "\n" for row in rows)


def plot_genres(dataset_stats: DatasetStats, path: Path) -> None:
    """
    Save the genre histogram as a horizontal bar chart.
    """
    genres = list(dataset_stats.genre_counts)
    counts = [dataset_stats.genre_counts[g] for g in genres]

    fig, ax = plt.subplots(figsize=(8, max(2.0, 0.35 * len(genres) + 1)))
    try:
        ax.barh(range(len(genres)), counts, align="center", color="tab:blue")
        ax.set_yticks(range(len(genres)), labels=genres)
        ax.invert_yaxis()
        ax.set_xlabel("Tracks")
        ax.set_title(f"Genre distribution ({dataset_stats.n_kept} tracks)")
        ax.grid(True, which="both", axis="x")
        fig.tight_layout()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, dpi=150)
    finally:
        plt.close(fig)


__all__ = [
    "DatasetStats",
    "stats",
    "format_stats",
    "plot_genres",
]
