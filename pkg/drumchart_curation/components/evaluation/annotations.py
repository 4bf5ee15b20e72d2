"""
Annotation and report TSV files.

An annotation file holds one onset per line, `seconds<TAB>class`, seconds with six decimals,
sorted by time (then class order) and UTF-8 encoded.
"""

from pathlib import Path
from typing import Iterable

from drumchart_curation.components.vocabulary.classes import DrumClass
from drumchart_curation.core.utils.files import atomic_write_text

from .metrics import EvalCounts, EvalReport

_CLASS_ORDER = {drum_class: index for index, drum_class in enumerate(DrumClass)}

REPORT_COLUMNS = ("class", "precision", "recall", "f_measure", "tp", "fp", "fn")


class AnnotationFormatError(Exception):
    def __init__(self, source: str, line: int, reason: str, *args: object) -> None:
        super().__init__(f"{source}:{line}: {reason}", *args)
        self.source = source
        self.line = line
        self.reason = reason


def format_annotations(onsets: Iterable[tuple[float, DrumClass]]) -> str:
    ordered = sorted(onsets, key=lambda onset: (onset[0], _CLASS_ORDER[onset[1]]))
    return "".join(f"{t:.6f}\t{drum_class.value}\n" for t, drum_class in ordered)


def parse_annotations(text: str, source: str = "<string>") -> list[tuple[float, DrumClass]]:
    """
    Parse annotation lines. Blank lines are skipped.

    Raises:
        AnnotationFormatError: On a line without two tab-separated fields, a bad time or an
            unknown class.
    """
    onsets: list[tuple[float, DrumClass]] = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.rstrip("\r").split("\t")
        if len(fields) != 2:
            raise AnnotationFormatError(source, number, f"expected 2 tab-separated fields, got {len(fields)}")
        try:
            t = float(fields[0])
        except ValueError:
            raise AnnotationFormatError(source, number, f"{fields[0]!r} is not a time")
        if t < 0:
            raise AnnotationFormatError(source, number, f"negative time {t}")
        try:
            drum_class = DrumClass(fields[1].strip())
        except ValueError:
            raise AnnotationFormatError(source, number, f"unknown class {fields[1]!r}")
        onsets.append((t, drum_class))

    return sorted(onsets, key=lambda onset: (onset[0], _CLASS_ORDER[onset[1]]))


def write_annotations(path: Path, onsets: Iterable[tuple[float, DrumClass]]) -> None:
    atomic_write_text(path, format_annotations(onsets))


def read_annotations(path: Path) -> list[tuple[float, DrumClass]]:
    return parse_annotations(path.read_text(encoding="utf-8"), str(path))


def format_report(report: EvalReport, counts: EvalCounts) -> str:
    """
    Render a report as TSV: one row per class then SUM, rates with four decimals.
    """
    rows = [(c.value, report.per_class[c], counts.get(c)) for c in DrumClass]
    rows.append(("SUM", report.sum, counts.total))

    lines = ["\t".join(REPORT_COLUMNS)]
    for name, score, count in rows:
        lines.append(
            f"{name}\t{score.precision:.4f}\t{score.recall:.4f}\t{score.f_measure:.4f}\t{count.tp}\t{count.fp}\t{count.fn}"
        )
    return "\n".join(lines) + "\n"


__all__ = [
    "REPORT_COLUMNS",
    "AnnotationFormatError",
    "format_annotations",
    "parse_annotations",
    "write_annotations",
    "read_annotations",
    "format_report",
]
