"""Score prediction files against gold labels; emit tables and sweep data.

Prediction file format: JSONL of
{"id": str, "label": int, "probs": [p0, p1, p2]?, "technique": str}.

Accuracy is printed to 3 decimal places in table output. The report table's
Average column is the unweighted mean of the per-dataset columns. Binary
collapse (for entailment vs non-entailment test sets) counts predicted
neutrality and contradiction alike as the non-entailment class; the gold
non-entailment class arrives stored as neutrality from ingest.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .records import Label, NliExample, Prediction


class EvalError(RuntimeError):
    """Scoring or report emission could not produce a defined result."""


@dataclass
class EvalReport:
    """Accuracy and confusion counts for one (dataset, technique) run."""

    dataset: str
    technique: str
    n: int
    correct: int
    accuracy: float
    confusion: list[list[int]]  # 3x3 counts, gold-major
    skipped: int = 0
    trained_on: str = ""  # free-form row tag for table grouping


@dataclass(frozen=True)
class SweepPoint:
    """One figure coordinate: accuracy at a given augmentation size."""

    augmented_count: int
    dataset: str
    technique: str
    accuracy: float

    def __post_init__(self) -> None:
        if self.augmented_count < 0:
            raise ValueError(f"augmented_count must be >= 0, got {self.augmented_count}")


def _collapse(label: Label) -> int:
    # entailment vs non-entailment; neutrality and contradiction coincide.
    return 0 if label == Label.ENTAILMENT else 1


def score(
    gold: Iterable[NliExample],
    preds: Iterable[Prediction],
    *,
    binary_collapse: bool = False,
    dataset: str = "",
    trained_on: str = "",
) -> EvalReport:
    """Join predictions to gold examples by id and count matches.

    The join is order-independent; ids present on only one side are counted
    in ``skipped``. Gold examples must be labeled, ids must be unique per
    stream, and at least one pair must join.
    """
    gold_labels: dict[str, Label] = {}
    technique = ""
    for example in gold:
        if example.gold is None:
            raise EvalError(f"gold example {example.id!r} is unlabeled")
        if example.id in gold_labels:
            raise EvalError(f"duplicate gold id {example.id!r}")
        gold_labels[example.id] = example.gold

    n = 0
    correct = 0
    confusion = [[0, 0, 0], [0, 0, 0], [0, 0, 0]]
    seen_pred_ids: set[str] = set()
    matched_ids: set[str] = set()
    unmatched_preds = 0
    for pred in preds:
        if pred.id in seen_pred_ids:
            raise EvalError(f"duplicate prediction id {pred.id!r}")
        seen_pred_ids.add(pred.id)
        gold_label = gold_labels.get(pred.id)
        if gold_label is None:
            unmatched_preds += 1
            continue
        matched_ids.add(pred.id)
        technique = technique or pred.technique
        n += 1
        confusion[int(gold_label)][int(pred.predicted)] += 1
        if binary_collapse:
            correct += _collapse(gold_label) == _collapse(pred.predicted)
        else:
            correct += gold_label == pred.predicted
    if n == 0:
        raise EvalError("zero joined pairs: no prediction id matches a gold id")
    skipped = unmatched_preds + (len(gold_labels) - len(matched_ids))
    return EvalReport(
        dataset=dataset,
        technique=technique,
        n=n,
        correct=correct,
        accuracy=correct / n,
        confusion=confusion,
        skipped=skipped,
        trained_on=trained_on,
    )


def emit_report(reports: list[EvalReport], format: str = "markdown") -> str:
    """Render reports as a table: one row per (trained_on, technique) pair,
    one column per dataset, plus an unweighted-mean Average column."""
    if format not in ("markdown", "csv", "json"):
        raise EvalError(f"unknown report format {format!r}")
    datasets = sorted({report.dataset for report in reports})
    cells: dict[tuple[str, str], dict[str, float]] = {}
    for report in reports:
        row_key = (report.trained_on, report.technique)
        row = cells.setdefault(row_key, {})
        if report.dataset in row:
            raise EvalError(
                f"duplicate report cell for {row_key + (report.dataset,)!r}"
            )
        row[report.dataset] = report.accuracy

    header = ["trained_on", "technique", *datasets, "Average"]
    rows: list[list[str]] = []
    json_rows: list[dict] = []
    for (trained_on, technique), row in sorted(cells.items()):
        average = sum(row.values()) / len(row)
        formatted = [trained_on, technique]
        formatted += [f"{row[d]:.3f}" if d in row else "" for d in datasets]
        formatted.append(f"{average:.3f}")
        rows.append(formatted)
        json_rows.append(
            {
                "trained_on": trained_on,
                "technique": technique,
                "accuracy": {d: row[d] for d in datasets if d in row},
                "average": average,
            }
        )

    if format == "json":
        return json.dumps(json_rows, indent=2) + "\n"
    if format == "csv":
        return _csv_text([header, *rows])
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i]) for i in range(len(header))]
    lines = [
        "| " + " | ".join(h.ljust(w) for h, w in zip(header, widths)) + " |",
        "|" + "|".join("-" * (w + 2) for w in widths) + "|",
    ]
    for row in rows:
        lines.append("| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |")
    return "\n".join(lines) + "\n"


def emit_sweep(points: list[SweepPoint], format: str = "csv") -> str:
    """Emit sweep coordinates sorted by (dataset, technique, augmented_count),
    ready for external plotting. Duplicate keys are an error."""
    if format not in ("csv", "json"):
        raise EvalError(f"unknown sweep format {format!r}")
    seen: set[tuple[str, str, int]] = set()
    for point in points:
        key = (point.dataset, point.technique, point.augmented_count)
        if key in seen:
            raise EvalError(f"duplicate sweep point {key!r}")
        seen.add(key)
    ordered = sorted(points, key=lambda p: (p.dataset, p.technique, p.augmented_count))
    if format == "json":
        return (
            json.dumps(
                [
                    {
                        "dataset": p.dataset,
                        "technique": p.technique,
                        "augmented_count": p.augmented_count,
                        "accuracy": p.accuracy,
                    }
                    for p in ordered
                ],
                indent=2,
            )
            + "\n"
        )
    rows = [["dataset", "technique", "augmented_count", "accuracy"]]
    rows += [[p.dataset, p.technique, str(p.augmented_count), repr(p.accuracy)] for p in ordered]
    return _csv_text(rows)


def _csv_text(rows: list[list[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


def read_predictions(path: str | Path) -> list[Prediction]:
    """Parse a prediction JSONL file."""
    predictions = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            predictions.append(Prediction.from_json_dict(json.loads(line)))
        except (KeyError, TypeError, ValueError) as exc:
            raise EvalError(f"bad prediction at {path}:{lineno}: {exc}") from exc
    return predictions


def write_predictions(predictions: Iterable[Prediction], path: str | Path) -> int:
    written = 0
    with Path(path).open("w", encoding="utf-8", newline="\n") as handle:
        for prediction in predictions:
            handle.write(json.dumps(prediction.to_json_dict(), ensure_ascii=False))
            handle.write("\n")
            written += 1
    return written


def read_sweep_points(path: str | Path) -> list[SweepPoint]:
    """Parse sweep points from JSONL ({"dataset", "technique",
    "augmented_count", "accuracy"} per line)."""
    points = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            points.append(
                SweepPoint(
                    augmented_count=int(record["augmented_count"]),
                    dataset=str(record["dataset"]),
                    technique=str(record["technique"]),
                    accuracy=float(record["accuracy"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise EvalError(f"bad sweep point at {path}:{lineno}: {exc}") from exc
    return points
