"""Training-data loading for the canonical JSONL exchange format.

The sidecar reads exactly the toolkit's dataset format —
{"id", "premise", "hypothesis", "label" (int 0|1|2), "source"?} per line — so
augmented files drop in unchanged. Rows without a label are unusable for
supervision: they are rejected and counted. Malformed lines are an error;
training data should be clean.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


class TrainingDataError(ValueError):
    """Unreadable, malformed, or unusable training file."""


@dataclass
class TrainingData:
    premises: list[str]
    hypotheses: list[str]
    labels: list[int]
    rejected_unlabeled: int

    def __len__(self) -> int:
        return len(self.labels)


def load_training_file(path: str | Path) -> TrainingData:
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise TrainingDataError(f"cannot read training file {path}: {exc}") from exc

    premises: list[str] = []
    hypotheses: list[str] = []
    labels: list[int] = []
    rejected = 0
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            premise = record["premise"]
            hypothesis = record["hypothesis"]
        except (KeyError, TypeError, ValueError) as exc:
            raise TrainingDataError(f"{path}:{lineno}: malformed record: {exc}") from exc
        label = record.get("label")
        if label is None:
            rejected += 1
            continue
        if not isinstance(label, int) or isinstance(label, bool) or label not in (0, 1, 2):
            raise TrainingDataError(f"{path}:{lineno}: label must be 0, 1 or 2, got {label!r}")
        premises.append(premise)
        hypotheses.append(hypothesis)
        labels.append(label)

    if not labels:
        raise TrainingDataError(
            f"{path}: no labeled rows ({rejected} unlabeled rows rejected)"
        )
    return TrainingData(premises, hypotheses, labels, rejected)
