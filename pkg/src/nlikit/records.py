"""Core record types shared by every pipeline stage.

Defines the three-way label encoding (entailment=0, neutrality=1,
contradiction=2), premise/hypothesis example records, softmax probability
triples, and prediction records. All types are immutable values and safe to
share across threads.

Canonical JSONL record, one object per line, UTF-8 with LF endings:

    {"id": str, "premise": str, "hypothesis": str,
     "label": int 0|1|2 (optional), "source": str (optional)}
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Any, Sequence

PROB_SUM_TOLERANCE = 1e-6


class LabelError(ValueError):
    """A label token or integer code could not be interpreted."""


class Label(IntEnum):
    """Three-way NLI verdict with the fixed integer encoding."""

    ENTAILMENT = 0
    NEUTRALITY = 1
    CONTRADICTION = 2


_LABEL_NAMES = {
    Label.ENTAILMENT: "entailment",
    Label.NEUTRALITY: "neutrality",
    Label.CONTRADICTION: "contradiction",
}

# Accepted label vocabulary: full names, e/n/c short codes, integer strings.
_LABEL_TOKENS = {
    "entailment": Label.ENTAILMENT,
    "neutral": Label.NEUTRALITY,
    "neutrality": Label.NEUTRALITY,
    "contradiction": Label.CONTRADICTION,
    "e": Label.ENTAILMENT,
    "n": Label.NEUTRALITY,
    "c": Label.CONTRADICTION,
    "0": Label.ENTAILMENT,
    "1": Label.NEUTRALITY,
    "2": Label.CONTRADICTION,
}


def decode_label(code: int) -> Label:
    """Return the Label for an integer code, rejecting anything but 0/1/2."""
    try:
        return Label(code)
    except ValueError:
        raise LabelError(f"invalid label code {code!r}; expected 0, 1 or 2") from None


def parse_label(token: str, context: str | None = None) -> Label:
    """Parse a label token from any supported dataset vocabulary.

    Args:
        token: label string, case-insensitive.
        context: optional provenance (e.g. "file.jsonl:17") included in the
            error message for unknown tokens.
    """
    label = _LABEL_TOKENS.get(token.strip().lower())
    if label is None:
        where = f" at {context}" if context else ""
        raise LabelError(f"unknown label token {token!r}{where}")
    return label


def format_label(label: Label) -> str:
    """Inverse of parse_label on the full-name vocabulary."""
    return _LABEL_NAMES[Label(label)]


@dataclass(frozen=True)
class ProbTriple:
    """Softmax probability vector over (entailment, neutrality, contradiction).

    Components must lie in [0, 1] and sum to 1 within PROB_SUM_TOLERANCE;
    the tolerance absorbs serialized floating point from remote backends.
    """

    entailment: float
    neutrality: float
    contradiction: float

    def __post_init__(self) -> None:
        for name, p in zip(("entailment", "neutrality", "contradiction"), self):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} probability {p!r} outside [0, 1]")
        total = self.entailment + self.neutrality + self.contradiction
        if abs(total - 1.0) > PROB_SUM_TOLERANCE:
            raise ValueError(f"probabilities sum to {total!r}, not 1")

    def __iter__(self):
        return iter((self.entailment, self.neutrality, self.contradiction))

    def __getitem__(self, index: int) -> float:
        return (self.entailment, self.neutrality, self.contradiction)[index]

    def as_list(self) -> list[float]:
        return [self.entailment, self.neutrality, self.contradiction]

    @classmethod
    def from_sequence(cls, values: Sequence[float]) -> "ProbTriple":
        if len(values) != 3:
            raise ValueError(f"expected 3 probabilities, got {len(values)}")
        return cls(float(values[0]), float(values[1]), float(values[2]))


def argmax_label(probs: ProbTriple) -> Label:
    """Label of the maximal component; ties break toward the lowest code."""
    best = 0
    values = probs.as_list()
    for i in (1, 2):
        if values[i] > values[best]:
            best = i
    return Label(best)


@dataclass(frozen=True)
class NliExample:
    """A premise/hypothesis pair, optionally gold-labeled.

    ``id`` is an opaque string expected to be unique within a file. ``gold``
    is None for unlabeled rows so prediction-only pipelines reuse the record.
    """

    id: str
    premise: str
    hypothesis: str
    gold: Label | None = None
    source: str = ""

    def __post_init__(self) -> None:
        if not self.premise.strip():
            raise ValueError(f"example {self.id!r}: premise is empty")
        if not self.hypothesis.strip():
            raise ValueError(f"example {self.id!r}: hypothesis is empty")

    def to_json_dict(self) -> dict[str, Any]:
        record: dict[str, Any] = {
            "id": self.id,
            "premise": self.premise,
            "hypothesis": self.hypothesis,
        }
        if self.gold is not None:
            record["label"] = int(self.gold)
        if self.source:
            record["source"] = self.source
        return record

    @classmethod
    def from_json_dict(cls, record: dict[str, Any]) -> "NliExample":
        gold: Label | None = None
        if "label" in record and record["label"] is not None:
            raw = record["label"]
            if not isinstance(raw, int) or isinstance(raw, bool):
                raise LabelError(f"label must be an integer code, got {raw!r}")
            gold = decode_label(raw)
        return cls(
            id=str(record["id"]),
            premise=record["premise"],
            hypothesis=record["hypothesis"],
            gold=gold,
            source=record.get("source", ""),
        )


@dataclass(frozen=True)
class Prediction:
    """One classifier verdict, joined back to its example by id.

    ``probs`` is absent for the split technique, which only emits a label.
    For the plain technique the predicted label must equal the argmax of the
    attached probabilities.
    """

    id: str
    predicted: Label
    probs: ProbTriple | None = None
    technique: str = "plain"

    def __post_init__(self) -> None:
        if self.technique not in ("plain", "split"):
            raise ValueError(f"unknown technique {self.technique!r}")
        if self.probs is not None and self.technique == "plain":
            if argmax_label(self.probs) != self.predicted:
                raise ValueError(
                    f"prediction {self.id!r}: label {self.predicted!r} is not "
                    f"the argmax of {self.probs.as_list()}"
                )

    def to_json_dict(self) -> dict[str, Any]:
        record: dict[str, Any] = {
            "id": self.id,
            "label": int(self.predicted),
            "technique": self.technique,
        }
        if self.probs is not None:
            record["probs"] = self.probs.as_list()
        return record

    @classmethod
    def from_json_dict(cls, record: dict[str, Any]) -> "Prediction":
        probs = None
        if record.get("probs") is not None:
            probs = ProbTriple.from_sequence(record["probs"])
        return cls(
            id=str(record["id"]),
            predicted=decode_label(record["label"]),
            probs=probs,
            technique=record.get("technique", "plain"),
        )
