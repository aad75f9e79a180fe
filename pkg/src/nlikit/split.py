"""Long-premise classification: per-sentence cutoff scan vs. whole-premise.

The split path cuts the premise on '.', classifies each segment against the
hypothesis in order, and returns entailment or contradiction for the first
segment whose probability strictly exceeds the cutoff; if no segment
triggers, the verdict is neutrality. Comparisons are strict: a probability
exactly at the cutoff does not trigger, and entailment is checked before
contradiction on each segment.

Naive '.'-splitting is deliberate — abbreviations like "Mr. Smith" do break.
Smarter segmentation would change the algorithm under evaluation, so an
abbreviation-aware mode exists only as an opt-in flag.
"""

from __future__ import annotations

from dataclasses import dataclass

from .backend import BackendError, ClassifierBackend
from .records import Label, ProbTriple, argmax_label

# Only consulted when protect_abbreviations=True.
_ABBREVIATIONS = ("Mr.", "Mrs.", "Ms.", "Dr.", "St.", "No.", "vs.", "etc.", "e.g.", "i.e.")
_ABBREV_MARK = "\x00"


class SplitGuardError(RuntimeError):
    """Premise exceeded the configured segment-count guard."""


@dataclass(frozen=True)
class SplitConfig:
    cutoff: float = 0.8
    max_sentences: int = 64

    def __post_init__(self) -> None:
        if not 0.0 < self.cutoff < 1.0:
            raise ValueError(f"cutoff must be in (0, 1), got {self.cutoff}")
        if self.max_sentences < 1:
            raise ValueError(f"max_sentences must be positive, got {self.max_sentences}")


def split_sentences(premise: str, *, protect_abbreviations: bool = False) -> list[str]:
    """Split on '.', trim whitespace, drop empties, restore a terminal '.'.

    The terminal '.' is re-appended because splitting discards the delimiter
    and classifier backends expect sentence-shaped inputs.
    """
    text = premise
    if protect_abbreviations:
        for abbrev in _ABBREVIATIONS:
            text = text.replace(abbrev, abbrev[:-1] + _ABBREV_MARK)
    segments = []
    for raw in text.split("."):
        segment = raw.strip()
        if not segment:
            continue
        if protect_abbreviations:
            segment = segment.replace(_ABBREV_MARK, ".")
        segments.append(segment + ".")
    return segments


def classify_split(
    backend: ClassifierBackend,
    premise: str,
    hypothesis: str,
    config: SplitConfig = SplitConfig(),
    *,
    protect_abbreviations: bool = False,
) -> Label:
    """Per-sentence scan of the premise; first strict-cutoff trigger wins.

    Segments after the first trigger are never consulted, so the number of
    backend calls equals the index of the triggering segment plus one. A
    premise with zero segments returns neutrality without any backend call.
    """
    segments = split_sentences(premise, protect_abbreviations=protect_abbreviations)
    if len(segments) > config.max_sentences:
        raise SplitGuardError(
            f"premise has {len(segments)} segments, over the guard of {config.max_sentences}"
        )
    for index, segment in enumerate(segments):
        try:
            probs = backend.classify(segment, hypothesis)
        except BackendError as exc:
            raise BackendError(f"segment {index}: {exc}") from exc
        if probs[int(Label.ENTAILMENT)] > config.cutoff:
            return Label.ENTAILMENT
        if probs[int(Label.CONTRADICTION)] > config.cutoff:
            return Label.CONTRADICTION
    return Label.NEUTRALITY


def classify_plain(
    backend: ClassifierBackend, premise: str, hypothesis: str
) -> tuple[Label, ProbTriple]:
    """Single whole-premise backend call; label is the probability argmax."""
    probs = backend.classify(premise, hypothesis)
    return argmax_label(probs), probs
