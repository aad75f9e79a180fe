"""Read external NLI dataset files into canonical records and write them back.

Supported input formats:

    generic     canonical JSONL (see records module)
    snli_style  JSONL with sentence1/sentence2/gold_label string fields;
                "-" gold labels mark unannotated pairs and are skipped
    anli_style  JSONL with context/hypothesis/label (e/n/c) fields
    tsv_pair    premise TAB hypothesis TAB label, optional header row

Malformed lines are skipped and counted rather than aborting the read: large
public dataset files contain stray records, and the IngestReport surfaces the
loss. Binary-labeled distributions (entailment vs non-entailment) store the
non-entailment class as Neutrality; the eval module owns the collapse rule.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable

from .records import Label, LabelError, NliExample, parse_label

logger = logging.getLogger(__name__)

# Tokens that mean "no annotator agreement" rather than a bad record.
_UNLABELED_TOKENS = {"-", ""}

# Binary-dataset spelling of the non-entailment class (HANS style).
_NON_ENTAILMENT_TOKENS = {"non-entailment", "non_entailment", "nonentailment"}


class IngestError(RuntimeError):
    """Raised for unreadable files and format-level failures."""


class DatasetWriteError(IngestError):
    """I/O failure while writing; carries the partial-write count."""

    def __init__(self, message: str, written: int):
        super().__init__(message)
        self.written = written


class DatasetFormat(str, Enum):
    GENERIC = "generic"
    SNLI_STYLE = "snli_style"
    ANLI_STYLE = "anli_style"
    TSV_PAIR = "tsv_pair"

    @classmethod
    def from_name(cls, name: str) -> "DatasetFormat":
        try:
            return cls(name)
        except ValueError:
            known = ", ".join(f.value for f in cls)
            raise IngestError(f"unknown dataset format {name!r}; expected one of: {known}") from None


@dataclass
class IngestReport:
    """Per-file read accounting; read = emitted + skipped_unlabeled + skipped_malformed."""

    read: int = 0
    emitted: int = 0
    skipped_unlabeled: int = 0
    skipped_malformed: int = 0
    # Set when any binary-dataset label token was mapped to Neutrality.
    binary_labels: bool = False

    def reconciles(self) -> bool:
        return self.read == self.emitted + self.skipped_unlabeled + self.skipped_malformed


def _parse_generic(record: dict, synthetic_id: str) -> NliExample:
    if "id" not in record:
        record = dict(record, id=synthetic_id)
    return NliExample.from_json_dict(record)


def _parse_snli(record: dict, synthetic_id: str, context: str) -> NliExample | None:
    token = str(record.get("gold_label", "")).strip()
    if token in _UNLABELED_TOKENS:
        return None
    return NliExample(
        id=str(record.get("pairID", synthetic_id)),
        premise=record["sentence1"],
        hypothesis=record["sentence2"],
        gold=parse_label(token, context),
        source=str(record.get("source", "")),
    )


def _parse_anli(record: dict, synthetic_id: str, context: str) -> NliExample | None:
    token = str(record.get("label", "")).strip()
    if token in _UNLABELED_TOKENS:
        return None
    return NliExample(
        id=str(record.get("uid", synthetic_id)),
        premise=record["context"],
        hypothesis=record["hypothesis"],
        gold=parse_label(token, context),
        source=str(record.get("source", "")),
    )


def read_dataset(
    path: str | Path,
    format: DatasetFormat | str = DatasetFormat.GENERIC,
    *,
    tsv_header: bool = False,
) -> tuple[list[NliExample], IngestReport]:
    """Parse a dataset file, in file order, into canonical examples.

    Returns the examples together with an IngestReport whose counts reconcile
    exactly. Lines that fail JSON or field parsing are counted as malformed
    and logged with their line numbers; records without a usable gold label
    are counted as unlabeled (generic-format rows may omit the label field
    and are emitted unlabeled instead).
    """
    fmt = DatasetFormat.from_name(format) if isinstance(format, str) else format
    path = Path(path)
    report = IngestReport()
    examples: list[NliExample] = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise IngestError(f"cannot read dataset {path}: {exc}") from exc

    start = 0
    if fmt is DatasetFormat.TSV_PAIR and tsv_header and lines:
        start = 1

    for lineno, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        report.read += 1
        context = f"{path.name}:{lineno}"
        try:
            example = _parse_line(line, fmt, context, report)
        except (KeyError, TypeError, ValueError) as exc:
            report.skipped_malformed += 1
            logger.warning("skipping malformed line %s: %s", context, exc)
            continue
        if example is None:
            report.skipped_unlabeled += 1
        else:
            examples.append(example)
            report.emitted += 1
    return examples, report


def _parse_line(
    line: str, fmt: DatasetFormat, context: str, report: IngestReport
) -> NliExample | None:
    if fmt is DatasetFormat.TSV_PAIR:
        columns = line.split("\t")
        if len(columns) != 3:
            raise ValueError(f"expected 3 tab-separated columns, got {len(columns)}")
        premise, hypothesis, token = (c.strip() for c in columns)
        if token in _UNLABELED_TOKENS:
            return None
        if token.lower() in _NON_ENTAILMENT_TOKENS:
            report.binary_labels = True
            gold = Label.NEUTRALITY
        else:
            gold = parse_label(token, context)
        return NliExample(id=context, premise=premise, hypothesis=hypothesis, gold=gold)

    record = json.loads(line)
    if not isinstance(record, dict):
        raise ValueError("line is not a JSON object")
    if fmt is DatasetFormat.GENERIC:
        return _parse_generic(record, context)
    if fmt is DatasetFormat.SNLI_STYLE:
        return _parse_snli(record, context, context)
    return _parse_anli(record, context, context)


def write_dataset(examples: Iterable[NliExample], path: str | Path) -> int:
    """Write examples as canonical JSONL, preserving order; returns the count."""
    path = Path(path)
    written = 0
    try:
        with path.open("w", encoding="utf-8", newline="\n") as handle:
            for example in examples:
                handle.write(json.dumps(example.to_json_dict(), ensure_ascii=False))
                handle.write("\n")
                written += 1
    except OSError as exc:
        raise DatasetWriteError(
            f"write to {path} failed after {written} records: {exc}", written
        ) from exc
    return written
