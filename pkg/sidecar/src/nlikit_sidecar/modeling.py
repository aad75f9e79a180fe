"""Checkpoint loading and the class-map guard.

The wire protocol fixes the probability order (entailment, neutrality,
contradiction) at head positions 0, 1, 2. A checkpoint whose class map names
these labels in a different order is refused at load time with the remap to
apply; silently re-ordering outputs is never done. Checkpoints with opaque
class names (LABEL_0 style) cannot be verified and are accepted with a
warning, on the assumption the head was trained in protocol order.
"""

from __future__ import annotations

import logging

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer

logger = logging.getLogger(__name__)

LABEL_ORDER = ("entailment", "neutrality", "contradiction")

# accepted spellings per head position
_LABEL_ALIASES = {
    "entailment": 0,
    "neutral": 1,
    "neutrality": 1,
    "contradiction": 2,
}


class LabelOrderError(RuntimeError):
    """Checkpoint class map disagrees with the protocol label order."""


def verify_label_order(id2label: dict) -> None:
    if len(id2label) != 3:
        raise LabelOrderError(
            f"classifier head has {len(id2label)} classes; the protocol needs exactly 3 "
            f"ordered {LABEL_ORDER}"
        )
    names = {int(k): str(v).strip().lower() for k, v in id2label.items()}
    if any(name.startswith("label_") for name in names.values()):
        logger.warning(
            "checkpoint class map is unnamed (%s); assuming protocol order %s",
            names, LABEL_ORDER,
        )
        return
    for position in range(3):
        name = names.get(position)
        if name not in _LABEL_ALIASES:
            raise LabelOrderError(
                f"unrecognized class name {name!r} at position {position}; expected one of "
                f"{sorted(_LABEL_ALIASES)}"
            )
        if _LABEL_ALIASES[name] != position:
            want = {i: LABEL_ORDER[i] for i in range(3)}
            raise LabelOrderError(
                f"class map out of order: position {position} is {name!r}. Refusing to "
                f"start; re-export the checkpoint with id2label={want} (no silent remap)."
            )


def resolve_device(device: str) -> torch.device:
    if device == "auto":
        return torch.device("cuda" if torch.cuda.is_available() else "cpu")
    return torch.device(device)


def load_classifier(model_ref: str, device: str = "cpu"):
    """Load tokenizer + sequence-pair classifier, enforcing the class map."""
    tokenizer = AutoTokenizer.from_pretrained(model_ref)
    model = AutoModelForSequenceClassification.from_pretrained(model_ref)
    verify_label_order(model.config.id2label)
    model.to(resolve_device(device))
    model.eval()
    return tokenizer, model
