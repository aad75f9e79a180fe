"""Fine-tune a three-way sequence-pair classifier on canonical JSONL.

Deterministic for a given (data, config): Python and torch RNGs are seeded,
data order is shuffled with a local RNG, and math runs single-threaded. The
run records every optimization step's batch loss plus the full-dataset loss
before the first step and after the last one, and writes the whole summary
next to the saved checkpoint as training_summary.json.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import random
from pathlib import Path

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer

from .config import FinetuneConfig
from .data import TrainingData, load_training_file
from .modeling import resolve_device, verify_label_order

logger = logging.getLogger(__name__)


def _batches(order: list[int], size: int):
    for start in range(0, len(order), size):
        yield order[start : start + size]


def _encode(tokenizer, data: TrainingData, indices: list[int], max_len: int, device):
    encoded = tokenizer(
        [data.premises[i] for i in indices],
        [data.hypotheses[i] for i in indices],
        truncation=True,
        padding="max_length",
        max_length=max_len,
        return_tensors="pt",
    ).to(device)
    labels = torch.tensor([data.labels[i] for i in indices], device=device)
    return encoded, labels


def _dataset_loss(model, tokenizer, data: TrainingData, config: FinetuneConfig, device) -> float:
    model.eval()
    total = 0.0
    with torch.no_grad():
        for batch in _batches(list(range(len(data))), max(8, config.batch_size)):
            encoded, labels = _encode(tokenizer, data, batch, config.max_seq_len, device)
            total += model(**encoded, labels=labels).loss.item() * len(batch)
    model.train()
    return total / len(data)


def finetune(train_path: str | Path, config: FinetuneConfig) -> Path:
    """Train and save a checkpoint; returns the checkpoint directory."""
    data = load_training_file(train_path)
    if data.rejected_unlabeled:
        logger.warning("rejected %d unlabeled rows from %s", data.rejected_unlabeled, train_path)

    torch.set_num_threads(1)
    torch.manual_seed(config.seed)
    rng = random.Random(config.seed)
    device = resolve_device("cpu" if not torch.cuda.is_available() else "auto")

    tokenizer = AutoTokenizer.from_pretrained(config.model)
    model = AutoModelForSequenceClassification.from_pretrained(config.model)
    verify_label_order(model.config.id2label)
    model.to(device)

    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate)
    initial_loss = _dataset_loss(model, tokenizer, data, config, device)
    step_losses: list[float] = []
    model.train()
    for epoch in range(config.epochs):
        order = list(range(len(data)))
        rng.shuffle(order)
        for batch in _batches(order, config.batch_size):
            encoded, labels = _encode(tokenizer, data, batch, config.max_seq_len, device)
            loss = model(**encoded, labels=labels).loss
            loss.backward()
            optimizer.step()
            optimizer.zero_grad()
            step_losses.append(loss.item())
        logger.info("epoch %d/%d: mean step loss %.4f", epoch + 1, config.epochs,
                    sum(step_losses[-len(order):]) / max(1, len(step_losses[-len(order):])))
    final_loss = _dataset_loss(model, tokenizer, data, config, device)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    summary = {
        "examples": len(data),
        "rejected_unlabeled": data.rejected_unlabeled,
        "steps": len(step_losses),
        "step_losses": step_losses,
        "initial_loss": initial_loss,
        "final_loss": final_loss,
        "config": dataclasses.asdict(config),
    }
    (out_dir / "training_summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    logger.info("saved checkpoint to %s (loss %.4f -> %.4f)", out_dir, initial_loss, final_loss)
    return out_dir
