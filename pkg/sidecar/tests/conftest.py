import json
import subprocess
import sys
import threading
import time
from pathlib import Path

import pytest
import torch
from transformers import ElectraConfig, ElectraForSequenceClassification, ElectraTokenizerFast

PROTOCOL_LABELS = {0: "entailment", 1: "neutrality", 2: "contradiction"}


def generate_training_file(path: Path, rows: int = 100, seed: int = 7) -> Path:
    """Produce overlap-triple training data through the toolkit CLI (the
    sidecar consumes the primary only via its external interfaces)."""
    draws = rows // 3 + 1
    subprocess.run(
        [sys.executable, "-m", "nlikit.cli", "augment", "--kind", "overlap",
         "--count", str(draws), "--seed", str(seed), "--out", str(path)],
        check=True,
        capture_output=True,
    )
    lines = path.read_text().splitlines()[:rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def build_tiny_checkpoint(directory: Path, corpus_file: Path, *, seed: int = 0,
                          id2label: dict | None = None) -> Path:
    """Randomly initialized miniature ELECTRA-style checkpoint whose wordpiece
    vocabulary covers the corpus; everything is constructed locally."""
    words = set()
    for line in corpus_file.read_text().splitlines():
        record = json.loads(line)
        text = f"{record['premise']} {record['hypothesis']}".lower().replace(".", " ")
        words.update(text.split())
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "."] + sorted(words)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "vocab.txt").write_text("\n".join(vocab) + "\n")
    tokenizer = ElectraTokenizerFast(vocab_file=str(directory / "vocab.txt"), do_lower_case=True)

    labels = id2label or PROTOCOL_LABELS
    torch.manual_seed(seed)
    config = ElectraConfig(
        vocab_size=len(vocab),
        embedding_size=32,
        hidden_size=64,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=128,
        max_position_embeddings=64,
        num_labels=3,
        id2label=labels,
        label2id={v: k for k, v in labels.items()},
    )
    model = ElectraForSequenceClassification(config)
    model.save_pretrained(directory)
    tokenizer.save_pretrained(directory)
    return directory


@pytest.fixture(scope="session")
def training_file(tmp_path_factory) -> Path:
    return generate_training_file(tmp_path_factory.mktemp("data") / "train.jsonl")


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory, training_file) -> Path:
    # init seed chosen so the one-epoch smoke finetune shows clear learning
    return build_tiny_checkpoint(tmp_path_factory.mktemp("ckpt") / "tiny", training_file, seed=2)


class LiveServer:
    """Run a FastAPI app on a real socket in a background thread."""

    def __init__(self, app):
        import uvicorn

        self._config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning")
        self._server = uvicorn.Server(self._config)
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    def __enter__(self) -> "LiveServer":
        self._thread.start()
        deadline = time.time() + 15
        while not self._server.started:
            if time.time() > deadline:
                raise RuntimeError("server did not start within 15s")
            time.sleep(0.02)
        return self

    @property
    def url(self) -> str:
        port = self._server.servers[0].sockets[0].getsockname()[1]
        return f"http://127.0.0.1:{port}"

    def __exit__(self, *exc) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=10)
