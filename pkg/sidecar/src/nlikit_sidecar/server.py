"""HTTP serving of a sequence-pair classifier behind the wire protocol.

Endpoints:
    GET  /v1/health          -> {"status": "ok", "model": str}
    POST /v1/classify_batch  -> {"probs": [[p0, p1, p2], ...], "model": str}

Probabilities are the softmax of the model's logits. Every input is padded
to the configured fixed sequence length (long inputs are truncated), and the
model is invoked serially, one pair per forward pass, behind a lock: batched
GEMM kernels change their reduction order with the batch shape, so per-pair
invocation is what makes a pair classify to bit-identical probabilities
whether it arrives alone or inside any batch — the determinism the
protocol's contract checks demand. Batches over the configured maximum are
refused with HTTP 413.
"""

from __future__ import annotations

import threading

import torch
from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import ServingConfig
from .modeling import load_classifier, resolve_device


class PairIn(BaseModel):
    premise: str
    hypothesis: str


class BatchIn(BaseModel):
    pairs: list[PairIn]


def create_app(config: ServingConfig) -> FastAPI:
    if not config.model:
        raise ValueError("ServingConfig.model is required")
    torch.set_num_threads(1)  # keeps reductions deterministic across batch shapes
    tokenizer, model = load_classifier(config.model, config.device)
    device = resolve_device(config.device)
    identity = config.model
    lock = threading.Lock()

    app = FastAPI(title="nlikit-sidecar", version="0.1.0")

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "model": identity}

    @app.post("/v1/classify_batch")
    def classify_batch(batch: BatchIn):
        if len(batch.pairs) > config.max_batch:
            return JSONResponse(
                status_code=413,
                content={"error": f"batch of {len(batch.pairs)} exceeds maximum {config.max_batch}"},
            )
        rows: list[list[float]] = []
        with lock, torch.no_grad():
            for pair in batch.pairs:
                encoded = tokenizer(
                    [pair.premise],
                    [pair.hypothesis],
                    truncation=True,
                    padding="max_length",
                    max_length=config.max_seq_len,
                    return_tensors="pt",
                ).to(device)
                logits = model(**encoded).logits
                rows.append(torch.softmax(logits.double(), dim=-1)[0].cpu().tolist())
        return {"probs": rows, "model": identity}

    return app


def serve(config: ServingConfig) -> None:
    """Run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="info")
