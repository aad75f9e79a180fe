"""Conformance checks for classifier backends and protocol servers.

These are the checks a serving implementation must pass to stand behind the
wire protocol: batch results index-aligned with single calls, valid
normalized probability triples, determinism across repeat calls, cache
observational equivalence, and the batch-size limit on the HTTP surface.
They are plain functions raising ContractViolation so both the in-repo test
suite and external server implementations can run them unmodified.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import requests

from .backend import CachedBackend, ClassifierBackend, Pair
from .records import PROB_SUM_TOLERANCE, ProbTriple


class ContractViolation(AssertionError):
    """A backend or server broke the classification protocol contract."""


DEFAULT_PROBE_PAIRS: list[Pair] = [
    ("The student supports the teacher.", "The teacher supports the student."),
    ("The student does not support the teacher.", "The student supports the teacher."),
    ("He (1935 - 1990).", "He was born before 1934."),
    ("He (1900 - 1950).", "He died after 1949."),
    ("Cats sleep.", "The economy grew."),
    ("A man walks a dog in the park.", "A person is outside."),
    ("The committee approved the budget on Tuesday.", "The budget was rejected."),
    ("Two children play chess.", "Two kids are playing a board game."),
]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ContractViolation(message)


def _require_valid_triple(probs: ProbTriple, where: str) -> None:
    total = sum(probs)
    _require(abs(total - 1.0) <= PROB_SUM_TOLERANCE, f"{where}: probabilities sum to {total}")
    _require(all(0.0 <= p <= 1.0 for p in probs), f"{where}: component outside [0, 1]")


def verify_backend_contract(
    backend: ClassifierBackend, pairs: Sequence[Pair] | None = None
) -> None:
    """Behavioral contract for a deterministic backend.

    Checks: every result is a normalized triple; classify_batch preserves
    length and input order (batch[i] equals classify(pairs[i]), including on
    a permuted batch); repeat calls agree.
    """
    probe = list(pairs) if pairs is not None else list(DEFAULT_PROBE_PAIRS)
    _require(len(probe) >= 2, "need at least 2 probe pairs")

    singles = [backend.classify(p, h) for p, h in probe]
    for i, probs in enumerate(singles):
        _require_valid_triple(probs, f"classify #{i}")

    batch = backend.classify_batch(probe)
    _require(len(batch) == len(probe), f"batch returned {len(batch)} results for {len(probe)} pairs")
    for i, (single, batched) in enumerate(zip(singles, batch)):
        _require_valid_triple(batched, f"classify_batch #{i}")
        _require(
            batched.as_list() == single.as_list(),
            f"batch result #{i} disagrees with single call: {batched.as_list()} vs {single.as_list()}",
        )

    reversed_batch = backend.classify_batch(list(reversed(probe)))
    for i, probs in enumerate(reversed(reversed_batch)):
        _require(
            probs.as_list() == singles[i].as_list(),
            f"permuted batch broke order alignment at original index {i}",
        )

    again = [backend.classify(p, h) for p, h in probe]
    for i, (first, second) in enumerate(zip(singles, again)):
        _require(
            first.as_list() == second.as_list(),
            f"backend is not deterministic on pair #{i}",
        )

    _require(backend.classify_batch([]) == [], "empty batch must return an empty list")


def verify_cache_equivalence(
    backend: ClassifierBackend,
    cache_path: str | Path,
    pairs: Sequence[Pair] | None = None,
) -> None:
    """Wrapping a deterministic backend in a cache must not change outputs,
    and a second pass over the same pairs must be served entirely from cache."""
    from .backend import CountingBackend  # local to keep module surface tidy

    probe = list(pairs) if pairs is not None else list(DEFAULT_PROBE_PAIRS)
    bare = backend.classify_batch(probe)
    counter = CountingBackend(backend)
    cached = CachedBackend(counter, cache_path)

    first = cached.classify_batch(probe)
    _require(
        [p.as_list() for p in first] == [p.as_list() for p in bare],
        "cached backend output differs from the bare backend",
    )
    forwarded_after_first = counter.calls
    second = cached.classify_batch(probe)
    _require(
        [p.as_list() for p in second] == [p.as_list() for p in bare],
        "cached backend output changed on replay",
    )
    _require(
        counter.calls == forwarded_after_first,
        f"replay pass forwarded {counter.calls - forwarded_after_first} calls; expected 0",
    )

    reloaded = CachedBackend(backend, cache_path, replay_only=True)
    replay = reloaded.classify_batch(probe)
    _require(
        [p.as_list() for p in replay] == [p.as_list() for p in bare],
        "replay-only cache output differs after reload",
    )


def verify_server_limits(endpoint: str, *, max_batch: int = 32, timeout: float = 30.0) -> None:
    """HTTP-surface contract: an oversized batch must be refused (non-200)."""
    url = endpoint.rstrip("/") + "/v1/classify_batch"
    oversized = {
        "pairs": [
            {"premise": f"Sentence number {i}.", "hypothesis": "Something happened."}
            for i in range(max_batch + 1)
        ]
    }
    response = requests.post(url, json=oversized, timeout=timeout)
    _require(
        response.status_code != 200,
        f"server accepted a batch of {max_batch + 1} pairs over its limit of {max_batch}",
    )
