"""Classifier backends: deterministic mocks, remote HTTP, record/replay cache.

Wire protocol (the serving side lives in the sidecar package):

    POST {endpoint}/v1/classify_batch
    request  {"pairs": [{"premise": str, "hypothesis": str}, ...]}
    response {"probs": [[p0, p1, p2], ...], "model": str}

Non-200 responses are backend errors. The NLI_BACKEND_URL environment
variable supplies the default endpoint for CLI use.

The heuristic mock deliberately embodies the word-overlap shortcut: premise
and hypothesis sharing most tokens score as entailment regardless of
structure, so it reproduces documented misclassifications. The oracle mock
answers the augmentation templates exactly, which lets the split algorithm be
exercised end-to-end without a trained model.
"""

from __future__ import annotations

import hashlib
import json
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, Protocol, Sequence, runtime_checkable

import requests

from . import augment
from .lexicon import base_form
from .records import ProbTriple

DEFAULT_MAX_BATCH = 32
DEFAULT_RETRIES = 3
DEFAULT_BACKOFF = 0.5
DEFAULT_TIMEOUT = 30.0
DEFAULT_CONCURRENCY = 4

ENV_BACKEND_URL = "NLI_BACKEND_URL"

Pair = tuple[str, str]


class BackendError(RuntimeError):
    """Classification request failed after any configured retries."""


class ProtocolError(BackendError):
    """The remote answered, but with an invalid response shape or values."""


class CacheMissError(BackendError):
    """Replay-only cache was asked for a pair it has never seen."""


@runtime_checkable
class ClassifierBackend(Protocol):
    """Uniform classifier surface; identity feeds cache keys and manifests."""

    identity: str

    def classify(self, premise: str, hypothesis: str) -> ProbTriple: ...

    def classify_batch(self, pairs: Sequence[Pair]) -> list[ProbTriple]: ...


# --- deterministic in-process mocks ---------------------------------------

_MOCK_TOKEN_RE = re.compile(r"[0-9a-z]+")
_NEGATION_TOKENS = {"not", "no", "never"}


def _mock_tokens(text: str) -> list[str]:
    return _MOCK_TOKEN_RE.findall(text.lower())


def _negation_parity(tokens: list[str]) -> int:
    return sum(1 for token in tokens if token in _NEGATION_TOKENS) % 2


def heuristic_mock(premise: str, hypothesis: str) -> ProbTriple:
    """Word-overlap rule cascade, tuned to straddle the 0.8 split cutoff.

    Overlap ratio r is hypothesis-normalized set overlap. Negation parity
    disagreement on high-overlap pairs yields contradiction; r >= 0.9 yields
    confident entailment (above the cutoff), r >= 0.5 weak entailment (below
    it), anything else neutrality.
    """
    p_tokens = _mock_tokens(premise)
    h_tokens = _mock_tokens(hypothesis)
    h_set = set(h_tokens)
    ratio = len(h_set & set(p_tokens)) / len(h_set) if h_set else 0.0
    if _negation_parity(p_tokens) != _negation_parity(h_tokens) and ratio >= 0.5:
        return ProbTriple(0.05, 0.10, 0.85)
    if ratio >= 0.9:
        return ProbTriple(0.90, 0.07, 0.03)
    if ratio >= 0.5:
        return ProbTriple(0.60, 0.30, 0.10)
    return ProbTriple(0.10, 0.80, 0.10)


_ORACLE_FALLBACK = ProbTriple(0.10, 0.80, 0.10)


def _confident(label: int) -> ProbTriple:
    probs = [0.05, 0.05, 0.05]
    probs[label] = 0.90
    return ProbTriple.from_sequence(probs)


def _oracle_overlap(premise: str, hypothesis: str) -> ProbTriple | None:
    parsed_h = augment.parse_positive(hypothesis)
    if parsed_h is None:
        return None
    h1, hv, h2 = parsed_h
    positive = augment.parse_positive(premise)
    if positive is not None:
        if positive == (h1, hv, h2):
            return _confident(0)
        if positive == (h2, hv, h1):
            return _confident(1)
        return None
    negated = augment.parse_negated(premise)
    if negated is not None and negated == (h1, base_form(hv), h2):
        return _confident(2)
    return None


def _oracle_years(premise: str, hypothesis: str) -> ProbTriple | None:
    years = augment.parse_years_premise(premise)
    query = augment.parse_year_hypothesis(hypothesis)
    if years is None or query is None:
        return None
    birth, death = years
    if query.kind.startswith("born"):
        anchor = birth
    elif death is not None:
        anchor = death
    else:
        return None  # died_* query against a birth-only premise
    return _confident(int(augment.compare_year(query.kind, anchor, query.year)))


def oracle_mock(premise: str, hypothesis: str) -> ProbTriple:
    """Exact answers for the augmentation templates, neutral otherwise.

    Matching pairs get probability 0.9 on the scheme's label and 0.05 on each
    of the others; non-template pairs fall back to a sub-cutoff neutral triple.
    """
    return _oracle_years(premise, hypothesis) or _oracle_overlap(premise, hypothesis) or _ORACLE_FALLBACK


class _FunctionBackend:
    """Stateless backend over a pure (premise, hypothesis) -> ProbTriple rule."""

    def __init__(self, func, identity: str):
        self._func = func
        self.identity = identity

    def classify(self, premise: str, hypothesis: str) -> ProbTriple:
        return self._func(premise, hypothesis)

    def classify_batch(self, pairs: Sequence[Pair]) -> list[ProbTriple]:
        return [self._func(premise, hypothesis) for premise, hypothesis in pairs]


class HeuristicMockBackend(_FunctionBackend):
    def __init__(self):
        super().__init__(heuristic_mock, identity="heuristic-mock/1")


class OracleMockBackend(_FunctionBackend):
    def __init__(self):
        super().__init__(oracle_mock, identity="oracle-mock/1")


# --- remote HTTP backend ----------------------------------------------------


def http_classify(
    endpoint: str,
    pairs: Sequence[Pair],
    *,
    max_batch: int = DEFAULT_MAX_BATCH,
    retries: int = DEFAULT_RETRIES,
    backoff: float = DEFAULT_BACKOFF,
    timeout: float = DEFAULT_TIMEOUT,
    session: requests.Session | None = None,
) -> list[ProbTriple]:
    """Classify one batch (at most ``max_batch`` pairs) over the wire protocol.

    Network failures and 5xx responses are retried with exponential backoff
    for ``retries`` total attempts; other non-200 responses and malformed
    bodies fail immediately. Results come back validated and in input order.
    An empty batch short-circuits without any network call.
    """
    if not pairs:
        return []
    if len(pairs) > max_batch:
        raise ValueError(f"batch of {len(pairs)} exceeds maximum {max_batch}")
    url = endpoint.rstrip("/") + "/v1/classify_batch"
    body = {"pairs": [{"premise": p, "hypothesis": h} for p, h in pairs]}
    post = (session or requests).post

    last_error: Exception | None = None
    for attempt in range(retries):
        if attempt:
            time.sleep(backoff * 2 ** (attempt - 1))
        try:
            response = post(url, json=body, timeout=timeout)
        except requests.RequestException as exc:
            last_error = exc
            continue
        if response.status_code >= 500:
            last_error = BackendError(f"{url} answered {response.status_code}")
            continue
        if response.status_code != 200:
            raise BackendError(f"{url} answered {response.status_code}: {response.text[:200]}")
        return _parse_probs(response, expected=len(pairs))
    raise BackendError(f"{url} failed after {retries} attempts: {last_error}") from last_error


def _parse_probs(response: requests.Response, expected: int) -> list[ProbTriple]:
    try:
        payload = response.json()
    except ValueError as exc:
        raise ProtocolError(f"response is not JSON: {exc}") from exc
    probs = payload.get("probs") if isinstance(payload, dict) else None
    if not isinstance(probs, list):
        raise ProtocolError("response lacks a 'probs' list")
    if len(probs) != expected:
        raise ProtocolError(f"expected {expected} probability rows, got {len(probs)}")
    triples: list[ProbTriple] = []
    for index, row in enumerate(probs):
        try:
            triples.append(ProbTriple.from_sequence(row))
        except (TypeError, ValueError) as exc:
            raise ProtocolError(f"invalid probabilities at index {index}: {exc}") from exc
    return triples


class HttpBackend:
    """Remote classifier speaking the wire protocol.

    Batches larger than ``max_batch`` are chunked; up to ``concurrency``
    chunks may be in flight at once, with results reassembled in input order.
    """

    def __init__(
        self,
        endpoint: str,
        *,
        max_batch: int = DEFAULT_MAX_BATCH,
        retries: int = DEFAULT_RETRIES,
        backoff: float = DEFAULT_BACKOFF,
        timeout: float = DEFAULT_TIMEOUT,
        concurrency: int = DEFAULT_CONCURRENCY,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.identity = self.endpoint
        self.max_batch = max_batch
        self.retries = retries
        self.backoff = backoff
        self.timeout = timeout
        self.concurrency = max(1, concurrency)
        self._session = requests.Session()

    def _call(self, pairs: Sequence[Pair]) -> list[ProbTriple]:
        return http_classify(
            self.endpoint,
            pairs,
            max_batch=self.max_batch,
            retries=self.retries,
            backoff=self.backoff,
            timeout=self.timeout,
            session=self._session,
        )

    def classify(self, premise: str, hypothesis: str) -> ProbTriple:
        return self._call([(premise, hypothesis)])[0]

    def classify_batch(self, pairs: Sequence[Pair]) -> list[ProbTriple]:
        pairs = list(pairs)
        if not pairs:
            return []
        chunks = [pairs[i : i + self.max_batch] for i in range(0, len(pairs), self.max_batch)]
        if len(chunks) == 1 or self.concurrency == 1:
            results: list[ProbTriple] = []
            for chunk in chunks:
                results.extend(self._call(chunk))
            return results
        with ThreadPoolExecutor(max_workers=self.concurrency) as pool:
            per_chunk = list(pool.map(self._call, chunks))
        return [triple for chunk in per_chunk for triple in chunk]


# --- record/replay cache ----------------------------------------------------


def cache_key(identity: str, premise: str, hypothesis: str) -> str:
    digest = hashlib.sha256()
    for part in (identity, premise, hypothesis):
        digest.update(part.encode("utf-8"))
        digest.update(b"\x00")
    return digest.hexdigest()


class CachedBackend:
    """Record/replay wrapper: hits served from a JSONL cache, misses forwarded
    and appended. In replay-only mode a miss is an error, which makes a fully
    populated cache a deterministic offline backend.

    Cache entries are {"key": hex, "probs": [p0, p1, p2]}; keys hash the
    backend identity so different models never share entries.
    """

    def __init__(self, inner: ClassifierBackend, cache_path: str | Path, *, replay_only: bool = False):
        self.inner = inner
        self.identity = inner.identity
        self.cache_path = Path(cache_path)
        self.replay_only = replay_only
        self._lock = threading.Lock()
        self._entries: dict[str, ProbTriple] = {}
        if self.cache_path.exists():
            self._load()

    def _load(self) -> None:
        for lineno, line in enumerate(
            self.cache_path.read_text(encoding="utf-8").splitlines(), start=1
        ):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                self._entries[record["key"]] = ProbTriple.from_sequence(record["probs"])
            except (KeyError, TypeError, ValueError) as exc:
                raise BackendError(
                    f"corrupt cache entry at {self.cache_path}:{lineno}: {exc}"
                ) from exc

    def _key(self, premise: str, hypothesis: str) -> str:
        return cache_key(self.inner.identity, premise, hypothesis)

    def _store(self, key: str, probs: ProbTriple) -> None:
        with self._lock:
            self._entries[key] = probs
            with self.cache_path.open("a", encoding="utf-8", newline="\n") as handle:
                handle.write(json.dumps({"key": key, "probs": probs.as_list()}))
                handle.write("\n")

    def classify(self, premise: str, hypothesis: str) -> ProbTriple:
        return self.classify_batch([(premise, hypothesis)])[0]

    def classify_batch(self, pairs: Sequence[Pair]) -> list[ProbTriple]:
        pairs = list(pairs)
        keys = [self._key(p, h) for p, h in pairs]
        results: list[ProbTriple | None] = [self._entries.get(key) for key in keys]
        miss_indices = [i for i, probs in enumerate(results) if probs is None]
        if miss_indices:
            if self.replay_only:
                i = miss_indices[0]
                raise CacheMissError(
                    f"replay-only cache has no entry {keys[i][:12]}… for pair "
                    f"({pairs[i][0][:40]!r}, {pairs[i][1][:40]!r})"
                )
            fetched = self.inner.classify_batch([pairs[i] for i in miss_indices])
            for i, probs in zip(miss_indices, fetched):
                self._store(keys[i], probs)
                results[i] = probs
        return results  # type: ignore[return-value]


class CountingBackend:
    """Delegating wrapper that counts logical classify calls; test aid."""

    def __init__(self, inner: ClassifierBackend):
        self.inner = inner
        self.identity = inner.identity
        self.calls = 0

    def classify(self, premise: str, hypothesis: str) -> ProbTriple:
        self.calls += 1
        return self.inner.classify(premise, hypothesis)

    def classify_batch(self, pairs: Sequence[Pair]) -> list[ProbTriple]:
        self.calls += len(pairs)
        return self.inner.classify_batch(pairs)


def make_backend(
    name_or_url: str,
    *,
    cache_path: str | Path | None = None,
    replay_only: bool = False,
    max_batch: int = DEFAULT_MAX_BATCH,
) -> ClassifierBackend:
    """Resolve a CLI backend argument: a mock name or an HTTP endpoint."""
    backend: ClassifierBackend
    if name_or_url == "heuristic-mock":
        backend = HeuristicMockBackend()
    elif name_or_url == "oracle-mock":
        backend = OracleMockBackend()
    elif name_or_url.startswith(("http://", "https://")):
        backend = HttpBackend(name_or_url, max_batch=max_batch)
    else:
        raise BackendError(
            f"unknown backend {name_or_url!r}; expected 'heuristic-mock', "
            "'oracle-mock', or an http(s) URL"
        )
    if cache_path is not None:
        backend = CachedBackend(backend, cache_path, replay_only=replay_only)
    return backend
