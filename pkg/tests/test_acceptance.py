"""Acceptance suite: one test per release criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v` for the per-criterion verdicts.
Expected values here are frozen from independent re-derivations (regex
parse-back plus direct integer comparison, literal algorithm transcription,
hand-stepped rule cascades); they never call the code path under test to
compute what it should return.
"""

import json
import random
import re
import time

import pytest

from nlikit.augment import AugConfig, gen_numeric, gen_overlap
from nlikit.backend import (
    BackendError,
    HeuristicMockBackend,
    HttpBackend,
    OracleMockBackend,
    ProtocolError,
    http_classify,
)
from nlikit.cli import main
from nlikit.contract import verify_backend_contract, verify_cache_equivalence
from nlikit.ingest import read_dataset, write_dataset
from nlikit.lexicon import builtin_lexicon
from nlikit.records import Label, NliExample, ProbTriple
from nlikit.split import SplitConfig, classify_plain, classify_split

from stubserver import StubNliServer, hash_probs


def _report(name):
    print(f"ACCEPTANCE PASS: {name}")


# --- criterion: numeric label oracle ---------------------------------------

_PREMISE_RE = re.compile(r"^He \((-?\d+) - (-?\d+)\)\.$")
_HYPOTHESIS_RE = re.compile(r"^He (?:was born|died) (before|after) (-?\d+)\.$")


def _independent_numeric_label(premise: str, hypothesis: str) -> int:
    """Truth-conditional oracle: parse the rendered strings, evaluate the
    claim by direct integer comparison, entail iff true."""
    birth, death = map(int, _PREMISE_RE.match(premise).groups())
    relation, year = _HYPOTHESIS_RE.match(hypothesis).groups()
    year = int(year)
    event = birth if "born" in hypothesis else death
    claim_is_true = event < year if relation == "before" else event > year
    return 0 if claim_is_true else 2


def test_numeric_label_oracle_10k():
    start = time.perf_counter()
    examples = gen_numeric(AugConfig(seed=20240817, count=10_000))
    assert len(examples) == 10_000
    disagreements = sum(
        1
        for e in examples
        if int(e.gold) != _independent_numeric_label(e.premise, e.hypothesis)
    )
    elapsed = time.perf_counter() - start
    assert disagreements == 0, f"{disagreements} label disagreements"
    assert elapsed < 5.0, f"took {elapsed:.2f}s, budget 5s"
    _report(f"numeric label oracle: 10,000/10,000 agree in {elapsed:.2f}s")


# --- criterion: overlap scheme soundness ------------------------------------

_WORD_RE = re.compile(r"[0-9a-z]+")

_VOWELS = "aeiou"


def _inflect_3sg(base: str) -> str:
    """Independent re-inflection: the negated premise's base verb must map
    back to exactly the inflected verb used in the positive premises."""
    if base.endswith(("s", "sh", "ch", "x", "z", "o")):
        return base + "es"
    if base.endswith("y") and len(base) > 1 and base[-2] not in _VOWELS:
        return base[:-1] + "ies"
    return base + "s"


def test_overlap_scheme_soundness_3k():
    start = time.perf_counter()
    examples = gen_overlap(builtin_lexicon(), AugConfig(seed=7, count=1000))
    assert len(examples) == 3000

    positive = re.compile(r"^The (\S+) (\S+) the (\S+)\.$")
    negated = re.compile(r"^The (\S+) does not (\S+) the (\S+)\.$")
    label_counts = {0: 0, 1: 0, 2: 0}
    for i in range(0, 3000, 3):
        p1, p2, p3 = examples[i : i + 3]
        hypothesis = p1.hypothesis
        assert p2.hypothesis == hypothesis and p3.hypothesis == hypothesis
        # P1 is the hypothesis verbatim -> 100% token-set overlap
        assert p1.premise == hypothesis
        tokens_p = set(_WORD_RE.findall(p1.premise.lower()))
        tokens_h = set(_WORD_RE.findall(hypothesis.lower()))
        assert tokens_p == tokens_h
        # P3 swaps the two nouns, keeping the inflected verb
        n1, verb, n2 = positive.match(hypothesis).groups()
        assert positive.match(p3.premise).groups() == (n2, verb, n1)
        # P2 negates with "does not" plus the de-inflected base
        m1, base, m2 = negated.match(p2.premise).groups()
        assert (m1, m2) == (n1, n2)
        assert _inflect_3sg(base) == verb
        # exact label assignment 0 / 2 / 1
        assert (int(p1.gold), int(p2.gold), int(p3.gold)) == (0, 2, 1)
        for e in (p1, p2, p3):
            label_counts[int(e.gold)] += 1
    elapsed = time.perf_counter() - start
    assert label_counts == {0: 1000, 1: 1000, 2: 1000}
    assert elapsed < 2.0, f"took {elapsed:.2f}s, budget 2s"
    _report(f"overlap scheme soundness: 3,000 examples verified in {elapsed:.2f}s")


# --- criterion: split reference equivalence ----------------------------------


def _alg1_transcription(prob_rows, cutoff):
    # literal while-loop transcription, nothing shared with the production path
    i = 0
    n = len(prob_rows)
    while i < n:
        v = prob_rows[i]
        if v[0] > cutoff:
            return 0
        elif v[2] > cutoff:
            return 2
        i = i + 1
    return 1


class _PlannedBackend:
    identity = "planned/1"

    def __init__(self, plan):
        self.plan = plan

    def classify(self, premise, hypothesis):
        return ProbTriple.from_sequence(self.plan[premise])

    def classify_batch(self, pairs):
        return [self.classify(p, h) for p, h in pairs]


def test_split_reference_equivalence_10k_fuzz():
    rng = random.Random(97)
    cutoffs = (0.3, 0.5, 0.8, 0.95)
    start = time.perf_counter()
    boundary_cases = 0
    for _ in range(10_000):
        cutoff = rng.choice(cutoffs)
        rows = []
        for _ in range(rng.randint(0, 10)):
            if rng.random() < 0.2:
                # boundary row: one checked component exactly at the cutoff
                rest = 1.0 - cutoff
                x = rng.uniform(0.0, rest)
                row = [cutoff, x, rest - x] if rng.random() < 0.5 else [rest - x, x, cutoff]
                boundary_cases += 1
            else:
                weights = [rng.random() + 1e-9 for _ in range(3)]
                total = sum(weights)
                row = [w / total for w in weights]
            rows.append(row)
        segments = [f"seg{j:02d}." for j in range(len(rows))]
        backend = _PlannedBackend(dict(zip(segments, rows)))
        got = classify_split(backend, " ".join(segments), "H.", SplitConfig(cutoff=cutoff))
        assert int(got) == _alg1_transcription(rows, cutoff)
    elapsed = time.perf_counter() - start
    assert boundary_cases > 1000
    assert elapsed < 5.0, f"took {elapsed:.2f}s, budget 5s"
    _report(
        f"split reference equivalence: 10,000 fuzz cases ({boundary_cases} at the "
        f"exact cutoff) in {elapsed:.2f}s"
    )


# --- criterion: documented failure-mode regression ---------------------------


def test_failure_mode_regression():
    word_overlap_premise = "The student supports the teacher."
    word_overlap_hypothesis = "The teacher supports the student."
    # the flawed heuristic answers entailment: the documented wrong answer
    label, _ = classify_plain(HeuristicMockBackend(), word_overlap_premise, word_overlap_hypothesis)
    assert label == Label.ENTAILMENT
    # the oracle answers the gold labels on both documented cases
    oracle = OracleMockBackend()
    gold1, _ = classify_plain(oracle, word_overlap_premise, word_overlap_hypothesis)
    assert gold1 == Label.NEUTRALITY
    gold2, _ = classify_plain(oracle, "He (born in 1935) was an actor.", "He was born before 1934.")
    assert gold2 == Label.CONTRADICTION
    _report("failure-mode regression: heuristic reproduces the wrong answer, oracle the gold ones")


# --- criterion: length-mismatch demonstration --------------------------------


def test_length_mismatch_demonstration():
    premise = "He was an actor for decades. He lived in Paris. He (1935 - 1990)."
    hypothesis = "He was born before 1934."
    oracle = OracleMockBackend()
    plain_label, plain_probs = classify_plain(oracle, premise, hypothesis)
    assert plain_label == Label.NEUTRALITY  # concatenation matches no template
    assert plain_probs.as_list() == [0.10, 0.80, 0.10]
    split_label = classify_split(oracle, premise, hypothesis, SplitConfig(cutoff=0.8))
    assert split_label == Label.CONTRADICTION  # the last sentence answers it
    _report("length-mismatch demonstration: plain neutral, split recovers the gold label")


# --- criterion: command determinism ------------------------------------------


def test_command_determinism(tmp_path):
    def run(argv):
        assert main([str(a) for a in argv]) == 0

    outputs = []
    for kind in ("overlap", "numeric", "mixed"):
        for attempt in (1, 2):
            out = tmp_path / f"aug-{kind}-{attempt}.jsonl"
            run(["augment", "--kind", kind, "--count", 40, "--seed", 11, "--out", out])
            outputs.append(out)
    for first, second in zip(outputs[::2], outputs[1::2]):
        assert first.read_bytes() == second.read_bytes()

    dataset = tmp_path / "aug-mixed-1.jsonl"
    pred_outputs = []
    for backend in ("heuristic-mock", "oracle-mock"):
        for technique in ("plain", "split"):
            for attempt in (1, 2):
                out = tmp_path / f"pred-{backend}-{technique}-{attempt}.jsonl"
                run(["predict", "--dataset", dataset, "--backend", backend,
                     "--technique", technique, "--out", out])
                pred_outputs.append(out)
    for first, second in zip(pred_outputs[::2], pred_outputs[1::2]):
        assert first.read_bytes() == second.read_bytes()
    _report("determinism: augment and predict byte-identical across re-runs")


# --- criterion: format round-trips --------------------------------------------


def _random_text(rng):
    pools = [
        "abcdefghijklmnopqrstuvwxyz ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789",
        " .,;:!?\"'()[]{}\\/|-+=*&^%$#@~`",
        "äöüßéèêñçåøæ中文字テキスト русский",
    ]
    length = rng.randint(1, 60)
    text = "".join(rng.choice(rng.choice(pools)) for _ in range(length))
    return text if text.strip() else "x"


def test_format_round_trips(tmp_path):
    rng = random.Random(2024)
    examples = [
        NliExample(
            id=f"rt-{i}",
            premise=_random_text(rng),
            hypothesis=_random_text(rng),
            gold=rng.choice([None, Label.ENTAILMENT, Label.NEUTRALITY, Label.CONTRADICTION]),
            source=rng.choice(["", "snli", "aug-overlap"]),
        )
        for i in range(1000)
    ]
    path = tmp_path / "round.jsonl"
    assert write_dataset(examples, path) == 1000
    loaded, report = read_dataset(path)
    assert loaded == examples
    assert report.reconciles() and report.emitted == 1000

    snli = tmp_path / "snli.jsonl"
    snli_rows = [
        {"pairID": "a", "sentence1": "A dog runs.", "sentence2": "An animal moves.", "gold_label": "entailment"},
        {"sentence1": "A cat sits.", "sentence2": "A cat stands.", "gold_label": "-"},
        {"sentence1": "Kids play.", "sentence2": "Children rest.", "gold_label": "contradiction"},
        {"sentence1": "It rains.", "sentence2": "It pours.", "gold_label": "-"},
    ]
    snli.write_text("\n".join(json.dumps(r) for r in snli_rows) + "\n")
    loaded, report = read_dataset(snli, "snli_style")
    assert [e.gold for e in loaded] == [Label.ENTAILMENT, Label.CONTRADICTION]
    assert loaded[0].premise == "A dog runs." and loaded[0].hypothesis == "An animal moves."
    assert report.read == 4 and report.skipped_unlabeled == 2 and report.emitted == 2

    anli = tmp_path / "anli.jsonl"
    anli.write_text(json.dumps({"uid": "u9", "context": "Ctx.", "hypothesis": "Hyp.", "label": "n"}) + "\n")
    loaded, _ = read_dataset(anli, "anli_style")
    assert loaded[0].premise == "Ctx." and loaded[0].gold == Label.NEUTRALITY
    _report("format round-trips: 1,000-example identity plus snli/anli field maps and '-' skips")


# --- criterion: report arithmetic ---------------------------------------------


def test_report_arithmetic():
    printed_cells = [0.306, 0.308, 0.300, 0.491, 0.706, 0.882]
    assert sum(printed_cells) / len(printed_cells) == pytest.approx(0.499, abs=1e-3)

    from nlikit.evaluate import EvalReport, emit_report

    datasets = ["anli_r1", "anli_r2", "anli_r3", "hans", "multinli", "snli"]
    reports = [
        EvalReport(
            dataset=d, technique="plain", n=1000, correct=int(a * 1000),
            accuracy=a, confusion=[[0] * 3 for _ in range(3)], trained_on="snli",
        )
        for d, a in zip(datasets, printed_cells)
    ]
    table = emit_report(reports, "csv")
    row = table.splitlines()[1].split(",")
    assert row[-1] == "0.499"
    assert row[2:-1] == ["0.306", "0.308", "0.300", "0.491", "0.706", "0.882"]
    _report("report arithmetic: six-column average 0.499 reproduced")


# --- criterion: protocol contract suite ----------------------------------------


def test_protocol_contract_suite(tmp_path):
    # order preservation, index-aligned, on a conformant stub
    with StubNliServer() as server:
        backend = HttpBackend(server.url, max_batch=4, concurrency=3)
        verify_backend_contract(backend)
        pairs = [(f"p{i}.", f"h{i}.") for i in range(17)]
        results = backend.classify_batch(pairs)
        assert [r.as_list() for r in results] == [
            pytest.approx(hash_probs(p, h)) for p, h in pairs
        ]
        # cache observational equivalence over the live backend
        verify_cache_equivalence(HttpBackend(server.url), tmp_path / "cache.jsonl")

    # normalization rejection
    with StubNliServer("unnormalized") as server:
        with pytest.raises(ProtocolError):
            http_classify(server.url, [("A.", "B.")])

    # retry-then-fail: three attempts against a permanently failing server
    with StubNliServer("error") as server:
        with pytest.raises(BackendError, match="3 attempts"):
            http_classify(server.url, [("A.", "B.")], backoff=0.01)
        assert server.requests == 3
    _report("protocol contract suite: order, normalization, retry-then-fail, cache equivalence")
