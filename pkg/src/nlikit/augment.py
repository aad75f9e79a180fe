"""Seed-reproducible template generators for the two augmentation corpora.

Overlap triples: one noun/noun/verb draw yields three premises against the
fixed hypothesis "The n1 <verb> the n2." — the identical premise (entailment),
the negated premise (contradiction), and the argument-swapped premise
(neutrality). n1 and n2 are forced distinct: with n1 = n2 the identical and
swapped premises would render the same string under conflicting labels.

Year pairs: a premise "He (birth - death)." plus one of four hypothesis
templates comparing a queried year against the birth or death year, with
strict comparisons (equality falls to contradiction).

Both generators are pure functions of (lexicon, seed, count): two runs with
the same inputs emit byte-identical files.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

from .lexicon import Lexicon
from .records import Label, NliExample

BIRTH_YEAR_MIN = 0
BIRTH_YEAR_MAX = 2020
MAX_LIFESPAN = 100
QUERY_WINDOW = 100

QUERY_KINDS = ("born_before", "born_after", "died_before", "died_after")

OVERLAP_SOURCE = "aug-overlap"
NUMERIC_SOURCE = "aug-numeric"

_POSITIVE_RE = re.compile(r"^The (\S+) (\S+) the (\S+)\.$")
_NEGATED_RE = re.compile(r"^The (\S+) does not (\S+) the (\S+)\.$")
_YEARS_PREMISE_RE = re.compile(r"^He \((-?\d+) - (-?\d+)\)\.$")
_BORN_IN_PREMISE_RE = re.compile(r"^He \(born in (-?\d+)\)")
_BORN_HYPOTHESIS_RE = re.compile(r"^He was born (before|after) (-?\d+)\.$")
_DIED_HYPOTHESIS_RE = re.compile(r"^He died (before|after) (-?\d+)\.$")


@dataclass(frozen=True)
class AugConfig:
    """Generator settings: RNG seed, number of template instantiations, and
    the per-generator proportions used by the mixed kind."""

    seed: int = 0
    count: int = 1000
    mix: dict[str, float] = field(default_factory=lambda: {"overlap": 0.5, "numeric": 0.5})

    def __post_init__(self) -> None:
        if self.count < 0:
            raise ValueError(f"count must be >= 0, got {self.count}")
        total = sum(self.mix.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"mix proportions sum to {total}, not 1")


@dataclass(frozen=True)
class OverlapDraw:
    n1: str
    n2: str
    verb: tuple[str, str]

    def __post_init__(self) -> None:
        if self.n1 == self.n2:
            raise ValueError(f"overlap draw needs distinct nouns, got {self.n1!r} twice")


@dataclass(frozen=True)
class YearFact:
    birth: int
    death: int

    def __post_init__(self) -> None:
        if not BIRTH_YEAR_MIN <= self.birth <= BIRTH_YEAR_MAX:
            raise ValueError(f"birth year {self.birth} outside [{BIRTH_YEAR_MIN}, {BIRTH_YEAR_MAX}]")
        if not self.birth + 1 <= self.death <= self.birth + MAX_LIFESPAN:
            raise ValueError(
                f"death year {self.death} outside [{self.birth + 1}, {self.birth + MAX_LIFESPAN}]"
            )


@dataclass(frozen=True)
class YearQuery:
    kind: str
    year: int

    def __post_init__(self) -> None:
        if self.kind not in QUERY_KINDS:
            raise ValueError(f"unknown query kind {self.kind!r}")

    def in_window(self, fact: YearFact) -> bool:
        anchor = fact.birth if self.kind.startswith("born") else fact.death
        return anchor - QUERY_WINDOW <= self.year <= anchor + QUERY_WINDOW


def compare_year(kind: str, anchor: int, year: int) -> Label:
    """Strict-comparison labeling shared by the generator and the oracle mock.

    ``anchor`` is the event year (birth for born_*, death for died_*). The
    "before" kinds entail when the queried year is strictly greater than the
    anchor, the "after" kinds when strictly smaller; equality contradicts.
    """
    if kind.endswith("before"):
        return Label.ENTAILMENT if year > anchor else Label.CONTRADICTION
    return Label.ENTAILMENT if year < anchor else Label.CONTRADICTION


def label_year_query(fact: YearFact, query: YearQuery) -> Label:
    anchor = fact.birth if query.kind.startswith("born") else fact.death
    return compare_year(query.kind, anchor, query.year)


def render_positive(n1: str, verb_3sg: str, n2: str) -> str:
    return f"The {n1} {verb_3sg} the {n2}."


def render_negated(n1: str, verb_base: str, n2: str) -> str:
    return f"The {n1} does not {verb_base} the {n2}."


def render_years_premise(fact: YearFact) -> str:
    return f"He ({fact.birth} - {fact.death})."


def render_year_hypothesis(query: YearQuery) -> str:
    event, _, relation = query.kind.partition("_")
    if event == "born":
        return f"He was born {relation} {query.year}."
    return f"He died {relation} {query.year}."


def parse_positive(sentence: str) -> tuple[str, str, str] | None:
    """(n1, verb_3sg, n2) from "The n1 v the n2.", or None."""
    match = _POSITIVE_RE.match(sentence)
    return match.groups() if match else None  # type: ignore[return-value]


def parse_negated(sentence: str) -> tuple[str, str, str] | None:
    """(n1, verb_base, n2) from "The n1 does not v the n2.", or None."""
    match = _NEGATED_RE.match(sentence)
    return match.groups() if match else None  # type: ignore[return-value]


def parse_years_premise(premise: str) -> tuple[int, int | None] | None:
    """(birth, death) from "He (i1 - i2)." or (birth, None) from "He (born in i1) ..."."""
    match = _YEARS_PREMISE_RE.match(premise)
    if match:
        return int(match.group(1)), int(match.group(2))
    match = _BORN_IN_PREMISE_RE.match(premise)
    if match:
        return int(match.group(1)), None
    return None


def parse_year_hypothesis(hypothesis: str) -> YearQuery | None:
    match = _BORN_HYPOTHESIS_RE.match(hypothesis)
    if match:
        return YearQuery(kind=f"born_{match.group(1)}", year=int(match.group(2)))
    match = _DIED_HYPOTHESIS_RE.match(hypothesis)
    if match:
        return YearQuery(kind=f"died_{match.group(1)}", year=int(match.group(2)))
    return None


def _draw_overlap(rng: random.Random, lexicon: Lexicon) -> OverlapDraw:
    n1 = rng.choice(lexicon.nouns)
    n2 = rng.choice(lexicon.nouns)
    while n2 == n1:
        n2 = rng.choice(lexicon.nouns)
    return OverlapDraw(n1=n1, n2=n2, verb=rng.choice(lexicon.verbs))


def gen_overlap(lexicon: Lexicon, config: AugConfig) -> list[NliExample]:
    """Emit 3 * config.count examples: one labeled triple per draw."""
    lexicon.validate()
    rng = random.Random(config.seed)
    examples: list[NliExample] = []
    for index in range(config.count):
        draw = _draw_overlap(rng, lexicon)
        third, base = draw.verb
        hypothesis = render_positive(draw.n1, third, draw.n2)
        variants = (
            ("p1", hypothesis, Label.ENTAILMENT),
            ("p2", render_negated(draw.n1, base, draw.n2), Label.CONTRADICTION),
            ("p3", render_positive(draw.n2, third, draw.n1), Label.NEUTRALITY),
        )
        for suffix, premise, gold in variants:
            examples.append(
                NliExample(
                    id=f"{OVERLAP_SOURCE}-{index:06d}-{suffix}",
                    premise=premise,
                    hypothesis=hypothesis,
                    gold=gold,
                    source=OVERLAP_SOURCE,
                )
            )
    return examples


def gen_numeric(config: AugConfig) -> list[NliExample]:
    """Emit config.count year-comparison examples, one query kind each."""
    rng = random.Random(config.seed)
    examples: list[NliExample] = []
    for index in range(config.count):
        birth = rng.randint(BIRTH_YEAR_MIN, BIRTH_YEAR_MAX)
        death = rng.randint(birth + 1, birth + MAX_LIFESPAN)
        fact = YearFact(birth=birth, death=death)
        kind = rng.choice(QUERY_KINDS)
        anchor = birth if kind.startswith("born") else death
        query = YearQuery(kind=kind, year=rng.randint(anchor - QUERY_WINDOW, anchor + QUERY_WINDOW))
        examples.append(
            NliExample(
                id=f"{NUMERIC_SOURCE}-{index:06d}",
                premise=render_years_premise(fact),
                hypothesis=render_year_hypothesis(query),
                gold=label_year_query(fact, query),
                source=NUMERIC_SOURCE,
            )
        )
    return examples


def gen_mixed(lexicon: Lexicon, config: AugConfig) -> list[NliExample]:
    """Split config.count instantiations between the generators per config.mix.

    Each generator runs on its own RNG stream seeded from config.seed, so the
    mixed output is as reproducible as the individual kinds.
    """
    overlap_share = config.mix.get("overlap", 0.0)
    overlap_count = round(config.count * overlap_share)
    numeric_count = config.count - overlap_count
    overlap_cfg = AugConfig(seed=config.seed, count=overlap_count, mix=config.mix)
    numeric_cfg = AugConfig(seed=config.seed + 1, count=numeric_count, mix=config.mix)
    return gen_overlap(lexicon, overlap_cfg) + gen_numeric(numeric_cfg)
