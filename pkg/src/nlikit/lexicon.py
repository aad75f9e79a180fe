"""Noun/verb lexicon extraction with a deterministic rule-based tagger.

The built-in tagger is word-level: a closed-class stoplist, an embedded seed
lexicon of common nouns and verb forms, and suffix heuristics for everything
else. It trades recall for determinism and zero dependencies; an external
word->tag table (one "token<TAB>tag" line per word) can replace it wholesale.

Lexicon file formats: nouns are one token per line; verbs are
"third_person<TAB>base" lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .records import NliExample


class LexiconError(ValueError):
    """Lexicon too small for generation, or a malformed lexicon file."""


# Determiners, pronouns, prepositions, conjunctions, auxiliaries and other
# closed-class words: never tagged NN or VBZ.
_CLOSED_CLASS = frozenset(
    """
    the a an this that these those some any each every either neither no
    i you he she it we they me him her us them my your his its our their
    mine yours hers ours theirs myself yourself himself herself itself
    ourselves themselves who whom whose which what
    of in on at by for with about against between into through during
    before after above below to from up down out off over under near
    and but or nor so yet because although while if unless since than
    whether though when where why how as
    is am are was were be been being do does did done have has had having
    will would can could shall should may might must
    not never very too also just only then there here all both few many
    more most other such again once now ever always often sometimes
    """.split()
)

# Seed nouns (singular common nouns seen in everyday NLI data).
_SEED_NOUNS = frozenset(
    """
    student teacher actor actress doctor nurse lawyer farmer driver singer
    dancer player writer artist chef waiter pilot soldier officer friend
    neighbor stranger child boy girl man woman person parent mother father
    brother sister baby king queen coach referee crowd team band choir
    dog cat horse bird fish monkey elephant lion tiger bear rabbit mouse
    snake cow sheep goat pig duck chicken
    ball bike car truck boat train plane bus wagon kite drum guitar piano
    violin trumpet camera phone computer radio clock lamp knife fork spoon
    plate cup bottle basket box bag hat coat shirt shoe glove scarf
    book letter song movie game race prize gift cake bread apple orange
    banana carrot potato salad soup dinner lunch breakfast
    tree flower garden park street road bridge house building school church
    store market kitchen room table chair window door wall floor roof fence
    city town village mountain river lake ocean beach field forest island
    sky cloud rain snow storm sun moon star fire rock sand grass leaf
    """.split()
)

# Seed verbs as third-person-singular -> base pairs. Regular forms also pass
# through the suffix rules; irregulars must be listed here.
_SEED_VERB_PAIRS: dict[str, str] = {
    "supports": "support",
    "sees": "see",
    "likes": "like",
    "loves": "love",
    "hates": "hate",
    "helps": "help",
    "holds": "hold",
    "carries": "carry",
    "watches": "watch",
    "teaches": "teach",
    "catches": "catch",
    "pushes": "push",
    "passes": "pass",
    "kisses": "kiss",
    "fixes": "fix",
    "mixes": "mix",
    "misses": "miss",
    "touches": "touch",
    "washes": "wash",
    "reads": "read",
    "writes": "write",
    "sings": "sing",
    "plays": "play",
    "throws": "throw",
    "kicks": "kick",
    "hits": "hit",
    "eats": "eat",
    "drinks": "drink",
    "drives": "drive",
    "rides": "ride",
    "follows": "follow",
    "leads": "lead",
    "meets": "meet",
    "greets": "greet",
    "calls": "call",
    "answers": "answer",
    "asks": "ask",
    "tells": "tell",
    "shows": "show",
    "gives": "give",
    "takes": "take",
    "brings": "bring",
    "sends": "send",
    "buys": "buy",
    "sells": "sell",
    "builds": "build",
    "breaks": "break",
    "opens": "open",
    "closes": "close",
    "moves": "move",
    "lifts": "lift",
    "pulls": "pull",
    "chases": "chase",
    "visits": "visit",
    "invites": "invite",
    "thanks": "thank",
    "blames": "blame",
    "trusts": "trust",
    "fears": "fear",
    "admires": "admire",
    "respects": "respect",
    "goes": "go",
}

_SEED_BASE_VERBS = frozenset(_SEED_VERB_PAIRS.values())

# Irregular de-inflections consulted before the suffix rules.
_IRREGULAR_BASES = {"goes": "go", "does": "do", "has": "have"}

_NOUN_SUFFIXES = ("ness", "ment", "ship", "tion", "sion", "ance", "ence", "ity", "ism")
_ADJ_SUFFIXES = ("ful", "ous", "ive", "able", "ible", "ical")
_VERB_PREFIXES = ("re", "un", "over", "out", "mis")

_TOKEN_RE = re.compile(r"[a-z]+")


def base_form(verb_3sg: str) -> str:
    """De-inflect a third-person-singular verb form.

    Irregulars come from a lookup table; otherwise: ies -> y, es after a
    sibilant -> strip es, else strip the final s.
    """
    if verb_3sg in _IRREGULAR_BASES:
        return _IRREGULAR_BASES[verb_3sg]
    if verb_3sg.endswith("ies") and len(verb_3sg) > 3:
        return verb_3sg[:-3] + "y"
    if verb_3sg.endswith(("ses", "zes", "xes", "ches", "shes")):
        return verb_3sg[:-2]
    if verb_3sg.endswith("s") and not verb_3sg.endswith("ss"):
        return verb_3sg[:-1]
    return verb_3sg


def rule_tag(token: str) -> str:
    """Tag a single lowercase token with a coarse part-of-speech tag."""
    if token in _CLOSED_CLASS:
        return "CLOSED"
    if token in _SEED_NOUNS:
        return "NN"
    if token in _SEED_VERB_PAIRS:
        return "VBZ"
    if token in _SEED_BASE_VERBS:
        return "VB"
    if any(ch.isdigit() for ch in token):
        return "CD"
    if len(token) < 2:
        return "SYM"
    if token.endswith(_NOUN_SUFFIXES):
        return "NN"
    if token.endswith("ing"):
        return "VBG"
    if token.endswith("ed"):
        return "VBD"
    if token.endswith("ly"):
        return "RB"
    if token.endswith(_ADJ_SUFFIXES):
        return "JJ"
    if token.endswith("s") and not token.endswith("ss"):
        # s-final unknowns are VBZ only when the de-inflected base (modulo a
        # common derivational prefix) is a known verb; otherwise treated as a
        # plural noun and not collected.
        return "VBZ" if _looks_like_base_verb(base_form(token)) else "NNS"
    return "NN"


def _looks_like_base_verb(base: str) -> bool:
    if base in _SEED_BASE_VERBS:
        return True
    return any(
        base.startswith(prefix) and base[len(prefix):] in _SEED_BASE_VERBS
        for prefix in _VERB_PREFIXES
    )


def tokenize(text: str) -> list[str]:
    """Lowercase alphabetic tokens, in order."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class Lexicon:
    """Singular nouns and (third_person, base) verb pairs for the generators."""

    nouns: list[str]
    verbs: list[tuple[str, str]]

    def validate(self) -> None:
        if len(set(self.nouns)) < 2:
            raise LexiconError(f"need at least 2 distinct nouns, have {len(set(self.nouns))}")
        if not self.verbs:
            raise LexiconError("need at least 1 verb pair, have 0")
        for entry in self.nouns:
            if not entry or any(ch.isspace() for ch in entry):
                raise LexiconError(f"bad noun entry {entry!r}")
        for third, base in self.verbs:
            if not third or not base or any(ch.isspace() for ch in third + base):
                raise LexiconError(f"bad verb entry {(third, base)!r}")


def builtin_lexicon() -> Lexicon:
    """The embedded seed word lists, usable without any corpus."""
    return Lexicon(
        nouns=sorted(_SEED_NOUNS),
        verbs=sorted(_SEED_VERB_PAIRS.items()),
    )


def extract_lexicon(
    corpus: Iterable[NliExample],
    tags: Mapping[str, str] | None = None,
) -> Lexicon:
    """Collect NN-tagged nouns and VBZ-tagged verbs from a corpus.

    ``tags`` replaces the built-in rule tagger with an external word->tag
    table; tokens absent from the table are ignored. Both output lists are
    deduplicated and sorted lexicographically so extraction is deterministic.
    """
    seen: set[str] = set()
    nouns: set[str] = set()
    verbs: set[str] = set()
    count = 0
    for example in corpus:
        count += 1
        for token in tokenize(example.premise) + tokenize(example.hypothesis):
            if token in seen:
                continue
            seen.add(token)
            tag = tags.get(token) if tags is not None else rule_tag(token)
            if tag == "NN":
                nouns.add(token)
            elif tag == "VBZ":
                verbs.add(token)
    if count == 0:
        raise LexiconError("corpus is empty")
    lexicon = Lexicon(
        nouns=sorted(nouns),
        verbs=sorted((third, base_form(third)) for third in verbs),
    )
    try:
        lexicon.validate()
    except LexiconError as exc:
        raise LexiconError(f"generation impossible: {exc}") from None
    return lexicon


def load_tag_table(path: str | Path) -> dict[str, str]:
    """Read an external "token<TAB>tag" table."""
    table: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconError(f"{path}:{lineno}: expected 'token<TAB>tag', got {line!r}")
        table[parts[0].strip().lower()] = parts[1].strip()
    return table


def save_lexicon(lexicon: Lexicon, nouns_path: str | Path, verbs_path: str | Path) -> None:
    Path(nouns_path).write_text("\n".join(lexicon.nouns) + "\n", encoding="utf-8")
    lines = [f"{third}\t{base}" for third, base in lexicon.verbs]
    Path(verbs_path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_lexicon(nouns_path: str | Path, verbs_path: str | Path) -> Lexicon:
    nouns = [line.strip() for line in Path(nouns_path).read_text(encoding="utf-8").splitlines() if line.strip()]
    verbs: list[tuple[str, str]] = []
    for lineno, line in enumerate(Path(verbs_path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise LexiconError(f"{verbs_path}:{lineno}: expected 'third_person<TAB>base', got {line!r}")
        verbs.append((parts[0].strip(), parts[1].strip()))
    lexicon = Lexicon(nouns=nouns, verbs=verbs)
    lexicon.validate()
    return lexicon
