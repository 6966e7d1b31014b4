"""Deterministic text primitives shared by every verifier.

Tokenization, sentence-level claim segmentation, checkability
classification, and the cosine similarity function that acts as the
single matching oracle across the source, double-check, and compare
verifiers. Everything here is a pure function: no models, no state,
bit-for-bit reproducible across runs and processes.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from math import sqrt
from pathlib import Path

# Maximal runs of letters/digits; underscore and punctuation are separators.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Sentence terminator runs. A run of two or more dots with no other
# terminator is an ellipsis and does not split.
_TERMINATOR_RUN_RE = re.compile(r"[.!?\n]+")

# Function words only: articles, conjunctions, prepositions, pronouns.
# Copular and auxiliary verbs are deliberately absent so that short
# predications such as "the home screen is cluttered" keep enough
# content tokens to count as checkable.
DEFAULT_STOPWORDS = frozenset(
    """
    a an the this that these those there here
    and or but if so than then because
    of to in on at by for with from as into about
    over under between through during after before
    i you he she it we they me him her us them
    my your his its our their
    s t d ll re ve m
    """.split()
)

# A claim opening with one of these reads as opinion, not assertion.
DEFAULT_HEDGING_MARKERS = (
    "maybe",
    "perhaps",
    "i think",
    "in my opinion",
)

MIN_CONTENT_TOKENS = 4


@dataclass(frozen=True)
class Claim:
    """A verifiable sentence-level unit extracted from a response.

    ``span`` is a 0-based half-open character range into the owning
    response text; the raw slice equals ``text`` modulo surrounding
    whitespace.
    """

    id: str
    response_id: str
    text: str
    span: tuple[int, int]
    checkable: bool

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "response_id": self.response_id,
            "text": self.text,
            "span": list(self.span),
            "checkable": self.checkable,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Claim":
        return cls(
            id=raw["id"],
            response_id=raw["response_id"],
            text=raw["text"],
            span=(raw["span"][0], raw["span"][1]),
            checkable=raw["checkable"],
        )


def tokenize(text: str) -> list[str]:
    """Lowercased maximal letter/digit runs; punctuation discarded."""
    return _TOKEN_RE.findall(text.lower())


def load_wordlist(path: str | Path) -> frozenset[str]:
    """Read one entry per line from a UTF-8 file, skipping blanks."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return frozenset(line.strip().lower() for line in lines if line.strip())


def load_markers(path: str | Path) -> tuple[str, ...]:
    """Read hedging markers, one per line, preserving file order."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return tuple(line.strip().lower() for line in lines if line.strip())


def classify_checkability(
    claim_text: str,
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
    hedging_markers: tuple[str, ...] = DEFAULT_HEDGING_MARKERS,
) -> bool:
    """Decide whether a claim is worth sending to a verifier.

    Interrogatives, hedged openers, and fragments with fewer than
    four content tokens are not checkable.
    """
    text = claim_text.strip()
    if text.endswith("?"):
        return False
    lowered = text.lower()
    for marker in hedging_markers:
        if lowered.startswith(marker):
            rest = lowered[len(marker):]
            if not rest or not rest[0].isalnum():
                return False
    content = [tok for tok in tokenize(text) if tok not in stopwords]
    return len(content) >= MIN_CONTENT_TOKENS


def _separator_runs(text: str) -> list[tuple[int, int]]:
    runs = []
    for m in _TERMINATOR_RUN_RE.finditer(text):
        if m.end() == len(text):
            continue  # trailing terminators stay attached to the last segment
        run = m.group()
        if len(run) >= 2 and set(run) == {"."}:
            continue  # ellipsis
        runs.append((m.start(), m.end()))
    return runs


def segment_claims(
    response_id: str,
    text: str,
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
    hedging_markers: tuple[str, ...] = DEFAULT_HEDGING_MARKERS,
) -> list[Claim]:
    """Split a response into sentence claims with source spans.

    Interior terminator runs separate segments and belong to no span;
    a trailing run (including a final "?" or "!") stays part of the
    last claim so the interrogative rule can see it. Whitespace-only
    segments are dropped.
    """
    claims: list[Claim] = []
    cursor = 0
    boundaries = _separator_runs(text) + [(len(text), len(text))]
    for run_start, run_end in boundaries:
        segment = text[cursor:run_start]
        stripped = segment.strip()
        if stripped:
            claims.append(
                Claim(
                    id=f"{response_id}:c{len(claims)}",
                    response_id=response_id,
                    text=stripped,
                    span=(cursor, run_start),
                    checkable=classify_checkability(
                        stripped, stopwords, hedging_markers
                    ),
                )
            )
        cursor = run_end
    return claims


def similarity(a: str, b: str) -> float:
    """Cosine similarity of unigram term-frequency vectors in [0, 1].

    Returns 0.0 when either side has no tokens. The denominator is
    sqrt(|a|^2 * |b|^2) over integer norms, so identical inputs score
    exactly 1.0 and the function is exactly symmetric.
    """
    return counter_cosine(Counter(tokenize(a)), Counter(tokenize(b)))


def counter_cosine(freq_a: Counter, freq_b: Counter) -> float:
    """Cosine over two term-frequency counters; the shared kernel."""
    if not freq_a or not freq_b:
        return 0.0
    if len(freq_b) < len(freq_a):
        freq_a, freq_b = freq_b, freq_a
    dot = sum(count * freq_b[tok] for tok, count in freq_a.items())
    if dot == 0:
        return 0.0
    norm_sq_a = sum(c * c for c in freq_a.values())
    norm_sq_b = sum(c * c for c in freq_b.values())
    value = dot / sqrt(norm_sq_a * norm_sq_b)
    return min(1.0, max(0.0, value))
