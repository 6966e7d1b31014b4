"""Corpus-grounded citation matching for response claims.

Documents a team has collected (usability test results, research
notes) are chunked and indexed; each checkable claim of a response is
matched against the index and every sufficiently similar chunk becomes
a citation. Retrieval is an inverted token index with exact cosine
scoring, so results are identical to brute force over all chunks; no
approximate search, no model dependency.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from math import sqrt
from threading import Lock

from .errors import DuplicateDocument, EmptyDocument, EmptyIndex, UnknownResponse
from .providers import utc_now_iso
from .text_analysis import Claim, tokenize

_TOKEN_SPAN_RE = re.compile(r"[^\W_]+", re.UNICODE)

DEFAULT_MAX_CHUNK_TOKENS = 200
DEFAULT_CHUNK_OVERLAP = 40
DEFAULT_TAU_SOURCE = 0.5
DEFAULT_THETA_SOURCE_PASS = 0.8
DEFAULT_TOP_K = 5


@dataclass(frozen=True)
class CorpusDocument:
    doc_id: str
    title: str
    body: str
    ingested_at: str = field(default_factory=utc_now_iso)
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "title": self.title,
            "body": self.body,
            "ingested_at": self.ingested_at,
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "CorpusDocument":
        return cls(
            doc_id=raw["doc_id"],
            title=raw["title"],
            body=raw["body"],
            ingested_at=raw["ingested_at"],
            metadata=raw.get("metadata", {}),
        )


@dataclass(frozen=True)
class Chunk:
    doc_id: str
    seq: int
    text: str
    token_count: int


@dataclass(frozen=True)
class SourceCitation:
    claim_id: str
    doc_id: str
    chunk_seq: int
    similarity: float
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "doc_id": self.doc_id,
            "chunk_seq": self.chunk_seq,
            "similarity": self.similarity,
            "message": self.message,
        }


@dataclass(frozen=True)
class SourceVerification:
    response_id: str
    citations: list[SourceCitation]
    coverage: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "response_id": self.response_id,
            "citations": [c.to_dict() for c in self.citations],
            "coverage": self.coverage,
            "passed": self.passed,
        }


def chunk_document(
    doc: CorpusDocument,
    max_tokens: int = DEFAULT_MAX_CHUNK_TOKENS,
    overlap: int = DEFAULT_CHUNK_OVERLAP,
) -> list[Chunk]:
    """Cut a document into overlapping token windows.

    Windows are ``max_tokens`` long and advance by ``max_tokens -
    overlap``, so consecutive chunks share ``overlap`` tokens and no
    sentence is lost on a boundary. Chunk text is the original body
    slice between the first and last token of the window.
    """
    if overlap >= max_tokens:
        raise ValueError("overlap must be smaller than max_tokens")
    spans = [m.span() for m in _TOKEN_SPAN_RE.finditer(doc.body)]
    if not spans:
        return []
    step = max_tokens - overlap
    chunks: list[Chunk] = []
    start = 0
    while start < len(spans):
        window = spans[start : start + max_tokens]
        text = doc.body[window[0][0] : window[-1][1]]
        chunks.append(
            Chunk(
                doc_id=doc.doc_id,
                seq=len(chunks),
                text=text,
                token_count=len(window),
            )
        )
        if start + max_tokens >= len(spans):
            break
        start += step
    return chunks


class CorpusIndex:
    """Inverted token index over corpus chunks with exact cosine scores.

    Concurrent readers are safe; ingestion takes the writer lock.
    """

    def __init__(
        self,
        max_chunk_tokens: int = DEFAULT_MAX_CHUNK_TOKENS,
        chunk_overlap: int = DEFAULT_CHUNK_OVERLAP,
    ):
        self.max_chunk_tokens = max_chunk_tokens
        self.chunk_overlap = chunk_overlap
        self.documents: dict[str, CorpusDocument] = {}
        self._chunks: list[Chunk] = []
        self._chunk_norm_sq: list[int] = []
        self._postings: dict[str, list[tuple[int, int]]] = {}
        self._write_lock = Lock()

    def __len__(self) -> int:
        return len(self._chunks)

    @property
    def chunks(self) -> list[Chunk]:
        return list(self._chunks)

    def ingest_document(self, doc: CorpusDocument) -> int:
        """Chunk and index a document; returns the chunk count.

        Re-ingesting an existing doc_id is an error, not an upsert.
        """
        with self._write_lock:
            if doc.doc_id in self.documents:
                raise DuplicateDocument(f"document '{doc.doc_id}' already ingested")
            if not doc.body or not doc.body.strip():
                raise EmptyDocument(f"document '{doc.doc_id}' has an empty body")
            chunks = chunk_document(doc, self.max_chunk_tokens, self.chunk_overlap)
            if not chunks:
                raise EmptyDocument(f"document '{doc.doc_id}' has no tokens")
            self.documents[doc.doc_id] = doc
            for chunk in chunks:
                ordinal = len(self._chunks)
                self._chunks.append(chunk)
                freq = Counter(tokenize(chunk.text))
                self._chunk_norm_sq.append(sum(c * c for c in freq.values()))
                for token, count in freq.items():
                    self._postings.setdefault(token, []).append((ordinal, count))
            return len(chunks)

    def retrieve(self, query: str, k: int) -> list[tuple[Chunk, float]]:
        """Top-k chunks by cosine similarity to the query.

        Exactly min(k, chunk count) results, similarity descending,
        ties broken by (doc_id, seq) ascending. Zero-similarity chunks
        fill the tail when the corpus has fewer matches than k.
        """
        if not self._chunks:
            raise EmptyIndex("no documents ingested")
        if k <= 0:
            raise ValueError("k must be positive")
        query_freq = Counter(tokenize(query))
        query_norm_sq = sum(c * c for c in query_freq.values())
        dots = [0] * len(self._chunks)
        if query_norm_sq:
            for token, q_count in query_freq.items():
                for ordinal, c_count in self._postings.get(token, ()):
                    dots[ordinal] += q_count * c_count
        scored = []
        for ordinal, chunk in enumerate(self._chunks):
            dot = dots[ordinal]
            if dot:
                value = dot / sqrt(query_norm_sq * self._chunk_norm_sq[ordinal])
                score = min(1.0, max(0.0, value))
            else:
                score = 0.0
            scored.append((chunk, score))
        scored.sort(key=lambda pair: (-pair[1], pair[0].doc_id, pair[0].seq))
        return scored[: min(k, len(scored))]

    def verify_source(
        self,
        response_id: str,
        claims: list[Claim],
        tau_source: float = DEFAULT_TAU_SOURCE,
        theta_pass: float = DEFAULT_THETA_SOURCE_PASS,
        top_k: int = DEFAULT_TOP_K,
    ) -> SourceVerification:
        """Cite corpus chunks for each checkable claim of a response.

        Coverage is the fraction of checkable claims with at least one
        citation at or above ``tau_source`` (0 when nothing is
        checkable); the response passes at ``theta_pass`` coverage.
        """
        if not self._chunks:
            raise EmptyIndex("no documents ingested")
        for claim in claims:
            if claim.response_id != response_id:
                raise UnknownResponse(
                    f"claim {claim.id} does not belong to response {response_id}"
                )
        citations: list[SourceCitation] = []
        checkable = [c for c in claims if c.checkable]
        matched = 0
        for claim in checkable:
            hit = False
            for chunk, score in self.retrieve(claim.text, top_k):
                if score >= tau_source:
                    hit = True
                    doc = self.documents[chunk.doc_id]
                    excerpt = chunk.text[:160]
                    citations.append(
                        SourceCitation(
                            claim_id=claim.id,
                            doc_id=chunk.doc_id,
                            chunk_seq=chunk.seq,
                            similarity=score,
                            message=(
                                f"Matched '{doc.title}' "
                                f"(chunk {chunk.seq}): \"{excerpt}\""
                            ),
                        )
                    )
            if hit:
                matched += 1
        coverage = matched / len(checkable) if checkable else 0.0
        return SourceVerification(
            response_id=response_id,
            citations=citations,
            coverage=coverage,
            passed=coverage >= theta_pass,
        )
