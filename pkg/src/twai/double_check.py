"""Web-evidence consistency check with tri-state claim highlights.

Each checkable claim is searched; claims matching a result snippet are
highlighted blue with the supporting links, claims matching nothing
are highlighted red with a recommended follow-up search, and claims
that need no verification (or could not be searched) get no highlight.
The search client is pluggable; the fixture client is the reference
implementation so reports are reproducible offline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

from .errors import EmptyQuery, SearchUnavailable, UnknownResponse
from .text_analysis import Claim, similarity

STATUS_SUPPORTED = "supported"
STATUS_UNSUPPORTED = "unsupported"
STATUS_NOT_APPLICABLE = "not_applicable"

COLOR_FOR_STATUS = {
    STATUS_SUPPORTED: "blue",
    STATUS_UNSUPPORTED: "red",
    STATUS_NOT_APPLICABLE: "none",
}

DEFAULT_TAU_DC = 0.5
DEFAULT_THETA_DC_PASS = 0.8


@dataclass(frozen=True)
class SearchHit:
    url: str
    title: str
    snippet: str

    def to_dict(self) -> dict:
        return {"url": self.url, "title": self.title, "snippet": self.snippet}


@dataclass(frozen=True)
class ClaimHighlight:
    """Verdict for one claim; status, color, and payload move together.

    supported <=> blue <=> at least one evidence link;
    unsupported <=> red <=> a recommended follow-up query;
    not_applicable <=> none <=> neither.
    """

    claim_id: str
    status: str
    color: str
    evidence: list[SearchHit]
    recommended_query: str
    best_similarity: float

    def __post_init__(self):
        assert self.color == COLOR_FOR_STATUS[self.status]
        if self.status == STATUS_SUPPORTED:
            assert self.evidence and not self.recommended_query
        elif self.status == STATUS_UNSUPPORTED:
            assert self.recommended_query and not self.evidence
        else:
            assert not self.evidence and not self.recommended_query

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "status": self.status,
            "color": self.color,
            "evidence": [h.to_dict() for h in self.evidence],
            "recommended_query": self.recommended_query,
            "best_similarity": self.best_similarity,
        }


@dataclass(frozen=True)
class DoubleCheckReport:
    response_id: str
    highlights: list[ClaimHighlight]
    coverage: float
    passed: bool
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "response_id": self.response_id,
            "highlights": [h.to_dict() for h in self.highlights],
            "coverage": self.coverage,
            "passed": self.passed,
            "warnings": list(self.warnings),
        }


class SearchClient(Protocol):
    def search(self, query: str) -> list[SearchHit]: ...


class FixtureSearchClient:
    """Answers searches from a fixture keyed by exact query string."""

    def __init__(self, fixtures: dict[str, list[dict]]):
        self._fixtures = {
            query: [
                SearchHit(
                    url=h["url"], title=h.get("title", ""), snippet=h.get("snippet", "")
                )
                for h in hits
            ]
            for query, hits in fixtures.items()
        }

    @classmethod
    def from_file(cls, path: str | Path) -> "FixtureSearchClient":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    def search(self, query: str) -> list[SearchHit]:
        if not query or not query.strip():
            raise EmptyQuery("search query must be non-empty")
        return list(self._fixtures.get(query, []))


class RemoteSearchClient:
    """Adapter stub for a real search backend; not used offline."""

    def __init__(self, endpoint_url: str):
        self.endpoint_url = endpoint_url

    def search(self, query: str) -> list[SearchHit]:
        if not query or not query.strip():
            raise EmptyQuery("search query must be non-empty")
        raise SearchUnavailable("remote search is not configured in this build")


def _classify(
    claim: Claim, client: SearchClient, tau_dc: float, warnings: list[str]
) -> ClaimHighlight:
    if not claim.checkable:
        return ClaimHighlight(
            claim_id=claim.id,
            status=STATUS_NOT_APPLICABLE,
            color="none",
            evidence=[],
            recommended_query="",
            best_similarity=0.0,
        )
    try:
        hits = client.search(claim.text)
    except SearchUnavailable as exc:
        warnings.append(f"search unavailable for claim {claim.id}: {exc}")
        return ClaimHighlight(
            claim_id=claim.id,
            status=STATUS_NOT_APPLICABLE,
            color="none",
            evidence=[],
            recommended_query="",
            best_similarity=0.0,
        )
    scored = [(hit, similarity(claim.text, hit.snippet)) for hit in hits]
    best = max((score for _, score in scored), default=0.0)
    if best >= tau_dc:
        evidence = [hit for hit, score in scored if score >= tau_dc]
        return ClaimHighlight(
            claim_id=claim.id,
            status=STATUS_SUPPORTED,
            color="blue",
            evidence=evidence,
            recommended_query="",
            best_similarity=best,
        )
    return ClaimHighlight(
        claim_id=claim.id,
        status=STATUS_UNSUPPORTED,
        color="red",
        evidence=[],
        recommended_query=claim.text,
        best_similarity=best,
    )


def double_check(
    response_id: str,
    claims: list[Claim],
    client: SearchClient,
    tau_dc: float = DEFAULT_TAU_DC,
    theta_pass: float = DEFAULT_THETA_DC_PASS,
) -> DoubleCheckReport:
    """Produce one highlight per claim plus response-level coverage.

    A search outage downgrades the affected claims to not_applicable
    with a recorded warning; the batch itself never aborts.
    """
    for claim in claims:
        if claim.response_id != response_id:
            raise UnknownResponse(
                f"claim {claim.id} does not belong to response {response_id}"
            )
    warnings: list[str] = []
    highlights = [_classify(claim, client, tau_dc, warnings) for claim in claims]
    by_id = {h.claim_id: h for h in highlights}
    checkable = [c for c in claims if c.checkable]
    supported = sum(
        1 for c in checkable if by_id[c.id].status == STATUS_SUPPORTED
    )
    coverage = supported / len(checkable) if checkable else 0.0
    return DoubleCheckReport(
        response_id=response_id,
        highlights=highlights,
        coverage=coverage,
        passed=coverage >= theta_pass,
        warnings=warnings,
    )
