"""Cross-provider consensus: one prompt, many providers, shared claims.

Responses from all providers are segmented into claims and clustered
greedily by cosine similarity to each cluster's first member. Clusters
reaching the support floor are "common content" — the material several
independent providers agree on, which practitioners use as a decision
signal. Clustering is single-pass in a deterministic order (providers
in request order, claims in span order), so identical inputs always
cluster identically.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CompareFailed, TooFewProviders, WrongMode
from .providers import utc_now_iso
from .sessions import (
    MODE_DECISION,
    SessionManager,
    Turn,
    VerificationRecord,
)
from .text_analysis import Claim, similarity

DEFAULT_TAU_CLUSTER = 0.6
DEFAULT_MIN_SUPPORT = 2
DEFAULT_THETA_CMP_PASS = 0.5


@dataclass
class ClaimCluster:
    cluster_id: str
    members: list[tuple[str, str]]  # (provider_id, claim_id)
    representative_text: str
    support: int  # distinct providers represented

    def to_dict(self) -> dict:
        return {
            "cluster_id": self.cluster_id,
            "members": [list(m) for m in self.members],
            "representative_text": self.representative_text,
            "support": self.support,
        }


@dataclass
class CompareReport:
    prompt: str
    provider_ids: list[str]
    clusters: list[ClaimCluster]
    common_clusters: list[ClaimCluster]
    per_response_coverage: dict[str, float]
    per_response_passed: dict[str, bool]
    turn_index: int

    def to_dict(self) -> dict:
        return {
            "prompt": self.prompt,
            "provider_ids": list(self.provider_ids),
            "clusters": [c.to_dict() for c in self.clusters],
            "common_clusters": [c.to_dict() for c in self.common_clusters],
            "per_response_coverage": dict(self.per_response_coverage),
            "per_response_passed": dict(self.per_response_passed),
            "turn_index": self.turn_index,
        }


def cluster_claims(
    groups: list[tuple[str, list[Claim]]],
    tau_cluster: float = DEFAULT_TAU_CLUSTER,
) -> list[ClaimCluster]:
    """Greedy single-pass clustering of claims across providers.

    A claim joins the first existing cluster whose representative (the
    founding member's text) is at least ``tau_cluster`` similar,
    otherwise it founds a new cluster. Every claim lands in exactly
    one cluster.
    """
    clusters: list[ClaimCluster] = []
    texts: list[str] = []  # representative text per cluster
    providers_in: list[set[str]] = []
    for provider_id, claims in groups:
        for claim in claims:
            placed = False
            for idx, rep in enumerate(texts):
                if similarity(claim.text, rep) >= tau_cluster:
                    clusters[idx].members.append((provider_id, claim.id))
                    providers_in[idx].add(provider_id)
                    placed = True
                    break
            if not placed:
                clusters.append(
                    ClaimCluster(
                        cluster_id=f"cluster-{len(clusters)}",
                        members=[(provider_id, claim.id)],
                        representative_text=claim.text,
                        support=1,
                    )
                )
                texts.append(claim.text)
                providers_in.append({provider_id})
    for idx, cluster in enumerate(clusters):
        cluster.support = len(providers_in[idx])
    return clusters


def run_compare(
    manager: SessionManager,
    session_id: str,
    prompt: str,
    provider_ids: list[str],
    tau_cluster: float = DEFAULT_TAU_CLUSTER,
    min_support: int = DEFAULT_MIN_SUPPORT,
    theta_pass: float = DEFAULT_THETA_CMP_PASS,
) -> tuple[CompareReport, Turn, list[VerificationRecord]]:
    """Fan a prompt out, cluster the claims, and record the consensus.

    The fan-out is appended to the session as a turn so the compared
    responses are addressable later (bookmarks, decision table). Each
    response gets a compare verification record whose coverage is the
    fraction of its checkable claims that sit in a common cluster.
    """
    session = manager.get(session_id)
    if session.mode == MODE_DECISION:
        raise WrongMode("compare runs in generation or verification mode")
    if len(provider_ids) < 2:
        raise TooFewProviders("compare needs at least two providers")
    history = [
        {"prompt": t.prompt_text, "responses": len(t.responses)}
        for t in session.turns
    ]
    results = manager.registry.fan_out(prompt, provider_ids, history=history)
    successes = [r for r in results if r.ok]
    if len(successes) < 2:
        failures = "; ".join(f"{r.provider_id}: {r.error}" for r in results if r.error)
        raise CompareFailed(f"fewer than two providers responded ({failures})")
    turn = manager.append_turn(session_id, prompt, results)

    groups: list[tuple[str, list[Claim]]] = [
        (resp.provider_id, turn.claims[resp.id]) for resp in turn.responses
    ]
    clusters = cluster_claims(groups, tau_cluster)
    common = [c for c in clusters if c.support >= min_support]
    common_claim_ids = {claim_id for c in common for _, claim_id in c.members}

    coverage: dict[str, float] = {}
    passed: dict[str, bool] = {}
    for resp in turn.responses:
        checkable = [c for c in turn.claims[resp.id] if c.checkable]
        if checkable:
            hit = sum(1 for c in checkable if c.id in common_claim_ids)
            coverage[resp.id] = hit / len(checkable)
        else:
            coverage[resp.id] = 0.0
        passed[resp.id] = coverage[resp.id] >= theta_pass

    report = CompareReport(
        prompt=prompt,
        provider_ids=[r.provider_id for r in successes],
        clusters=clusters,
        common_clusters=common,
        per_response_coverage=coverage,
        per_response_passed=passed,
        turn_index=turn.index,
    )
    records = []
    for resp in turn.responses:
        records.append(
            manager.record_verification(
                session_id,
                VerificationRecord(
                    criterion="compare",
                    response_id=resp.id,
                    coverage=coverage[resp.id],
                    passed=passed[resp.id],
                    created_at=utc_now_iso(),
                    detail={
                        "prompt": prompt,
                        "turn_index": turn.index,
                        "common_cluster_count": len(common),
                        "cluster_count": len(clusters),
                    },
                ),
            )
        )
    return report, turn, records
