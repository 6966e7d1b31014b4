"""Weighted reliability scoring and the ranked decision table.

Each response's three criterion coverages (source, double check,
compare) combine into a weighted score, but the table's primary sort
key is whether a response passed all three checks: a fully verified
response outranks every partially verified one no matter how the
weights are set. Within each group the weighted score orders rows,
with provider id and response id as deterministic tie-breaks. The
human picks the row; nothing here auto-selects.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidWeights, NotInTable, NoVerifications
from .providers import utc_now_iso
from .sessions import CRITERIA, Session, SessionManager

DEFAULT_WEIGHTS = {"source": 0.5, "double_check": 0.3, "compare": 0.2}

_WEIGHT_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CriterionResult:
    criterion: str
    coverage: float
    passed: bool
    evaluated: bool

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "coverage": self.coverage,
            "passed": self.passed,
            "evaluated": self.evaluated,
        }


NOT_EVALUATED = {
    c: CriterionResult(criterion=c, coverage=0.0, passed=False, evaluated=False)
    for c in CRITERIA
}


@dataclass(frozen=True)
class ReliabilityScore:
    value: float
    breakdown: dict[str, dict]  # criterion -> {weight, coverage, passed, evaluated}
    fully_verified: bool

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "breakdown": {k: dict(v) for k, v in self.breakdown.items()},
            "fully_verified": self.fully_verified,
        }


@dataclass(frozen=True)
class DecisionRow:
    rank: int
    response_id: str
    provider_id: str
    score: ReliabilityScore
    criteria: dict[str, dict]

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "response_id": self.response_id,
            "provider_id": self.provider_id,
            "score": self.score.to_dict(),
            "criteria": {k: dict(v) for k, v in self.criteria.items()},
        }


@dataclass(frozen=True)
class DecisionTable:
    session_id: str
    rows: list[DecisionRow]
    generated_at: str

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "rows": [r.to_dict() for r in self.rows],
            "generated_at": self.generated_at,
        }

    def to_text(self) -> str:
        """Plain-text rendering for reports and the CLI human mode."""
        header = f"{'rank':>4}  {'response':<14} {'provider':<12} {'score':>6}  {'full':>4}  criteria"
        lines = [header, "-" * len(header)]
        for row in self.rows:
            crit = " ".join(
                f"{name}={row.criteria[name]['coverage']:.2f}"
                + ("*" if row.criteria[name]["passed"] else "")
                for name in CRITERIA
                if row.criteria[name]["evaluated"]
            )
            lines.append(
                f"{row.rank:>4}  {row.response_id[:14]:<14} "
                f"{row.provider_id[:12]:<12} {row.score.value:>6.3f}  "
                f"{'yes' if row.score.fully_verified else 'no':>4}  {crit}"
            )
        return "\n".join(lines)


@dataclass(frozen=True)
class DecisionRecord:
    session_id: str
    chosen_response_id: str
    rationale: str
    decided_at: str = field(default_factory=utc_now_iso)

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "chosen_response_id": self.chosen_response_id,
            "rationale": self.rationale,
            "decided_at": self.decided_at,
        }


def validate_weights(weights: dict[str, float]) -> None:
    if set(weights) != set(CRITERIA):
        raise InvalidWeights(f"weights must cover exactly {CRITERIA}")
    if any(w <= 0 for w in weights.values()):
        raise InvalidWeights("weights must be positive")
    if abs(sum(weights.values()) - 1.0) > _WEIGHT_SUM_TOLERANCE:
        raise InvalidWeights("weights must sum to 1")


def score_response(
    results: dict[str, CriterionResult],
    weights: dict[str, float] = DEFAULT_WEIGHTS,
) -> ReliabilityScore:
    """Weighted sum of criterion coverages; unevaluated criteria are 0."""
    validate_weights(weights)
    value = 0.0
    breakdown = {}
    full = True
    for criterion in CRITERIA:
        result = results.get(criterion, NOT_EVALUATED[criterion])
        coverage = result.coverage if result.evaluated else 0.0
        value += weights[criterion] * coverage
        full = full and result.evaluated and result.passed
        breakdown[criterion] = {
            "weight": weights[criterion],
            "coverage": coverage,
            "passed": result.passed,
            "evaluated": result.evaluated,
        }
    return ReliabilityScore(
        value=min(1.0, max(0.0, value)), breakdown=breakdown, fully_verified=full
    )


def criterion_results_for(session: Session) -> dict[str, dict[str, CriterionResult]]:
    """Latest recorded result per (response, criterion) across the session."""
    by_response: dict[str, dict[str, CriterionResult]] = {}
    for record in session.verifications:  # chronological; later records win
        by_response.setdefault(record.response_id, {})[record.criterion] = (
            CriterionResult(
                criterion=record.criterion,
                coverage=record.coverage,
                passed=record.passed,
                evaluated=True,
            )
        )
    return by_response


def build_decision_table(
    session: Session, weights: dict[str, float] = DEFAULT_WEIGHTS
) -> DecisionTable:
    """Rank every response that has at least one evaluated criterion.

    Sort key: fully verified first, then weighted score descending,
    then provider id and response id ascending. Ranks run 1..n with no
    gaps. Responses never verified are left out; the table compares
    verified responses, it does not score absences.
    """
    if not session.verifications:
        raise NoVerifications("no verifications recorded for this session")
    validate_weights(weights)
    results_by_response = criterion_results_for(session)
    provider_of = {
        resp.id: resp.provider_id
        for turn in session.turns
        for resp in turn.responses
    }
    scored = []
    for response_id, results in results_by_response.items():
        score = score_response(results, weights)
        scored.append((response_id, provider_of.get(response_id, ""), score, results))
    scored.sort(
        key=lambda item: (
            not item[2].fully_verified,
            -item[2].value,
            item[1],
            item[0],
        )
    )
    rows = [
        DecisionRow(
            rank=idx + 1,
            response_id=response_id,
            provider_id=provider_id,
            score=score,
            criteria={
                c: {
                    "coverage": results[c].coverage if c in results else 0.0,
                    "passed": results[c].passed if c in results else False,
                    "evaluated": c in results,
                }
                for c in CRITERIA
            },
        )
        for idx, (response_id, provider_id, score, results) in enumerate(scored)
    ]
    return DecisionTable(
        session_id=session.id, rows=rows, generated_at=utc_now_iso()
    )


def record_decision(
    manager: SessionManager,
    session_id: str,
    response_id: str,
    rationale: str,
    weights: dict[str, float] = DEFAULT_WEIGHTS,
) -> DecisionRecord:
    """Record the human's choice; any row of the table is a valid pick."""
    session = manager.get(session_id)
    table = build_decision_table(session, weights)
    if not any(row.response_id == response_id for row in table.rows):
        raise NotInTable(
            f"response '{response_id}' is not in the current decision table"
        )
    record = DecisionRecord(
        session_id=session_id,
        chosen_response_id=response_id,
        rationale=rationale,
    )
    with manager.lock(session_id):
        session.decisions.append(record.to_dict())
    return record
