import json
import random

import pytest

from twai.decision import (
    DEFAULT_WEIGHTS,
    CriterionResult,
    build_decision_table,
    record_decision,
    score_response,
)
from twai.errors import InvalidWeights, NotInTable, NoVerifications
from twai.providers import ProviderRegistry, ProviderSpec, utc_now_iso
from twai.sessions import CRITERIA, SessionManager, VerificationRecord

from conftest import PROMPT_REDESIGN, RESPONSE_A


def result(criterion, coverage, passed=None, evaluated=True):
    if passed is None:
        passed = coverage >= 0.8
    return CriterionResult(
        criterion=criterion, coverage=coverage, passed=passed, evaluated=evaluated
    )


def results_for(source=None, double_check=None, compare=None):
    out = {}
    if source is not None:
        out["source"] = result("source", *source)
    if double_check is not None:
        out["double_check"] = result("double_check", *double_check)
    if compare is not None:
        out["compare"] = result("compare", *compare)
    return out


def make_manager(n_providers=3):
    registry = ProviderRegistry()
    for i in range(n_providers):
        registry.register_provider(
            ProviderSpec(
                id=f"m{i}",
                display_name=f"m{i}",
                kind="mock",
                endpoint_config={"fixtures": {"*": [RESPONSE_A]}},
            )
        )
    return SessionManager(registry)


def record(manager, session_id, response_id, criterion, coverage, passed):
    manager.record_verification(
        session_id,
        VerificationRecord(
            criterion=criterion,
            response_id=response_id,
            coverage=coverage,
            passed=passed,
            created_at=utc_now_iso(),
        ),
    )


class TestScoreResponse:
    def test_full_verification(self):
        score = score_response(
            results_for(source=(1.0, True), double_check=(1.0, True), compare=(1.0, True)),
            {"source": 0.5, "double_check": 0.3, "compare": 0.2},
        )
        assert score.value == 1.0
        assert score.fully_verified is True

    def test_weighted_sum_single_criterion(self):
        score = score_response(
            results_for(source=(1.0, True)),
            {"source": 0.5, "double_check": 0.3, "compare": 0.2},
        )
        assert score.value == 0.5
        assert score.fully_verified is False
        assert score.breakdown["double_check"]["evaluated"] is False

    def test_weights_must_sum_to_one(self):
        with pytest.raises(InvalidWeights):
            score_response(results_for(), {"source": 0.5, "double_check": 0.5, "compare": 0.5})

    def test_weights_must_be_positive(self):
        with pytest.raises(InvalidWeights):
            score_response(
                results_for(), {"source": 1.2, "double_check": -0.1, "compare": -0.1}
            )

    def test_weights_must_cover_criteria(self):
        with pytest.raises(InvalidWeights):
            score_response(results_for(), {"source": 1.0})

    def test_passed_without_all_three_not_full(self):
        score = score_response(
            results_for(source=(1.0, True), double_check=(1.0, True)),
            DEFAULT_WEIGHTS,
        )
        assert score.fully_verified is False

    def test_full_verification_value_floor(self):
        # fully verified implies value >= sum of weight * pass threshold
        thresholds = {"source": 0.8, "double_check": 0.8, "compare": 0.5}
        weights = {"source": 0.5, "double_check": 0.3, "compare": 0.2}
        rng = random.Random(7)
        for _ in range(200):
            coverages = {c: rng.uniform(thresholds[c], 1.0) for c in CRITERIA}
            score = score_response(
                {c: result(c, coverages[c], passed=True) for c in CRITERIA}, weights
            )
            floor = sum(weights[c] * thresholds[c] for c in CRITERIA)
            assert score.fully_verified
            assert score.value >= floor - 1e-12


class TestDecisionTable:
    def build_session(self):
        manager = make_manager()
        session = manager.create_session("t")
        turn = manager.submit_prompt(session.id, PROMPT_REDESIGN, ["m0", "m1", "m2"])
        return manager, session, turn

    def test_fully_verified_outranks_higher_coverage(self):
        manager, session, turn = self.build_session()
        full, partial, _ = (r.id for r in turn.responses)
        # "full" passes all three with modest coverages
        for criterion in CRITERIA:
            record(manager, session.id, full, criterion, 0.8, True)
        # "partial" has higher coverages but its compare check fails
        record(manager, session.id, partial, "source", 1.0, True)
        record(manager, session.id, partial, "double_check", 1.0, True)
        record(manager, session.id, partial, "compare", 0.9, False)
        table = build_decision_table(session)
        assert [row.response_id for row in table.rows][:2] == [full, partial]
        assert table.rows[0].score.value < table.rows[1].score.value  # rank beats score

    def test_tie_break_by_provider_then_response(self):
        manager, session, turn = self.build_session()
        ids = {r.provider_id: r.id for r in turn.responses}
        for rid in ids.values():
            record(manager, session.id, rid, "source", 0.5, False)
        table = build_decision_table(session)
        assert [row.provider_id for row in table.rows] == ["m0", "m1", "m2"]
        assert [row.rank for row in table.rows] == [1, 2, 3]

    def test_unverified_responses_excluded(self):
        manager, session, turn = self.build_session()
        verified = turn.responses[0].id
        record(manager, session.id, verified, "source", 1.0, True)
        table = build_decision_table(session)
        assert [row.response_id for row in table.rows] == [verified]

    def test_no_verifications(self):
        manager, session, _ = self.build_session()
        with pytest.raises(NoVerifications):
            build_decision_table(session)

    def test_latest_record_wins(self):
        manager, session, turn = self.build_session()
        rid = turn.responses[0].id
        record(manager, session.id, rid, "source", 0.2, False)
        record(manager, session.id, rid, "source", 0.9, True)
        table = build_decision_table(session)
        assert table.rows[0].criteria["source"]["coverage"] == 0.9

    def test_rows_deterministic(self):
        manager, session, turn = self.build_session()
        for response in turn.responses:
            record(manager, session.id, response.id, "source", 0.7, False)
            record(manager, session.id, response.id, "compare", 0.4, False)
        first = json.dumps([r.to_dict() for r in build_decision_table(session).rows])
        second = json.dumps([r.to_dict() for r in build_decision_table(session).rows])
        assert first == second

    def test_superset_dominance_randomized(self):
        rng = random.Random(99)
        for _ in range(300):
            weights_raw = [rng.uniform(0.05, 1.0) for _ in range(3)]
            total = sum(weights_raw)
            weights = dict(zip(CRITERIA, (w / total for w in weights_raw)))
            cov_b = {c: rng.uniform(0.0, 0.95) for c in CRITERIA}
            cov_a = {c: min(1.0, cov_b[c] + rng.uniform(0.0, 0.05)) for c in CRITERIA}
            evaluated = {c: rng.random() < 0.8 for c in CRITERIA}
            res_a = {
                c: result(c, cov_a[c], passed=False, evaluated=evaluated[c])
                for c in CRITERIA
            }
            res_b = {
                c: result(c, cov_b[c], passed=False, evaluated=evaluated[c])
                for c in CRITERIA
            }
            score_a = score_response(res_a, weights)
            score_b = score_response(res_b, weights)
            assert score_a.value >= score_b.value - 1e-12


class TestRecordDecision:
    def prepared(self):
        manager = make_manager()
        session = manager.create_session("t")
        turn = manager.submit_prompt(session.id, PROMPT_REDESIGN, ["m0", "m1", "m2"])
        for response in turn.responses:
            record(manager, session.id, response.id, "source", 1.0, True)
        return manager, session

    def test_choose_rank_one(self):
        manager, session = self.prepared()
        table = build_decision_table(session)
        decision = record_decision(
            manager, session.id, table.rows[0].response_id, "strongest evidence"
        )
        assert session.decisions[-1]["chosen_response_id"] == decision.chosen_response_id

    def test_choose_lower_rank_is_allowed(self):
        manager, session = self.prepared()
        table = build_decision_table(session)
        chosen = table.rows[-1].response_id
        decision = record_decision(manager, session.id, chosen, "human override")
        assert decision.chosen_response_id == chosen

    def test_absent_response_rejected(self):
        manager, session = self.prepared()
        with pytest.raises(NotInTable):
            record_decision(manager, session.id, "ghost-response", "because")


def test_table_text_rendering():
    manager = make_manager(2)
    session = manager.create_session("t")
    turn = manager.submit_prompt(session.id, PROMPT_REDESIGN, ["m0", "m1"])
    for response in turn.responses:
        record(manager, session.id, response.id, "source", 1.0, True)
    text = build_decision_table(session).to_text()
    assert "rank" in text
    assert "m0" in text and "m1" in text
