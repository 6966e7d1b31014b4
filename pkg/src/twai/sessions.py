"""Sessions and the three-mode workflow state machine.

A session moves between generation, verification, and decision modes.
Prompts fan out to providers only in generation mode; verification
requires at least one response; decision requires at least one
recorded verification; switching back to generation is always legal.
The mode gate is enforced here, not merely advised, because unverified
adoption is exactly the failure the workflow exists to prevent.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from threading import Lock

from .errors import (
    EmptyPrompt,
    GenerationFailed,
    NoResponses,
    NoVerifications,
    SessionNotFound,
    UnknownResponse,
    WrongMode,
)
from .providers import FanOutResult, GenerationResponse, ProviderRegistry, utc_now_iso
from .text_analysis import (
    DEFAULT_HEDGING_MARKERS,
    DEFAULT_STOPWORDS,
    Claim,
    segment_claims,
)

MODE_GENERATION = "generation"
MODE_VERIFICATION = "verification"
MODE_DECISION = "decision"
MODES = (MODE_GENERATION, MODE_VERIFICATION, MODE_DECISION)

CRITERIA = ("source", "double_check", "compare")

HELP_TEXTS = {
    MODE_GENERATION: (
        "Generation mode: enter a prompt below and it is sent to every "
        "selected provider at once. Responses are stored on the session; "
        "bookmark the ones worth keeping. Switch to verification mode "
        "when you want evidence before relying on an answer."
    ),
    MODE_VERIFICATION: (
        "Verification mode: pick a response and run any of the three "
        "checks. Source matches claims against your ingested corpus and "
        "cites the document. Double check searches the web fixture and "
        "highlights supported claims in blue and unsupported ones in "
        "red. Compare fans one prompt out to several providers and "
        "surfaces the content they agree on."
    ),
    MODE_DECISION: (
        "Decision mode: responses with at least one verification are "
        "ranked by weighted reliability; fully verified responses always "
        "rank first. Pick any row, not just the top one, record your "
        "rationale, and return to generation to continue the loop."
    ),
}


@dataclass
class Turn:
    """One prompt and everything the providers returned for it."""

    index: int
    prompt_text: str
    responses: list[GenerationResponse]
    errors: list[dict]
    claims: dict[str, list[Claim]]
    created_at: str

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "prompt_text": self.prompt_text,
            "responses": [r.to_dict() for r in self.responses],
            "errors": list(self.errors),
            "claims": {
                rid: [c.to_dict() for c in claims]
                for rid, claims in self.claims.items()
            },
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Turn":
        return cls(
            index=raw["index"],
            prompt_text=raw["prompt_text"],
            responses=[GenerationResponse.from_dict(r) for r in raw["responses"]],
            errors=list(raw["errors"]),
            claims={
                rid: [Claim.from_dict(c) for c in claims]
                for rid, claims in raw["claims"].items()
            },
            created_at=raw["created_at"],
        )


@dataclass
class VerificationRecord:
    """One criterion outcome for one response, recorded on the session."""

    criterion: str  # source | double_check | compare
    response_id: str
    coverage: float
    passed: bool
    created_at: str
    detail: dict = field(default_factory=dict)
    seq: int = -1  # position in the session's verification log

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "response_id": self.response_id,
            "coverage": self.coverage,
            "passed": self.passed,
            "created_at": self.created_at,
            "detail": self.detail,
            "seq": self.seq,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "VerificationRecord":
        return cls(
            criterion=raw["criterion"],
            response_id=raw["response_id"],
            coverage=raw["coverage"],
            passed=raw["passed"],
            created_at=raw["created_at"],
            detail=raw.get("detail", {}),
            seq=raw.get("seq", -1),
        )


@dataclass
class Session:
    id: str
    title: str
    mode: str = MODE_GENERATION
    created_at: str = field(default_factory=utc_now_iso)
    turns: list[Turn] = field(default_factory=list)
    verifications: list[VerificationRecord] = field(default_factory=list)
    decisions: list[dict] = field(default_factory=list)
    library: dict = field(
        default_factory=lambda: {"templates": [], "bookmarks": []}
    )

    def response_count(self) -> int:
        return sum(len(turn.responses) for turn in self.turns)

    def find_response(self, response_id: str) -> GenerationResponse:
        for turn in self.turns:
            for response in turn.responses:
                if response.id == response_id:
                    return response
        raise UnknownResponse(f"no response '{response_id}' in session {self.id}")

    def claims_for(self, response_id: str) -> list[Claim]:
        for turn in self.turns:
            if response_id in turn.claims:
                return turn.claims[response_id]
        raise UnknownResponse(f"no response '{response_id}' in session {self.id}")

    def header_dict(self) -> dict:
        """Session metadata without turns/verifications/decisions;
        those persist as separate records."""
        return {
            "id": self.id,
            "title": self.title,
            "mode": self.mode,
            "created_at": self.created_at,
            "library": self.library,
        }

    def to_dict(self) -> dict:
        return {
            **self.header_dict(),
            "turns": [t.to_dict() for t in self.turns],
            "verifications": [v.to_dict() for v in self.verifications],
            "decisions": list(self.decisions),
        }


class SessionManager:
    """Owns sessions; one writer per session at a time."""

    def __init__(
        self,
        registry: ProviderRegistry,
        stopwords: frozenset[str] = DEFAULT_STOPWORDS,
        hedging: tuple[str, ...] = DEFAULT_HEDGING_MARKERS,
    ):
        self.registry = registry
        self.stopwords = stopwords
        self.hedging = hedging
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, Lock] = {}
        self._manager_lock = Lock()

    def create_session(self, title: str) -> Session:
        session = Session(id=uuid.uuid4().hex[:12], title=title)
        with self._manager_lock:
            self._sessions[session.id] = session
            self._locks[session.id] = Lock()
        return session

    def adopt(self, session: Session) -> Session:
        """Register a session restored from storage or an archive."""
        with self._manager_lock:
            self._sessions[session.id] = session
            self._locks.setdefault(session.id, Lock())
        return session

    def get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise SessionNotFound(f"no session '{session_id}'") from None

    def list_sessions(self) -> list[Session]:
        return sorted(self._sessions.values(), key=lambda s: s.created_at)

    def lock(self, session_id: str) -> Lock:
        self.get(session_id)
        return self._locks[session_id]

    def submit_prompt(
        self, session_id: str, prompt: str, provider_ids: list[str]
    ) -> Turn:
        session = self.get(session_id)
        with self._locks[session_id]:
            if session.mode != MODE_GENERATION:
                raise WrongMode(
                    f"prompts can only be submitted in generation mode "
                    f"(current: {session.mode})"
                )
            if not prompt or not prompt.strip():
                raise EmptyPrompt("prompt must be non-empty")
            history = [
                {"prompt": t.prompt_text, "responses": len(t.responses)}
                for t in session.turns
            ]
            results = self.registry.fan_out(prompt, provider_ids, history=history)
            turn = build_turn(
                len(session.turns), prompt, results, self.stopwords, self.hedging
            )
            session.turns.append(turn)
            return turn

    def append_turn(self, session_id: str, prompt: str, results: list[FanOutResult]) -> Turn:
        """Append a turn produced outside the generation gate (compare)."""
        session = self.get(session_id)
        with self._locks[session_id]:
            turn = build_turn(
                len(session.turns), prompt, results, self.stopwords, self.hedging
            )
            session.turns.append(turn)
            return turn

    def switch_mode(self, session_id: str, target_mode: str) -> Session:
        session = self.get(session_id)
        with self._locks[session_id]:
            if target_mode not in MODES:
                raise ValueError(f"unknown mode '{target_mode}'")
            if target_mode == MODE_VERIFICATION and session.response_count() == 0:
                raise NoResponses("verification mode needs at least one response")
            if target_mode == MODE_DECISION and not session.verifications:
                raise NoVerifications(
                    "decision mode needs at least one recorded verification"
                )
            session.mode = target_mode
            return session

    def record_verification(
        self, session_id: str, record: VerificationRecord
    ) -> VerificationRecord:
        session = self.get(session_id)
        with self._locks[session_id]:
            session.find_response(record.response_id)
            record.seq = len(session.verifications)
            session.verifications.append(record)
            return record

    def manage_library(self, session_id: str, action: str, payload: dict) -> dict:
        session = self.get(session_id)
        with self._locks[session_id]:
            library = session.library
            if action == "list":
                pass
            elif action == "add_template":
                library["templates"].append(
                    {
                        "id": uuid.uuid4().hex[:8],
                        "label": payload.get("label", ""),
                        "body": payload["body"],
                        "created_at": utc_now_iso(),
                    }
                )
            elif action == "remove_template":
                library["templates"] = [
                    t for t in library["templates"] if t["id"] != payload["id"]
                ]
            elif action == "add_bookmark":
                session.find_response(payload["response_id"])
                library["bookmarks"].append(
                    {
                        "id": uuid.uuid4().hex[:8],
                        "label": payload.get("label", ""),
                        "response_id": payload["response_id"],
                        "created_at": utc_now_iso(),
                    }
                )
            elif action == "remove_bookmark":
                library["bookmarks"] = [
                    b for b in library["bookmarks"] if b["id"] != payload["id"]
                ]
            else:
                raise ValueError(f"unknown library action '{action}'")
            return library


def build_turn(
    index: int,
    prompt: str,
    results: list[FanOutResult],
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
    hedging: tuple[str, ...] = DEFAULT_HEDGING_MARKERS,
) -> Turn:
    """Assemble a turn from fan-out results, segmenting claims once.

    Claims are cached on the turn at creation so the three verifiers
    share identical segmentation.
    """
    responses = [r.response for r in results if r.response is not None]
    errors = [
        {"provider_id": r.provider_id, "error": r.error}
        for r in results
        if r.error is not None
    ]
    if not responses:
        raise GenerationFailed(
            "all providers failed: "
            + "; ".join(f"{e['provider_id']}: {e['error']}" for e in errors)
        )
    claims = {
        resp.id: segment_claims(resp.id, resp.text, stopwords, hedging)
        for resp in responses
    }
    return Turn(
        index=index,
        prompt_text=prompt,
        responses=responses,
        errors=errors,
        claims=claims,
        created_at=utc_now_iso(),
    )


def load_metrics_panel(path: str | Path) -> dict:
    """Read the configuration-fed metrics panel document.

    Shape: {metric_name: {value, unit, as_of}}. The panel is read-only
    to the workflow; it exists so research tasks have their service
    numbers in view.
    """
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    panel = {}
    for name, entry in raw.items():
        panel[name] = {
            "value": entry["value"],
            "unit": entry.get("unit", ""),
            "as_of": entry.get("as_of", ""),
        }
    return panel
