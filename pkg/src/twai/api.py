"""HTTP surface over the workbench; the boundary the UI consumes.

Every module error maps to one stable machine-readable code mirroring
the error class name. Mode gating is enforced here as well as in the
session layer, so a client cannot sidestep the workflow by talking to
the API directly.
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .config import WorkbenchConfig
from .errors import WorkbenchError, WrongMode, error_code, error_status
from .scorecard import ScorecardEntry
from .sessions import MODE_DECISION, MODE_GENERATION, MODES, Session
from .workbench import Workbench


class CreateSessionBody(BaseModel):
    title: str = ""


class PromptBody(BaseModel):
    prompt: str
    provider_ids: list[str] | None = None


class ModeBody(BaseModel):
    mode: Literal["generation", "verification", "decision"]


class LibraryBody(BaseModel):
    action: Literal[
        "list", "add_template", "remove_template", "add_bookmark", "remove_bookmark"
    ]
    payload: dict = Field(default_factory=dict)


class VerifyBody(BaseModel):
    response_id: str


class CompareBody(BaseModel):
    prompt: str
    provider_ids: list[str] | None = None


class DecisionBody(BaseModel):
    response_id: str
    rationale: str = ""


class CorpusBody(BaseModel):
    title: str
    body: str
    doc_id: str | None = None
    metadata: dict = Field(default_factory=dict)


class ScorecardEntryBody(BaseModel):
    rater_id: str
    tool_id: str
    ratings: dict[str, str]


def _session_summary(session: Session) -> dict:
    return {
        "id": session.id,
        "title": session.title,
        "mode": session.mode,
        "created_at": session.created_at,
        "turn_count": len(session.turns),
        "verification_count": len(session.verifications),
        "decision_count": len(session.decisions),
    }


def create_app(bench: Workbench) -> FastAPI:
    app = FastAPI(title="twai", version="0.1.0")
    # the workbench is a local single-user tool; let the UI run from
    # any origin (file://, a dev server, or a static host)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(WorkbenchError)
    async def workbench_error_handler(request: Request, exc: WorkbenchError):
        return JSONResponse(
            status_code=error_status(exc),
            content={"error": {"code": error_code(exc), "message": str(exc)}},
        )

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "InvalidRequest", "message": str(exc)}},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": {"code": "InvalidRequest", "message": str(exc)}},
        )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/providers")
    def providers():
        # roster only; endpoint_config stays server-side
        return {
            "providers": [
                {"id": s.id, "display_name": s.display_name, "kind": s.kind}
                for s in bench.provider_specs()
            ]
        }

    @app.get("/help/{mode}")
    def help_text(mode: str):
        return {"mode": mode, "text": bench.help_text(mode)}

    @app.get("/metrics-panel")
    def metrics_panel():
        return {"metrics": bench.metrics_panel()}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        session = bench.create_session(body.title)
        return session.to_dict()

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": [_session_summary(s) for s in bench.list_sessions()]}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return bench.get_session(session_id).to_dict()

    @app.post("/sessions/{session_id}/prompts", status_code=201)
    def submit_prompt(session_id: str, body: PromptBody):
        # mode gate also lives in the session layer; checked here too so
        # the UI is never the only guardian of the workflow
        if bench.get_session(session_id).mode != MODE_GENERATION:
            raise WrongMode("prompts can only be submitted in generation mode")
        turn = bench.submit_prompt(session_id, body.prompt, body.provider_ids)
        return turn.to_dict()

    @app.post("/sessions/{session_id}/mode")
    def switch_mode(session_id: str, body: ModeBody):
        session = bench.switch_mode(session_id, body.mode)
        return _session_summary(session)

    @app.get("/sessions/{session_id}/modes")
    def allowed_modes(session_id: str):
        """Which mode switches the server would currently accept."""
        session = bench.get_session(session_id)
        allowed = [mode for mode in MODES if _switch_allowed(session, mode)]
        return {"current": session.mode, "allowed_targets": allowed}

    @app.post("/sessions/{session_id}/library")
    def manage_library(session_id: str, body: LibraryBody):
        return bench.manage_library(session_id, body.action, body.payload)

    @app.get("/sessions/{session_id}/library")
    def get_library(session_id: str):
        return bench.get_session(session_id).library

    @app.post("/sessions/{session_id}/verify/source")
    def verify_source(session_id: str, body: VerifyBody):
        return bench.verify_source(session_id, body.response_id).to_dict()

    @app.post("/sessions/{session_id}/verify/double-check")
    def verify_double_check(session_id: str, body: VerifyBody):
        return bench.run_double_check(session_id, body.response_id).to_dict()

    @app.post("/sessions/{session_id}/verify/compare")
    def verify_compare(session_id: str, body: CompareBody):
        if bench.get_session(session_id).mode == MODE_DECISION:
            raise WrongMode("compare runs in generation or verification mode")
        return bench.run_compare(session_id, body.prompt, body.provider_ids).to_dict()

    @app.get("/sessions/{session_id}/decision-table")
    def decision_table(session_id: str):
        return bench.decision_table(session_id).to_dict()

    @app.post("/sessions/{session_id}/decision", status_code=201)
    def record_decision(session_id: str, body: DecisionBody):
        return bench.record_decision(
            session_id, body.response_id, body.rationale
        ).to_dict()

    @app.post("/corpus", status_code=201)
    def ingest_corpus(body: CorpusBody):
        doc, chunk_count = bench.ingest_document(
            body=body.body,
            title=body.title,
            doc_id=body.doc_id,
            metadata=body.metadata,
        )
        return {"doc_id": doc.doc_id, "chunk_count": chunk_count}

    @app.get("/corpus")
    def list_corpus():
        return {
            "documents": [
                {
                    "doc_id": doc.doc_id,
                    "title": doc.title,
                    "ingested_at": doc.ingested_at,
                    "metadata": doc.metadata,
                }
                for doc in bench.corpus.documents.values()
            ]
        }

    @app.post("/scorecard/entries", status_code=201)
    def record_scorecard(body: ScorecardEntryBody):
        entry = bench.record_scorecard_entry(
            ScorecardEntry(
                rater_id=body.rater_id, tool_id=body.tool_id, ratings=body.ratings
            )
        )
        return entry.to_dict()

    @app.get("/scorecard/tools")
    def scorecard_tools():
        return {"tools": bench.scorecards.tool_ids()}

    @app.get("/scorecard/report/{tool_id}")
    def scorecard_report(tool_id: str):
        return bench.scorecard_report(tool_id).to_dict()

    @app.get("/scorecard/compare")
    def scorecard_compare(tool_a: str, tool_b: str):
        return bench.scorecard_compare(tool_a, tool_b)

    return app


def _switch_allowed(session: Session, target: str) -> bool:
    if target == "verification":
        return session.response_count() > 0
    if target == "decision":
        return len(session.verifications) > 0
    return True


def serve(config: WorkbenchConfig) -> None:
    """Run the HTTP service until interrupted."""
    import uvicorn

    bench = Workbench(config)
    app = create_app(bench)
    uvicorn.run(app, host=config.host, port=config.port)
