"""The workbench facade: one object the API and CLI both drive.

Composes the provider registry, session manager, corpus index, search
client, scorecard book, and record store, and keeps the store in sync
after every mutating operation. Anything the UI can do goes through
here, which is what makes API/CLI parity a structural property rather
than a convention.
"""

from __future__ import annotations

import json
import uuid
from pathlib import Path

from .compare import CompareReport, run_compare
from .config import WorkbenchConfig
from .decision import (
    DecisionRecord,
    DecisionTable,
    build_decision_table,
    record_decision,
)
from .double_check import (
    DoubleCheckReport,
    FixtureSearchClient,
    SearchClient,
    double_check,
)
from .errors import NotFound
from .providers import (
    ProviderRegistry,
    ProviderSpec,
    load_provider_specs,
    utc_now_iso,
)
from .scorecard import ScorecardBook, ScorecardEntry, TrustReport
from .sessions import (
    HELP_TEXTS,
    Session,
    SessionManager,
    Turn,
    VerificationRecord,
    load_metrics_panel,
)
from .source import CorpusDocument, CorpusIndex, SourceVerification
from .store import RecordStore, StoreRecord
from .text_analysis import (
    DEFAULT_HEDGING_MARKERS,
    DEFAULT_STOPWORDS,
    load_markers,
    load_wordlist,
)

DEFAULT_PROVIDER_SPECS = [
    ProviderSpec(id="mock-alpha", display_name="Mock Alpha", kind="mock"),
    ProviderSpec(id="mock-beta", display_name="Mock Beta", kind="mock"),
]


class Workbench:
    def __init__(self, config: WorkbenchConfig, search_client: SearchClient | None = None):
        self.config = config
        self.store = RecordStore(config.workspace_path)
        self.registry = ProviderRegistry(timeout_s=config.timeout_s)
        for spec in self._provider_specs():
            self.registry.register_provider(spec)
        stopwords = (
            load_wordlist(config.stopwords_file)
            if config.stopwords_file
            else DEFAULT_STOPWORDS
        )
        hedging = (
            load_markers(config.hedging_file)
            if config.hedging_file
            else DEFAULT_HEDGING_MARKERS
        )
        self.manager = SessionManager(self.registry, stopwords=stopwords, hedging=hedging)
        self.corpus = CorpusIndex(
            max_chunk_tokens=config.max_chunk_tokens,
            chunk_overlap=config.chunk_overlap,
        )
        self.search_client: SearchClient = search_client or self._search_client()
        self.scorecards = ScorecardBook()
        self.metrics = (
            load_metrics_panel(config.metrics_file) if config.metrics_file else {}
        )
        self._restore()

    # --- wiring -----------------------------------------------------------

    def _provider_specs(self) -> list[ProviderSpec]:
        if self.config.providers_file:
            raw = json.loads(
                Path(self.config.providers_file).read_text(encoding="utf-8")
            )
            return load_provider_specs(raw)
        return list(DEFAULT_PROVIDER_SPECS)

    def _search_client(self) -> SearchClient:
        if self.config.search_fixture_file:
            return FixtureSearchClient.from_file(self.config.search_fixture_file)
        return FixtureSearchClient({})

    def _restore(self) -> None:
        """Rebuild in-memory state from the workspace records."""
        for rec in self.store.list_kind("corpus_doc"):
            self.corpus.ingest_document(CorpusDocument.from_dict(rec.payload))
        for rec in self.store.list_kind("scorecard"):
            self.scorecards.record_entry(ScorecardEntry.from_dict(rec.payload))
        for rec in self.store.list_kind("session"):
            self._restore_session(rec)

    def _restore_session(self, session_rec: StoreRecord) -> Session:
        payload = session_rec.payload
        session = Session(
            id=payload["id"],
            title=payload["title"],
            mode=payload["mode"],
            created_at=payload["created_at"],
            library=payload.get("library", {"templates": [], "bookmarks": []}),
        )
        prefix = f"{session.id}:"
        turns = [
            rec.payload
            for rec in self.store.list_kind("turn")
            if rec.id.startswith(prefix)
        ]
        for raw in sorted(turns, key=lambda t: t["index"]):
            session.turns.append(_decode_turn(raw))
        verifications = [
            rec.payload
            for rec in self.store.list_kind("verification")
            if rec.id.startswith(prefix)
        ]
        for raw in sorted(verifications, key=lambda v: v.get("seq", -1)):
            session.verifications.append(VerificationRecord.from_dict(raw))
        decisions = [
            rec.payload
            for rec in self.store.list_kind("decision")
            if rec.id.startswith(prefix)
        ]
        session.decisions = sorted(decisions, key=lambda d: d.get("seq", -1))
        return self.manager.adopt(session)

    def _save_session_header(self, session: Session) -> None:
        self.store.save(
            StoreRecord(kind="session", id=session.id, payload=session.header_dict())
        )

    def _save_turn(self, session: Session, turn: Turn) -> None:
        self.store.save(
            StoreRecord(
                kind="turn",
                id=f"{session.id}:t{turn.index}",
                payload={"session_id": session.id, **turn.to_dict()},
            )
        )

    def _save_verification(self, session: Session, record: VerificationRecord) -> None:
        self.store.save(
            StoreRecord(
                kind="verification",
                id=f"{session.id}:v{record.seq}",
                payload={"session_id": session.id, **record.to_dict()},
            )
        )

    # --- generation mode ----------------------------------------------------

    def create_session(self, title: str) -> Session:
        session = self.manager.create_session(title)
        self._save_session_header(session)
        return session

    def get_session(self, session_id: str) -> Session:
        return self.manager.get(session_id)

    def list_sessions(self) -> list[Session]:
        return self.manager.list_sessions()

    def submit_prompt(
        self, session_id: str, prompt: str, provider_ids: list[str] | None = None
    ) -> Turn:
        ids = provider_ids or [s.id for s in self.registry.specs()]
        turn = self.manager.submit_prompt(session_id, prompt, ids)
        self._save_turn(self.manager.get(session_id), turn)
        return turn

    def switch_mode(self, session_id: str, target_mode: str) -> Session:
        session = self.manager.switch_mode(session_id, target_mode)
        self._save_session_header(session)
        return session

    def manage_library(self, session_id: str, action: str, payload: dict) -> dict:
        library = self.manager.manage_library(session_id, action, payload)
        self._save_session_header(self.manager.get(session_id))
        return library

    def provider_specs(self) -> list[ProviderSpec]:
        return self.registry.specs()

    def help_text(self, mode: str) -> str:
        try:
            return HELP_TEXTS[mode]
        except KeyError:
            raise NotFound(f"no help for mode '{mode}'") from None

    def metrics_panel(self) -> dict:
        return self.metrics

    # --- corpus / source ----------------------------------------------------

    def ingest_document(
        self,
        body: str,
        title: str,
        doc_id: str | None = None,
        metadata: dict | None = None,
    ) -> tuple[CorpusDocument, int]:
        doc = CorpusDocument(
            doc_id=doc_id or uuid.uuid4().hex[:12],
            title=title,
            body=body,
            metadata=metadata or {},
        )
        count = self.corpus.ingest_document(doc)
        self.store.save(
            StoreRecord(kind="corpus_doc", id=doc.doc_id, payload=doc.to_dict())
        )
        return doc, count

    def ingest_file(self, path: str | Path, doc_id: str | None = None) -> tuple[CorpusDocument, int]:
        """Ingest a UTF-8 text or JSON corpus file.

        JSON files carry {"title", "body", optional "doc_id", "metadata"};
        anything else is treated as plain text titled by filename.
        """
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        if path.suffix.lower() == ".json":
            raw = json.loads(text)
            return self.ingest_document(
                body=raw["body"],
                title=raw.get("title", path.stem),
                doc_id=doc_id or raw.get("doc_id"),
                metadata=raw.get("metadata", {}),
            )
        return self.ingest_document(body=text, title=path.name, doc_id=doc_id)

    def verify_source(self, session_id: str, response_id: str) -> SourceVerification:
        session = self.manager.get(session_id)
        claims = session.claims_for(response_id)
        verification = self.corpus.verify_source(
            response_id,
            claims,
            tau_source=self.config.tau_source,
            theta_pass=self.config.theta_source_pass,
            top_k=self.config.top_k,
        )
        record = self.manager.record_verification(
            session_id,
            VerificationRecord(
                criterion="source",
                response_id=response_id,
                coverage=verification.coverage,
                passed=verification.passed,
                created_at=utc_now_iso(),
                detail=verification.to_dict(),
            ),
        )
        self._save_verification(session, record)
        return verification

    # --- double check ---------------------------------------------------------

    def run_double_check(self, session_id: str, response_id: str) -> DoubleCheckReport:
        session = self.manager.get(session_id)
        claims = session.claims_for(response_id)
        report = double_check(
            response_id,
            claims,
            self.search_client,
            tau_dc=self.config.tau_dc,
            theta_pass=self.config.theta_dc_pass,
        )
        record = self.manager.record_verification(
            session_id,
            VerificationRecord(
                criterion="double_check",
                response_id=response_id,
                coverage=report.coverage,
                passed=report.passed,
                created_at=utc_now_iso(),
                detail=report.to_dict(),
            ),
        )
        self._save_verification(session, record)
        return report

    # --- compare ---------------------------------------------------------------

    def run_compare(
        self, session_id: str, prompt: str, provider_ids: list[str] | None = None
    ) -> CompareReport:
        ids = provider_ids or [s.id for s in self.registry.specs()]
        report, turn, records = run_compare(
            self.manager,
            session_id,
            prompt,
            ids,
            tau_cluster=self.config.tau_cluster,
            min_support=self.config.min_support,
            theta_pass=self.config.theta_cmp_pass,
        )
        session = self.manager.get(session_id)
        self._save_turn(session, turn)
        for record in records:
            self._save_verification(session, record)
        return report

    # --- decision ----------------------------------------------------------------

    def decision_table(self, session_id: str) -> DecisionTable:
        session = self.manager.get(session_id)
        return build_decision_table(session, self.config.weights)

    def record_decision(
        self, session_id: str, response_id: str, rationale: str
    ) -> DecisionRecord:
        record = record_decision(
            self.manager, session_id, response_id, rationale, self.config.weights
        )
        session = self.manager.get(session_id)
        seq = len(session.decisions) - 1
        session.decisions[-1]["seq"] = seq
        self.store.save(
            StoreRecord(
                kind="decision",
                id=f"{session_id}:d{seq}",
                payload=dict(session.decisions[-1]),
            )
        )
        return record

    # --- scorecard -----------------------------------------------------------------

    def record_scorecard_entry(self, entry: ScorecardEntry) -> ScorecardEntry:
        self.scorecards.record_entry(entry)
        self.store.save(
            StoreRecord(
                kind="scorecard",
                id=f"{entry.rater_id}|{entry.tool_id}",
                payload=entry.to_dict(),
            )
        )
        return entry

    def scorecard_report(self, tool_id: str) -> TrustReport:
        return self.scorecards.aggregate(tool_id)

    def scorecard_compare(self, tool_a: str, tool_b: str) -> dict:
        return self.scorecards.compare_tools(tool_a, tool_b)

    def import_scorecard_csv(self, text: str) -> int:
        imported = ScorecardBook()
        count = imported.import_csv(text)
        for entry in imported.entries():
            self.record_scorecard_entry(entry)
        return count

    # --- archives ---------------------------------------------------------------------

    def export_session(self, session_id: str, out_path: str | Path):
        self.manager.get(session_id)  # SessionNotFound before touching disk
        return self.store.export_archive(session_id, out_path)

    def import_session(self, archive_path: str | Path) -> Session:
        session_id = self.store.import_archive(archive_path)
        return self._restore_session(self.store.load("session", session_id))


def _decode_turn(raw: dict) -> Turn:
    # persisted turn payloads carry an extra session_id key
    return Turn.from_dict({k: v for k, v in raw.items() if k != "session_id"})
