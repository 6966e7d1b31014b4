"""Durable workspace storage: JSON-lines records plus portable archives.

Every persisted thing is a StoreRecord written as one JSON line to a
per-kind file under the workspace directory. Saves append (last line
for a given id wins), so the files are diffable and a torn final line
from a crashed write is ignored on load, leaving the previous state.
A session exports to a single zip archive whose manifest is validated
on import; record ids are preserved, never reassigned.
"""

from __future__ import annotations

import json
import zipfile
from dataclasses import dataclass, field
from pathlib import Path

from filelock import FileLock

from .errors import CorruptArchive, NotFound, VersionUnsupported
from .providers import utc_now_iso

SCHEMA_VERSION = 1
RECORD_KINDS = ("session", "turn", "verification", "decision", "scorecard", "corpus_doc")

_LOCK_TIMEOUT_S = 10.0


@dataclass(frozen=True)
class StoreRecord:
    kind: str
    id: str
    payload: dict
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "id": self.id,
            "schema_version": self.schema_version,
            "payload": self.payload,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "StoreRecord":
        return cls(
            kind=raw["kind"],
            id=raw["id"],
            payload=raw["payload"],
            schema_version=raw["schema_version"],
        )

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


@dataclass
class SessionArchive:
    manifest: dict
    records: list[StoreRecord] = field(default_factory=list)


class RecordStore:
    """Single-writer JSONL store for one workspace directory."""

    def __init__(self, workspace: str | Path):
        self.workspace = Path(workspace)
        self.records_dir = self.workspace / "records"
        self.records_dir.mkdir(parents=True, exist_ok=True)
        self._write_lock = FileLock(
            str(self.workspace / ".lock"), timeout=_LOCK_TIMEOUT_S
        )
        self._index: dict[tuple[str, str], StoreRecord] = {}
        self._reload()

    def _file_for(self, kind: str) -> Path:
        return self.records_dir / f"{kind}.jsonl"

    def _reload(self) -> None:
        self._index.clear()
        for kind in RECORD_KINDS:
            path = self._file_for(kind)
            if not path.exists():
                continue
            lines = path.read_text(encoding="utf-8").splitlines()
            for lineno, line in enumerate(lines):
                if not line.strip():
                    continue
                try:
                    record = StoreRecord.from_dict(json.loads(line))
                except (json.JSONDecodeError, KeyError):
                    if lineno == len(lines) - 1:
                        continue  # torn final line from a crashed save
                    raise
                self._index[(record.kind, record.id)] = record

    def save(self, record: StoreRecord) -> None:
        if record.kind not in RECORD_KINDS:
            raise ValueError(f"unknown record kind '{record.kind}'")
        if record.schema_version < 1:
            raise ValueError("schema_version must be >= 1")
        line = record.canonical_json()
        with self._write_lock:
            with open(self._file_for(record.kind), "a", encoding="utf-8") as handle:
                handle.write(line + "\n")
                handle.flush()
            self._index[(record.kind, record.id)] = record

    def load(self, kind: str, record_id: str) -> StoreRecord:
        try:
            return self._index[(kind, record_id)]
        except KeyError:
            raise NotFound(f"no record ({kind}, {record_id})") from None

    def exists(self, kind: str, record_id: str) -> bool:
        return (kind, record_id) in self._index

    def list_kind(self, kind: str) -> list[StoreRecord]:
        return sorted(
            (rec for (k, _), rec in self._index.items() if k == kind),
            key=lambda rec: rec.id,
        )

    # --- session archives -------------------------------------------------

    def session_records(self, session_id: str) -> list[StoreRecord]:
        """The session record plus its turns, verifications, decisions."""
        out = [self.load("session", session_id)]
        prefix = f"{session_id}:"
        for kind in ("turn", "verification", "decision"):
            out.extend(
                rec for rec in self.list_kind(kind) if rec.id.startswith(prefix)
            )
        return out

    def export_archive(self, session_id: str, out_path: str | Path) -> SessionArchive:
        records = self.session_records(session_id)
        counts: dict[str, int] = {}
        for rec in records:
            counts[rec.kind] = counts.get(rec.kind, 0) + 1
        manifest = {
            "session_id": session_id,
            "created_at": utc_now_iso(),
            "record_count": len(records),
            "counts_by_kind": counts,
            "schema_versions": sorted({rec.schema_version for rec in records}),
        }
        archive = SessionArchive(manifest=manifest, records=records)
        with zipfile.ZipFile(out_path, "w", compression=zipfile.ZIP_DEFLATED) as zf:
            zf.writestr("manifest.json", json.dumps(manifest, sort_keys=True))
            zf.writestr(
                "records.jsonl",
                "".join(rec.canonical_json() + "\n" for rec in records),
            )
        return archive

    def import_archive(self, archive_path: str | Path) -> str:
        """Load an archive into this workspace, preserving every id."""
        archive = read_archive(archive_path)
        for record in archive.records:
            self.save(record)
        return archive.manifest["session_id"]


def read_archive(archive_path: str | Path) -> SessionArchive:
    """Parse and validate an archive without touching any store."""
    try:
        with zipfile.ZipFile(archive_path) as zf:
            manifest = json.loads(zf.read("manifest.json").decode("utf-8"))
            lines = zf.read("records.jsonl").decode("utf-8").splitlines()
    except (zipfile.BadZipFile, KeyError, json.JSONDecodeError) as exc:
        raise CorruptArchive(f"unreadable archive: {exc}") from exc
    records = []
    for line in lines:
        if not line.strip():
            continue
        try:
            records.append(StoreRecord.from_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError) as exc:
            raise CorruptArchive(f"bad record line: {exc}") from exc
    if manifest.get("record_count") != len(records):
        raise CorruptArchive(
            f"manifest declares {manifest.get('record_count')} records, "
            f"archive holds {len(records)}"
        )
    unsupported = [v for v in manifest.get("schema_versions", []) if v > SCHEMA_VERSION]
    unsupported += [r.schema_version for r in records if r.schema_version > SCHEMA_VERSION]
    if unsupported:
        raise VersionUnsupported(
            f"archive uses schema versions {sorted(set(unsupported))}, "
            f"this build supports <= {SCHEMA_VERSION}"
        )
    if not manifest.get("session_id"):
        raise CorruptArchive("manifest has no session_id")
    return SessionArchive(manifest=manifest, records=records)
