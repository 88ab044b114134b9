"""Persistent, user-editable storage of memory records and partner personas.

One JSON document per store (schema version 1): a records array, a personas
array, and a sessions array appended by the session layer. Writes go through
a temp-file rename so a crash never leaves a half-written store. All
mutations are serialized through a single lock; readers get snapshots.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from datetime import datetime
from pathlib import Path
from typing import Callable, Iterable

from .errors import EmptyText, NotFound, TextTooLong, TooManyTopics
from .model import (
    MAX_RECORD_CHARS,
    MAX_TOPIC_CHARS,
    MAX_TOPICS,
    Closeness,
    MemoryRecord,
    PartnerPersona,
    RecordOrigin,
    utcnow,
)

SCHEMA_VERSION = 1


class MemoryStore:
    """Thread-safe record/persona store backed by a single JSON file."""

    def __init__(self, path: str | Path, clock: Callable[[], datetime] = utcnow):
        self._path = Path(path)
        self._clock = clock
        self._lock = threading.RLock()
        self._records: list[MemoryRecord] = []
        self._personas: dict[str, PartnerPersona] = {}
        # Session payloads are opaque dicts owned by the session layer; the
        # store only persists and reloads them.
        self._sessions: dict[str, dict] = {}
        if self._path.exists():
            self._load()

    # -- records --------------------------------------------------------

    def add_record(
        self, text: str, origin: RecordOrigin = RecordOrigin.MANUAL
    ) -> MemoryRecord:
        trimmed = text.strip()
        if not trimmed:
            raise EmptyText("record text is empty after trimming")
        if len(trimmed) > MAX_RECORD_CHARS:
            raise TextTooLong(
                f"record text is {len(trimmed)} characters; limit is {MAX_RECORD_CHARS}"
            )
        with self._lock:
            now = self._clock()
            if self._records and now < self._records[-1].created_at:
                # keep created_at monotone even if the clock steps backwards
                now = self._records[-1].created_at
            record = MemoryRecord(
                id=uuid.uuid4().hex, text=trimmed, created_at=now, origin=origin
            )
            self._records.append(record)
            self._flush()
            return record

    def list_records(self) -> list[MemoryRecord]:
        """Records in insertion order."""
        with self._lock:
            return list(self._records)

    def get_record(self, record_id: str) -> MemoryRecord:
        with self._lock:
            for record in self._records:
                if record.id == record_id:
                    return record
        raise NotFound(f"no record with id {record_id!r}")

    def delete_record(self, record_id: str) -> None:
        with self._lock:
            kept = [r for r in self._records if r.id != record_id]
            if len(kept) == len(self._records):
                raise NotFound(f"no record with id {record_id!r}")
            self._records = kept
            self._flush()

    # -- personas -------------------------------------------------------

    def upsert_persona(
        self,
        partner_id: str,
        display_name: str,
        topic_preferences: Iterable[str],
        closeness: Closeness,
    ) -> PartnerPersona:
        topics = []
        for topic in topic_preferences:
            trimmed = topic.strip()
            if not trimmed:
                raise EmptyText("topic preference is empty after trimming")
            if len(trimmed) > MAX_TOPIC_CHARS:
                raise TextTooLong(
                    f"topic {trimmed[:20]!r}... is longer than {MAX_TOPIC_CHARS} characters"
                )
            topics.append(trimmed)
        if len(topics) > MAX_TOPICS:
            raise TooManyTopics(f"{len(topics)} topics given; limit is {MAX_TOPICS}")
        if not partner_id.strip():
            raise EmptyText("partner_id is empty")
        persona = PartnerPersona(
            partner_id=partner_id,
            display_name=display_name.strip() or partner_id,
            topic_preferences=tuple(topics),
            closeness=closeness,
        )
        with self._lock:
            self._personas[partner_id] = persona
            self._flush()
            return persona

    def get_persona(self, partner_id: str) -> PartnerPersona:
        with self._lock:
            persona = self._personas.get(partner_id)
        if persona is None:
            raise NotFound(f"no persona for partner {partner_id!r}")
        return persona

    def list_personas(self) -> list[PartnerPersona]:
        with self._lock:
            return list(self._personas.values())

    def delete_persona(self, partner_id: str) -> None:
        # Chat history for the partner is kept; sessions and personas are
        # independent records.
        with self._lock:
            if partner_id not in self._personas:
                raise NotFound(f"no persona for partner {partner_id!r}")
            del self._personas[partner_id]
            self._flush()

    # -- session payloads -------------------------------------------------

    def put_session(self, session_id: str, payload: dict) -> None:
        with self._lock:
            self._sessions[session_id] = payload
            self._flush()

    def get_session(self, session_id: str) -> dict | None:
        with self._lock:
            payload = self._sessions.get(session_id)
            return json.loads(json.dumps(payload)) if payload is not None else None

    def list_sessions(self) -> dict[str, dict]:
        with self._lock:
            return json.loads(json.dumps(self._sessions))

    # -- persistence ------------------------------------------------------

    def _flush(self) -> None:
        document = {
            "version": SCHEMA_VERSION,
            "records": [r.to_dict() for r in self._records],
            "personas": [p.to_dict() for p in self._personas.values()],
            "sessions": self._sessions,
        }
        self._path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self._path.with_suffix(self._path.suffix + ".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(document, fh, ensure_ascii=False, indent=2)
            fh.flush()
            os.fsync(fh.fileno())
        tmp.replace(self._path)

    def _load(self) -> None:
        with open(self._path, encoding="utf-8") as fh:
            document = json.load(fh)
        version = document.get("version")
        if version != SCHEMA_VERSION:
            raise ValueError(
                f"store file {self._path} has schema version {version!r}; "
                f"expected {SCHEMA_VERSION}"
            )
        self._records = [MemoryRecord.from_dict(r) for r in document.get("records", [])]
        self._personas = {
            p["partner_id"]: PartnerPersona.from_dict(p)
            for p in document.get("personas", [])
        }
        self._sessions = document.get("sessions", {})
