"""Conversation sessions: utterance in, suggestions out, user commits a turn.

Each session is single-writer: concurrent operations on the same session are
rejected with Busy rather than queued, so the UI always knows whether its
action landed. Every commit persists the whole session payload through the
store, which is what makes kill-and-restart recovery work.
"""

from __future__ import annotations

import threading
import uuid
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime
from typing import Callable

from .errors import (
    AlreadyEnded,
    Busy,
    EmptyText,
    IndexOutOfRange,
    InvalidArgument,
    NoPending,
    NoStarters,
    NotFound,
    SessionEmpty,
    UnknownPartner,
    UnknownSession,
    UnknownTag,
)
from .generation import GenerationClient, parse_suggestions
from .model import (
    MAX_RECORD_CHARS,
    ChatTurn,
    MemoryRecord,
    RecordOrigin,
    SessionMetrics,
    Speaker,
    SuggestionSet,
    TurnSource,
    format_timestamp,
    parse_timestamp,
    utcnow,
)
from .prompts import PromptComposer
from .retrieval import Retriever
from .store import MemoryStore


@dataclass
class ConversationSession:
    session_id: str
    partner_id: str
    started_at: datetime
    turns: list[ChatTurn] = field(default_factory=list)
    ended_at: datetime | None = None
    pending: SuggestionSet | None = None
    customization_count: int = 0

    @property
    def active(self) -> bool:
        return self.ended_at is None

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "partner_id": self.partner_id,
            "started_at": format_timestamp(self.started_at),
            "ended_at": format_timestamp(self.ended_at) if self.ended_at else None,
            "turns": [t.to_dict() for t in self.turns],
            "pending": self.pending.to_dict() if self.pending else None,
            "customization_count": self.customization_count,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ConversationSession":
        return cls(
            session_id=raw["session_id"],
            partner_id=raw["partner_id"],
            started_at=parse_timestamp(raw["started_at"]),
            ended_at=parse_timestamp(raw["ended_at"]) if raw.get("ended_at") else None,
            turns=[ChatTurn.from_dict(t) for t in raw.get("turns", [])],
            pending=SuggestionSet.from_dict(raw["pending"]) if raw.get("pending") else None,
            customization_count=int(raw.get("customization_count", 0)),
        )


def compute_metrics(session: ConversationSession) -> SessionMetrics:
    """Pure re-derivation of metrics from the persisted session payload."""
    if session.ended_at is None:
        raise InvalidArgument("metrics are defined for ended sessions only")
    duration_s = (session.ended_at - session.started_at).total_seconds()
    duration_min = duration_s / 60.0
    user_chars = sum(len(t.text) for t in session.turns if t.speaker is Speaker.USER)
    # a round is one user message followed by one partner reply
    rounds = 0
    awaiting_reply = False
    for turn in session.turns:
        if turn.speaker is Speaker.USER:
            awaiting_reply = True
        elif awaiting_reply:
            rounds += 1
            awaiting_reply = False
    degenerate = duration_s < 1.0
    wpm = 0.0 if degenerate else user_chars / duration_min
    return SessionMetrics(
        rounds=rounds,
        wpm=wpm,
        duration_min=duration_min,
        customization_count=session.customization_count,
        degenerate_duration=degenerate,
    )


def render_transcript(session: ConversationSession) -> str:
    """Speaker-prefixed transcript, clipped from the front if it would not
    fit a memory record (recent turns are the valuable part)."""
    text = "\n".join(f"{t.speaker.value}: {t.text}" for t in session.turns)
    if len(text) > MAX_RECORD_CHARS:
        text = "…" + text[-(MAX_RECORD_CHARS - 1):]
    return text


class SessionManager:
    """Owns all live sessions and drives the suggestion pipeline."""

    def __init__(
        self,
        store: MemoryStore,
        retriever: Retriever,
        composer: PromptComposer,
        client: GenerationClient,
        clock: Callable[[], datetime] = utcnow,
    ):
        self._store = store
        self._retriever = retriever
        self._composer = composer
        self._client = client
        self._clock = clock
        self._registry_lock = threading.Lock()
        self._sessions: dict[str, ConversationSession] = {}
        self._locks: dict[str, threading.Lock] = {}
        for session_id, payload in store.list_sessions().items():
            self._sessions[session_id] = ConversationSession.from_dict(payload)
            self._locks[session_id] = threading.Lock()

    # -- bookkeeping ------------------------------------------------------

    def _get(self, session_id: str) -> ConversationSession:
        with self._registry_lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no session with id {session_id!r}")
        return session

    @contextmanager
    def _exclusive(self, session_id: str):
        with self._registry_lock:
            lock = self._locks.get(session_id)
        if lock is None:
            raise UnknownSession(f"no session with id {session_id!r}")
        if not lock.acquire(blocking=False):
            raise Busy(f"session {session_id} has an operation in flight")
        try:
            yield self._get(session_id)
        finally:
            lock.release()

    def _persist(self, session: ConversationSession) -> None:
        self._store.put_session(session.session_id, session.to_dict())

    def _now_monotone(self, session: ConversationSession) -> datetime:
        now = self._clock()
        if session.turns and now < session.turns[-1].committed_at:
            now = session.turns[-1].committed_at
        return now

    def _commit(
        self,
        session: ConversationSession,
        speaker: Speaker,
        text: str,
        source: TurnSource,
    ) -> ChatTurn:
        turn = ChatTurn(
            speaker=speaker,
            text=text,
            committed_at=self._now_monotone(session),
            source=source,
        )
        session.turns.append(turn)
        session.pending = None
        self._persist(session)
        return turn

    def _persona(self, session: ConversationSession):
        try:
            return self._store.get_persona(session.partner_id)
        except NotFound as exc:
            raise UnknownPartner(str(exc)) from exc

    @staticmethod
    def _require_active(session: ConversationSession) -> None:
        if not session.active:
            raise AlreadyEnded(f"session {session.session_id} has ended")

    # -- operations ---------------------------------------------------------

    def start_session(self, partner_id: str) -> ConversationSession:
        try:
            self._store.get_persona(partner_id)
        except NotFound as exc:
            raise UnknownPartner(str(exc)) from exc
        session = ConversationSession(
            session_id=uuid.uuid4().hex,
            partner_id=partner_id,
            started_at=self._clock(),
        )
        with self._registry_lock:
            self._sessions[session.session_id] = session
            self._locks[session.session_id] = threading.Lock()
        self._persist(session)
        return session

    def get_session(self, session_id: str) -> ConversationSession:
        return self._get(session_id)

    def list_sessions(self) -> list[ConversationSession]:
        with self._registry_lock:
            return list(self._sessions.values())

    def receive_partner_utterance(self, session_id: str, text: str) -> SuggestionSet:
        """Commit the partner's turn, then run retrieve → compose → complete
        → parse. The partner turn stays committed even if generation fails."""
        with self._exclusive(session_id) as session:
            self._require_active(session)
            trimmed = text.strip()
            if not trimmed:
                raise EmptyText("partner utterance is empty")
            persona = self._persona(session)
            self._commit(session, Speaker.PARTNER, trimmed, TurnSource.PARTNER_SPEECH)
            retrieved = self._retriever.retrieve_relevant(
                trimmed, self._store.list_records()
            )
            bundle = self._composer.compose_response_prompt(
                trimmed, retrieved, persona, history=session.turns[:-1]
            )
            raw = self._client.complete(bundle)
            suggestions = parse_suggestions(raw, expected=4)
            session.pending = suggestions
            self._persist(session)
            return suggestions

    def request_starters(self, session_id: str) -> SuggestionSet:
        with self._exclusive(session_id) as session:
            self._require_active(session)
            records = self._store.list_records()
            if not records:
                raise NoStarters("the record store is empty")
            persona = self._persona(session)
            starters = self._retriever.select_starter_records(records, persona)
            bundle = self._composer.compose_starter_prompt(
                starters, persona, history=session.turns
            )
            raw = self._client.complete(bundle)
            suggestions = parse_suggestions(raw, expected=len(starters))
            session.pending = suggestions
            self._persist(session)
            return suggestions

    def pick_suggestion(self, session_id: str, index: int) -> ChatTurn:
        with self._exclusive(session_id) as session:
            self._require_active(session)
            if session.pending is None:
                raise NoPending("no pending suggestions to pick from")
            if not 0 <= index < len(session.pending.suggestions):
                raise IndexOutOfRange(
                    f"index {index} out of range for {len(session.pending.suggestions)} suggestions"
                )
            text = session.pending.suggestions[index].text
            return self._commit(session, Speaker.USER, text, TurnSource.SUGGESTION_PICK)

    def adjust_suggestion(self, session_id: str, index: int, tag: str) -> SuggestionSet:
        with self._exclusive(session_id) as session:
            self._require_active(session)
            if session.pending is None:
                raise NoPending("no pending suggestions to adjust")
            if not 0 <= index < len(session.pending.suggestions):
                raise IndexOutOfRange(
                    f"index {index} out of range for {len(session.pending.suggestions)} suggestions"
                )
            if tag not in session.pending.adjustment_tags:
                raise UnknownTag(f"tag {tag!r} is not one of the offered tags")
            persona = self._persona(session)
            original = session.pending.suggestions[index]
            last_partner = next(
                (t.text for t in reversed(session.turns) if t.speaker is Speaker.PARTNER),
                "",
            )
            bundle = self._composer.compose_adjustment_prompt(
                original.text,
                tag,
                last_partner,
                persona,
                original_level=original.closeness_label,
            )
            raw = self._client.complete(bundle)
            rewrite = parse_suggestions(raw).suggestions[0]
            suggestions = list(session.pending.suggestions)
            suggestions[index] = rewrite
            session.pending = SuggestionSet(
                suggestions=tuple(suggestions),
                adjustment_tags=session.pending.adjustment_tags,
                degraded=session.pending.degraded,
            )
            session.customization_count += 1
            self._persist(session)
            return session.pending

    def manual_input(self, session_id: str, text: str) -> ChatTurn:
        with self._exclusive(session_id) as session:
            self._require_active(session)
            trimmed = text.strip()
            if not trimmed:
                raise EmptyText("manual input is empty")
            # manual entry supersedes generation; pending is discarded by the commit
            return self._commit(session, Speaker.USER, trimmed, TurnSource.MANUAL)

    def end_session(self, session_id: str) -> SessionMetrics:
        with self._exclusive(session_id) as session:
            if not session.active:
                raise AlreadyEnded(f"session {session_id} has already ended")
            session.ended_at = self._now_monotone(session)
            session.pending = None
            self._persist(session)
            return compute_metrics(session)

    def archive_session(self, session_id: str) -> MemoryRecord:
        """Turn an ended session into one new memory record so later
        conversations can retrieve it."""
        with self._exclusive(session_id) as session:
            if session.active:
                raise InvalidArgument("end the session before archiving it")
            if not any(t.speaker is Speaker.USER for t in session.turns):
                raise SessionEmpty("nothing said by the user; not archiving")
            return self._store.add_record(
                render_transcript(session), origin=RecordOrigin.ARCHIVED_CONVERSATION
            )

    def metrics(self, session_id: str) -> SessionMetrics:
        return compute_metrics(self._get(session_id))
