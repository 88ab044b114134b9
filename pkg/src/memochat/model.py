"""Core domain types: memory records, partner personas, turns, suggestions.

All types are plain dataclasses with explicit ``to_dict``/``from_dict``
converters so the persisted JSON stays stable and hand-inspectable.
Timestamps are timezone-aware UTC datetimes, serialized as RFC 3339 strings.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import UnknownCloseness

MAX_RECORD_CHARS = 2000
MAX_TOPICS = 20
MAX_TOPIC_CHARS = 50


class Closeness(enum.Enum):
    """How close the user is to a conversation partner; controls how much
    personal-record detail suggestions disclose."""

    AVERAGE = "Average"
    FAMILIAR = "Familiar"
    VERY_FAMILIAR = "VeryFamiliar"

    @classmethod
    def parse(cls, value: str) -> "Closeness":
        for member in cls:
            if member.value == value:
                return member
        raise UnknownCloseness(f"unknown closeness level: {value!r}")


class RecordOrigin(enum.Enum):
    MANUAL = "manual"
    ARCHIVED_CONVERSATION = "archived_conversation"


class Speaker(enum.Enum):
    USER = "User"
    PARTNER = "Partner"


class TurnSource(enum.Enum):
    SUGGESTION_PICK = "SuggestionPick"
    ADJUSTED = "Adjusted"
    MANUAL = "Manual"
    PARTNER_SPEECH = "PartnerSpeech"


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    """RFC 3339 with microseconds, always UTC."""
    return ts.astimezone(timezone.utc).isoformat()


def parse_timestamp(raw: str) -> datetime:
    ts = datetime.fromisoformat(raw)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


@dataclass(frozen=True)
class MemoryRecord:
    """One text-based memory of the user: events, routines, experiences."""

    id: str
    text: str
    created_at: datetime
    origin: RecordOrigin

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "text": self.text,
            "created_at": format_timestamp(self.created_at),
            "origin": self.origin.value,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "MemoryRecord":
        return cls(
            id=raw["id"],
            text=raw["text"],
            created_at=parse_timestamp(raw["created_at"]),
            origin=RecordOrigin(raw["origin"]),
        )


@dataclass(frozen=True)
class PartnerPersona:
    """Per-partner profile: expected topics plus one closeness level."""

    partner_id: str
    display_name: str
    topic_preferences: tuple[str, ...]
    closeness: Closeness

    def to_dict(self) -> dict:
        return {
            "partner_id": self.partner_id,
            "display_name": self.display_name,
            "topic_preferences": list(self.topic_preferences),
            "closeness": self.closeness.value,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "PartnerPersona":
        return cls(
            partner_id=raw["partner_id"],
            display_name=raw["display_name"],
            topic_preferences=tuple(raw["topic_preferences"]),
            closeness=Closeness.parse(raw["closeness"]),
        )


@dataclass(frozen=True)
class ChatTurn:
    speaker: Speaker
    text: str
    committed_at: datetime
    source: TurnSource

    def to_dict(self) -> dict:
        return {
            "speaker": self.speaker.value,
            "text": self.text,
            "committed_at": format_timestamp(self.committed_at),
            "source": self.source.value,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ChatTurn":
        return cls(
            speaker=Speaker(raw["speaker"]),
            text=raw["text"],
            committed_at=parse_timestamp(raw["committed_at"]),
            source=TurnSource(raw["source"]),
        )


@dataclass(frozen=True)
class Suggestion:
    """One candidate sentence, tagged with the closeness level it speaks at."""

    text: str
    closeness_label: Closeness

    def to_dict(self) -> dict:
        return {"text": self.text, "closeness_label": self.closeness_label.value}

    @classmethod
    def from_dict(cls, raw: dict) -> "Suggestion":
        return cls(text=raw["text"], closeness_label=Closeness.parse(raw["closeness_label"]))


@dataclass(frozen=True)
class SuggestionSet:
    """Up to four candidate sentences plus contextual adjustment tags.

    ``degraded`` flags sets that parsed with fewer/more lines than the four
    the response contract asks for; the UI shows a notice for those.
    """

    suggestions: tuple[Suggestion, ...]
    adjustment_tags: tuple[str, ...] = ()
    degraded: bool = False

    def to_dict(self) -> dict:
        return {
            "suggestions": [s.to_dict() for s in self.suggestions],
            "adjustment_tags": list(self.adjustment_tags),
            "degraded": self.degraded,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "SuggestionSet":
        return cls(
            suggestions=tuple(Suggestion.from_dict(s) for s in raw["suggestions"]),
            adjustment_tags=tuple(raw.get("adjustment_tags", [])),
            degraded=bool(raw.get("degraded", False)),
        )


@dataclass(frozen=True)
class SessionMetrics:
    """Per-session efficiency measures.

    ``wpm`` is characters produced by the user per minute of whole-session
    duration; ``rounds`` counts user-message-then-reply pairs.
    """

    rounds: int
    wpm: float
    duration_min: float
    customization_count: int
    degenerate_duration: bool = False

    def to_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "wpm": self.wpm,
            "duration_min": self.duration_min,
            "customization_count": self.customization_count,
            "degenerate_duration": self.degenerate_duration,
        }
