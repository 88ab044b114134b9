"""Demo seed data: the park walkthrough plus a couple of contrasting records."""

from __future__ import annotations

from .model import Closeness
from .store import MemoryStore

PARK_RECORD_TEXT = (
    "I like fishing with friends in the park… watching the stars near XiShan Park."
)
PARK_UTTERANCE = (
    "I went to the park the day before yesterday… Would you like to go out and see it?"
)

DEMO_RECORDS = (
    PARK_RECORD_TEXT,
    "My grandson is doing well at school, his teacher praised his homework.",
    "I used to cook dumplings every holiday, the whole family loved them.",
)

DEMO_PARTNERS = (
    ("grandson", "Grandson", ("weather", "grandson's studies"), Closeness.VERY_FAMILIAR),
    ("neighbor", "Neighbor Wang", ("weather", "fishing"), Closeness.AVERAGE),
)


def seed_demo_store(store: MemoryStore) -> None:
    """Idempotent enough for a demo: skips records whose text already exists."""
    existing = {r.text for r in store.list_records()}
    for text in DEMO_RECORDS:
        if text not in existing:
            store.add_record(text)
    for partner_id, name, topics, closeness in DEMO_PARTNERS:
        store.upsert_persona(partner_id, name, topics, closeness)
