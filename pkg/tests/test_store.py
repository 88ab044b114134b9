"""Store contract: validation, CRUD semantics, ordering, persistence."""

from __future__ import annotations

import json
import random

import pytest

from memochat.errors import EmptyText, NotFound, TextTooLong, TooManyTopics, UnknownCloseness
from memochat.model import Closeness, RecordOrigin
from memochat.store import MemoryStore

PARK_TEXT = "I like fishing with friends in the park… watching the stars near XiShan Park."


def test_add_record_stores_text(store):
    record = store.add_record(PARK_TEXT)
    assert record.text == PARK_TEXT
    assert record.origin is RecordOrigin.MANUAL
    assert store.list_records() == [record]


def test_add_record_rejects_whitespace_only(store):
    with pytest.raises(EmptyText):
        store.add_record("   ")


def test_add_record_rejects_overlong_text(store):
    with pytest.raises(TextTooLong):
        store.add_record("x" * 2001)
    # boundary: exactly 2000 is fine
    store.add_record("x" * 2000)


def test_add_record_trims_whitespace(store):
    record = store.add_record("  hello world \n")
    assert record.text == "hello world"


def test_record_ids_unique_and_order_preserved(store):
    records = [store.add_record(f"memory number {i}") for i in range(10)]
    assert len({r.id for r in records}) == 10
    assert store.list_records() == records
    times = [r.created_at for r in records]
    assert times == sorted(times)


def test_upsert_persona_roundtrip(store):
    persona = store.upsert_persona(
        "p1", "Grandson", ["weather", "grandson's studies"], Closeness.VERY_FAMILIAR
    )
    assert persona.topic_preferences == ("weather", "grandson's studies")
    assert store.get_persona("p1") == persona


def test_upsert_persona_replaces_prior(store):
    store.upsert_persona("p1", "Grandson", ["weather"], Closeness.VERY_FAMILIAR)
    updated = store.upsert_persona("p1", "Grandson", [], Closeness.AVERAGE)
    assert store.get_persona("p1") == updated
    assert store.get_persona("p1").topic_preferences == ()
    assert len(store.list_personas()) == 1


def test_upsert_persona_empty_topics_allowed(store):
    persona = store.upsert_persona("p1", "Anyone", [], Closeness.AVERAGE)
    assert persona.topic_preferences == ()


def test_upsert_persona_too_many_topics(store):
    with pytest.raises(TooManyTopics):
        store.upsert_persona("p1", "X", [f"topic {i}" for i in range(21)], Closeness.AVERAGE)
    store.upsert_persona("p1", "X", [f"topic {i}" for i in range(20)], Closeness.AVERAGE)


def test_unknown_closeness_rejected_at_deserialization():
    with pytest.raises(UnknownCloseness):
        Closeness.parse("BestFriends")


def test_empty_store_lists_nothing(store):
    assert store.list_records() == []
    assert store.list_personas() == []


def test_delete_record(store):
    record = store.add_record("soon gone")
    keeper = store.add_record("still here")
    store.delete_record(record.id)
    assert store.list_records() == [keeper]
    with pytest.raises(NotFound):
        store.delete_record(record.id)


def test_get_persona_missing(store):
    with pytest.raises(NotFound):
        store.get_persona("missing")


def test_reload_roundtrip_byte_identical(tmp_path):
    path = tmp_path / "store.json"
    store = MemoryStore(path)
    texts = [PARK_TEXT, "第二条记忆：和老朋友下棋。", "tabs\tand\nnewlines preserved"]
    for t in texts:
        store.add_record(t)
    store.upsert_persona("p1", "孙子", ["天气", "学习"], Closeness.FAMILIAR)

    reloaded = MemoryStore(path)
    assert [r.text for r in reloaded.list_records()] == [r.text for r in store.list_records()]
    assert [r.to_dict() for r in reloaded.list_records()] == [r.to_dict() for r in store.list_records()]
    assert reloaded.get_persona("p1") == store.get_persona("p1")


def test_store_file_is_versioned_utf8_json(tmp_path):
    path = tmp_path / "store.json"
    store = MemoryStore(path)
    store.add_record("一条中文记忆")
    document = json.loads(path.read_text(encoding="utf-8"))
    assert document["version"] == 1
    assert document["records"][0]["text"] == "一条中文记忆"
    # RFC 3339 timestamp: date, T separator, UTC offset
    assert "T" in document["records"][0]["created_at"]
    assert document["records"][0]["created_at"].endswith("+00:00")


def test_crud_sequence_matches_reference_map(tmp_path):
    """Random CRUD sequence against the store equals the same sequence
    applied to a plain dict/list reference."""
    rng = random.Random(7)
    store = MemoryStore(tmp_path / "store.json")
    reference: list[tuple[str, str]] = []  # (id, text) in insertion order

    for step in range(200):
        op = rng.choice(["add", "add", "delete", "list"])
        if op == "add":
            text = f"record {step} " + "".join(rng.choices("abcdefg", k=5))
            record = store.add_record(text)
            reference.append((record.id, text))
        elif op == "delete" and reference:
            victim = rng.choice(reference)
            store.delete_record(victim[0])
            reference.remove(victim)
        else:
            got = [(r.id, r.text) for r in store.list_records()]
            assert got == reference
    assert [(r.id, r.text) for r in store.list_records()] == reference
