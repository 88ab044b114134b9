#!/usr/bin/env python3
"""Offline walkthrough of one full conversation against the mock provider.

Seeds a temporary store with the demo fixture, sends the park utterance,
picks and adjusts suggestions, ends the session, archives it, then shows the
archived memory being retrieved by a follow-up utterance.

    python scripts/demo_conversation.py
"""

from __future__ import annotations

import tempfile
from pathlib import Path

from memochat.api import default_vector_table_path
from memochat.embeddings import VectorTable
from memochat.fixtures import PARK_UTTERANCE, seed_demo_store
from memochat.generation import GenerationClient, MockProvider, ProviderConfig
from memochat.prompts import PromptComposer
from memochat.retrieval import Retriever
from memochat.session import SessionManager
from memochat.store import MemoryStore


def show(suggestions) -> None:
    for i, s in enumerate(suggestions.suggestions):
        print(f"  [{i}] ({s.closeness_label.value}) {s.text}")
    if suggestions.adjustment_tags:
        print(f"  tags: {', '.join(suggestions.adjustment_tags)}")


def main() -> None:
    workdir = Path(tempfile.mkdtemp(prefix="memochat-demo-"))
    store = MemoryStore(workdir / "store.json")
    seed_demo_store(store)
    retriever = Retriever(VectorTable.load(default_vector_table_path()))
    manager = SessionManager(
        store, retriever, PromptComposer(),
        GenerationClient(MockProvider(), ProviderConfig()),
    )

    print("== records in store ==")
    for record in store.list_records():
        print(f"  - {record.text}")

    session = manager.start_session("grandson")
    print(f"\n== partner says ==\n  {PARK_UTTERANCE}")
    suggestions = manager.receive_partner_utterance(session.session_id, PARK_UTTERANCE)
    print("\n== suggestions ==")
    show(suggestions)

    print("\n== adjust suggestion 0 with 'Disagree' ==")
    show(manager.adjust_suggestion(session.session_id, 0, "Disagree"))

    print("\n== user picks suggestion 3 ==")
    turn = manager.pick_suggestion(session.session_id, 3)
    print(f"  user says: {turn.text}")

    manager.receive_partner_utterance(session.session_id, "That sounds great, see you there!")
    manager.manual_input(session.session_id, "I will bring my fishing rod.")

    metrics = manager.end_session(session.session_id)
    print(f"\n== metrics ==\n  {metrics.to_dict()}")

    archived = manager.archive_session(session.session_id)
    print(f"\n== archived transcript ==\n{archived.text}")

    follow_up = "did you go fishing in the end?"
    hits = retriever.retrieve_relevant(follow_up, store.list_records())
    print(f"\n== follow-up retrieval for: {follow_up!r} ==")
    for hit in hits:
        marker = "*" if hit.id == archived.id else " "
        print(f" {marker} {hit.text[:70]}")
    print(f"\nstore file: {workdir / 'store.json'}")


if __name__ == "__main__":
    main()
