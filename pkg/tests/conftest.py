"""Shared fixtures: a tiny hand-checkable vector table, the bundled toy
table, seeded stores, and a fully wired offline session stack. Also the
per-criterion pass/fail summary for the acceptance suite."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

from memochat.api import default_vector_table_path
from memochat.embeddings import VectorTable
from memochat.fixtures import seed_demo_store
from memochat.generation import GenerationClient, MockProvider, ProviderConfig
from memochat.prompts import PromptComposer
from memochat.retrieval import Retriever, default_stopwords
from memochat.session import SessionManager
from memochat.store import MemoryStore

# 5-word table in R^2 at known angles; similarities are easy to reason about
# by hand: east(0°), northeast(45°), north(90°), west(180°), south(270°).
MINI_TABLE = """\
# hand-checkable 2-d table
east\t1.0 0.0
northeast\t1.0 1.0
north\t0.0 1.0
west\t-1.0 0.0
south\t0.0 -1.0
"""


@pytest.fixture
def mini_table(tmp_path: Path) -> VectorTable:
    path = tmp_path / "mini_vectors.txt"
    path.write_text(MINI_TABLE, encoding="utf-8")
    return VectorTable.load(path)


@pytest.fixture(scope="session")
def toy_table() -> VectorTable:
    return VectorTable.load(default_vector_table_path())


@pytest.fixture
def store(tmp_path: Path) -> MemoryStore:
    return MemoryStore(tmp_path / "store.json")


@pytest.fixture
def seeded_store(store: MemoryStore) -> MemoryStore:
    seed_demo_store(store)
    return store


@pytest.fixture
def retriever(toy_table: VectorTable) -> Retriever:
    return Retriever(toy_table)


@pytest.fixture
def composer() -> PromptComposer:
    return PromptComposer()


@pytest.fixture
def mock_client() -> GenerationClient:
    return GenerationClient(MockProvider(), ProviderConfig())


class FakeClock:
    """Deterministic, manually advanced clock for timing-sensitive tests."""

    def __init__(self, start: datetime | None = None):
        self.now = start or datetime(2024, 5, 1, 9, 0, 0, tzinfo=timezone.utc)

    def __call__(self) -> datetime:
        return self.now

    def advance(self, seconds: float) -> None:
        self.now += timedelta(seconds=seconds)


@pytest.fixture
def clock() -> FakeClock:
    return FakeClock()


@pytest.fixture
def manager(seeded_store, retriever, composer, mock_client, clock) -> SessionManager:
    return SessionManager(seeded_store, retriever, composer, mock_client, clock=clock)


# -- acceptance reporting ------------------------------------------------------

_criterion_results: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(num, label): acceptance criterion this test implements"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call":
        num, label = marker.args
        _criterion_results[num] = ("PASS" if report.passed else "FAIL", label)


def pytest_terminal_summary(terminalreporter):
    if not _criterion_results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criterion_results):
        verdict, label = _criterion_results[num]
        terminalreporter.write_line(f"criterion {num:2d} {verdict}  {label}")
