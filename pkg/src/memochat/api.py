"""HTTP/JSON boundary for the companion UI and scripts.

Plain request/response: suggestion latency is one round trip and the UI
polls session state. Per-session serialization surfaces as HTTP 409; every
error body carries a stable code and no stack trace.
"""

from __future__ import annotations

import logging
from importlib import resources
from pathlib import Path

from fastapi import Depends, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .config import AppConfig
from .embeddings import VectorTable
from .errors import InvalidArgument, MemoChatError, Unauthorized
from .generation import GenerationClient, make_provider
from .model import Closeness, RecordOrigin
from .prompts import PromptComposer
from .retrieval import Retriever, default_stopwords, load_stopwords
from .session import SessionManager, compute_metrics
from .store import MemoryStore

logger = logging.getLogger(__name__)


def default_vector_table_path() -> Path:
    return Path(str(resources.files("memochat").joinpath("data/toy_vectors.txt")))


class RecordIn(BaseModel):
    text: str
    origin: str = "manual"


class PersonaIn(BaseModel):
    display_name: str = ""
    topic_preferences: list[str] = Field(default_factory=list)
    closeness: str


class SessionIn(BaseModel):
    partner_id: str


class UtteranceIn(BaseModel):
    text: str


class PickIn(BaseModel):
    index: int


class AdjustIn(BaseModel):
    index: int
    tag: str


class ManualIn(BaseModel):
    text: str


def _session_state(manager: SessionManager, session_id: str) -> dict:
    session = manager.get_session(session_id)
    state = session.to_dict()
    state["metrics"] = compute_metrics(session).to_dict() if session.ended_at else None
    return state


def create_app(
    store_path: str | Path,
    vectors_path: str | Path | None = None,
    stopwords_path: str | Path | None = None,
    config: AppConfig | None = None,
) -> FastAPI:
    """Build the service; raises at startup on an unreadable store or a
    malformed vector table (the diagnostic names the offending line)."""
    config = config or AppConfig()
    store = MemoryStore(store_path)
    table = VectorTable.load(vectors_path or default_vector_table_path())
    stopwords = (
        load_stopwords(stopwords_path) if stopwords_path else default_stopwords()
    )
    retriever = Retriever(
        table,
        stopwords,
        neighbor_k=config.retrieval.neighbor_k,
        top_n=config.retrieval.top_n,
        starter_max=config.retrieval.starter_max,
    )
    composer = PromptComposer(history_turns=config.prompt.history_turns)
    client = GenerationClient(make_provider(config.provider), config.provider)
    manager = SessionManager(store, retriever, composer, client)

    app = FastAPI(title="memochat", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.manager = manager

    if config.api.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.api.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def require_token(request: Request) -> None:
        expected = config.api.bearer_token
        if expected is None:
            return
        header = request.headers.get("Authorization", "")
        if header != f"Bearer {expected}":
            raise Unauthorized("missing or invalid bearer token")

    auth = Depends(require_token)

    @app.exception_handler(MemoChatError)
    def handle_domain_error(request: Request, exc: MemoChatError):
        return JSONResponse(
            status_code=exc.http_status,
            content={"code": exc.code, "message": str(exc)},
        )

    @app.exception_handler(RequestValidationError)
    def handle_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "INVALID_ARGUMENT", "message": str(exc.errors()[:3])},
        )

    @app.exception_handler(Exception)
    def handle_unexpected(request: Request, exc: Exception):
        logger.exception("unhandled error on %s %s", request.method, request.url.path)
        return JSONResponse(
            status_code=500,
            content={"code": "INTERNAL", "message": "internal error"},
        )

    # -- health ---------------------------------------------------------

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "records": len(store.list_records())}

    # -- records ----------------------------------------------------------

    @app.get("/records", dependencies=[auth])
    def list_records():
        return {"records": [r.to_dict() for r in store.list_records()]}

    @app.post("/records", status_code=201, dependencies=[auth])
    def add_record(body: RecordIn):
        try:
            origin = RecordOrigin(body.origin)
        except ValueError:
            raise InvalidArgument(f"unknown record origin: {body.origin!r}") from None
        return store.add_record(body.text, origin).to_dict()

    @app.delete("/records/{record_id}", status_code=204, dependencies=[auth])
    def delete_record(record_id: str):
        store.delete_record(record_id)

    # -- partners ---------------------------------------------------------

    @app.get("/partners", dependencies=[auth])
    def list_partners():
        return {"partners": [p.to_dict() for p in store.list_personas()]}

    @app.get("/partners/{partner_id}", dependencies=[auth])
    def get_partner(partner_id: str):
        return store.get_persona(partner_id).to_dict()

    @app.put("/partners/{partner_id}", dependencies=[auth])
    def upsert_partner(partner_id: str, body: PersonaIn):
        persona = store.upsert_persona(
            partner_id,
            body.display_name,
            body.topic_preferences,
            Closeness.parse(body.closeness),
        )
        return persona.to_dict()

    @app.delete("/partners/{partner_id}", status_code=204, dependencies=[auth])
    def delete_partner(partner_id: str):
        store.delete_persona(partner_id)

    # -- sessions ---------------------------------------------------------

    @app.get("/sessions", dependencies=[auth])
    def list_sessions():
        return {
            "sessions": [
                {
                    "session_id": s.session_id,
                    "partner_id": s.partner_id,
                    "active": s.active,
                    "turns": len(s.turns),
                }
                for s in manager.list_sessions()
            ]
        }

    @app.post("/sessions", status_code=201, dependencies=[auth])
    def create_session(body: SessionIn):
        session = manager.start_session(body.partner_id)
        return _session_state(manager, session.session_id)

    @app.get("/sessions/{session_id}/state", dependencies=[auth])
    def session_state(session_id: str):
        return _session_state(manager, session_id)

    @app.post("/sessions/{session_id}/utterance", dependencies=[auth])
    def utterance(session_id: str, body: UtteranceIn):
        return manager.receive_partner_utterance(session_id, body.text).to_dict()

    @app.post("/sessions/{session_id}/starters", dependencies=[auth])
    def starters(session_id: str):
        return manager.request_starters(session_id).to_dict()

    @app.post("/sessions/{session_id}/pick", dependencies=[auth])
    def pick(session_id: str, body: PickIn):
        return manager.pick_suggestion(session_id, body.index).to_dict()

    @app.post("/sessions/{session_id}/adjust", dependencies=[auth])
    def adjust(session_id: str, body: AdjustIn):
        return manager.adjust_suggestion(session_id, body.index, body.tag).to_dict()

    @app.post("/sessions/{session_id}/manual", dependencies=[auth])
    def manual(session_id: str, body: ManualIn):
        return manager.manual_input(session_id, body.text).to_dict()

    @app.post("/sessions/{session_id}/end", dependencies=[auth])
    def end(session_id: str):
        return manager.end_session(session_id).to_dict()

    @app.post("/sessions/{session_id}/archive", status_code=201, dependencies=[auth])
    def archive(session_id: str):
        return manager.archive_session(session_id).to_dict()

    return app
