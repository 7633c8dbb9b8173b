"""Local HTTP JSON API over the engine.

Routes:
  POST /datasets                             multipart CSV (+ optional metadata) -> session
  POST /sessions/{sid}/query                 {utterance} -> response document
  POST /sessions/{sid}/query/{qid}/choose    {reference, index} -> re-emitted document
  GET  /catalog                              design catalog + ranking tiers
  GET  /healthz

Errors use a uniform {code, message, details} envelope. Sessions are
in-memory with TTL eviction; a session's dataset and statistics are
read-only after creation, so request handling needs no per-session locking.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response

from .catalog import catalog_document
from .config import DEFAULT_CONFIG, EngineConfig
from .engine import Engine, canonical_json
from .errors import (AmbiguityError, CompareVizError, DatasetError,
                     EmptyResultError, NotAComparisonError, ResolutionError,
                     SchemaError, UnsupportedComparisonError)
from .lexicon import Lexicon

_422_ERRORS = (DatasetError, SchemaError, NotAComparisonError,
               UnsupportedComparisonError, AmbiguityError, ResolutionError,
               EmptyResultError)


@dataclass
class Session:
    id: str
    engine: Engine
    created_at: float
    queries: dict[str, tuple[str, dict[str, int]]] = field(default_factory=dict)
    # qid -> (utterance, chosen interpretation indices)


class SessionStore:
    def __init__(self, ttl: float):
        self.ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, engine: Engine) -> Session:
        session = Session(id=secrets.token_hex(12), engine=engine,
                          created_at=time.monotonic())
        with self._lock:
            self._evict_locked()
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Optional[Session]:
        with self._lock:
            self._evict_locked()
            return self._sessions.get(session_id)

    def _evict_locked(self):
        deadline = time.monotonic() - self.ttl
        expired = [sid for sid, s in self._sessions.items()
                   if s.created_at < deadline]
        for sid in expired:
            del self._sessions[sid]


def _error_response(status: int, code: str, message: str,
                    details: Optional[dict] = None) -> Response:
    body = canonical_json({"code": code, "message": message,
                           "details": details or {}})
    return Response(content=body, status_code=status,
                    media_type="application/json")


def _json_response(document: dict, status: int = 200) -> Response:
    return Response(content=canonical_json(document), status_code=status,
                    media_type="application/json")


def create_app(config: EngineConfig = DEFAULT_CONFIG,
               lexicon: Optional[Lexicon] = None) -> FastAPI:
    app = FastAPI(title="compareviz", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(ttl=config.session_ttl)
    app.state.sessions = store
    app.state.config = config

    @app.exception_handler(CompareVizError)
    async def handle_engine_error(_request: Request, exc: CompareVizError):
        status = 422 if isinstance(exc, _422_ERRORS) else 500
        return _error_response(status, exc.code, exc.message, exc.details)

    @app.get("/healthz")
    async def healthz():
        return _json_response({"status": "ok"})

    @app.get("/catalog")
    async def catalog():
        return _json_response(catalog_document())

    @app.post("/datasets")
    async def create_session(file: UploadFile = File(...),
                             metadata: Optional[UploadFile] = File(None),
                             metadata_json: Optional[str] = Form(None)):
        payload = await file.read()
        if len(payload) > config.max_upload_bytes:
            return _error_response(
                413, "payload_too_large",
                f"upload of {len(payload)} bytes exceeds the "
                f"{config.max_upload_bytes}-byte limit")
        sidecar = None
        if metadata is not None:
            raw = await metadata.read()
            try:
                sidecar = json.loads(raw.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as e:
                return _error_response(422, "bad_metadata",
                                       f"metadata sidecar is not valid JSON: {e}")
        elif metadata_json:
            try:
                sidecar = json.loads(metadata_json)
            except json.JSONDecodeError as e:
                return _error_response(422, "bad_metadata",
                                       f"metadata sidecar is not valid JSON: {e}")
        engine = Engine.from_csv(payload, metadata=sidecar, lexicon=lexicon,
                                 config=config)
        session = store.create(engine)
        return _json_response({
            "session_id": session.id,
            "schema": [{"name": a.name, "kind": a.kind.value, "unit": a.unit}
                       for a in engine.dataset.schema],
            "row_count": engine.dataset.row_count,
        }, status=201)

    @app.post("/sessions/{session_id}/query")
    async def query(session_id: str, body: dict):
        session = store.get(session_id)
        if session is None:
            return _error_response(404, "unknown_session",
                                   f"no session {session_id!r}")
        utterance = (body or {}).get("utterance", "")
        if not isinstance(utterance, str) or not utterance.strip():
            return _error_response(422, "bad_request",
                                   "body must carry a non-empty 'utterance'")
        document = session.engine.respond(utterance)
        session.queries[document["query_id"]] = (utterance, {})
        return _json_response(document)

    @app.post("/sessions/{session_id}/query/{qid}/choose")
    async def choose(session_id: str, qid: str, body: dict):
        session = store.get(session_id)
        if session is None:
            return _error_response(404, "unknown_session",
                                   f"no session {session_id!r}")
        if qid not in session.queries:
            return _error_response(404, "unknown_query", f"no query {qid!r}")
        reference = (body or {}).get("reference")
        index = (body or {}).get("index")
        if not isinstance(reference, str) or not isinstance(index, int):
            return _error_response(
                422, "bad_request",
                "body must carry a string 'reference' and an integer 'index'")
        utterance, chosen = session.queries[qid]
        parsed = session.engine.classify(utterance)
        plan = session.engine.plan(parsed, chosen)
        plan = plan.with_choice(reference, index)  # 422 if out of range
        new_chosen = plan.chosen_map()
        document = session.engine.respond(utterance, new_chosen)
        session.queries[document["query_id"]] = (utterance, new_chosen)
        return _json_response(document)

    return app


def run(host: str = "127.0.0.1", port: int = 8765,
        config: EngineConfig = DEFAULT_CONFIG,
        lexicon: Optional[Lexicon] = None):  # pragma: no cover - thin wrapper
    import uvicorn
    uvicorn.run(create_app(config, lexicon), host=host, port=port)
