"""Local HTTP API (plus static UI hosting) over one loaded model.

Single-operator, local-first: requests are handled concurrently, but
mutations are serialized per session id and every mutation is persisted with
a write-temp-then-rename so a crash never leaves a torn session file.
"""

from __future__ import annotations

import json
import os
import re
import threading
import uuid
from dataclasses import dataclass
from fractions import Fraction
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Any, Callable
from urllib.parse import parse_qs, urlparse

from .model import (
    MaturityModel,
    UnknownFocusArea,
    UnknownLevel,
    UnknownQuestionId,
)
from .modelio import (
    DocumentSyntaxError,
    EncodingError,
    SchemaError,
    canonical_bytes,
    serialize_model,
)
from .planner import PlanConfig, UnknownTask, plan_for, plan_what_if
from .report import (
    UnsupportedFormat,
    build_bundle,
    coverage_document,
    plan_document,
    profile_document,
    render,
)
from .scoring import ScoringConfig, profile as compute_profile, what_if
from .session import (
    ChoiceOutOfRange,
    ModelMismatch,
    NotApplicable,
    Session,
    TypeMismatch,
    create_session,
    load_session,
    progress,
    record_answer,
    save_session,
    session_document,
    typed_answer_value,
)

MAX_BODY_BYTES = 10 * 1024 * 1024

_CONTENT_TYPES = {
    "json": "application/json; charset=utf-8",
    "csv": "text/csv; charset=utf-8",
    "md": "text/markdown; charset=utf-8",
}


class ApiError(Exception):
    """An error response: http status plus a stable machine code."""

    def __init__(self, status: int, code: str, message: str, path: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.path = path

    def body(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.path is not None:
            doc["path"] = self.path
        return doc


def _to_api_error(exc: Exception) -> ApiError:
    if isinstance(exc, ApiError):
        return exc
    if isinstance(exc, UnknownQuestionId):
        return ApiError(404, "unknown_question", str(exc))
    if isinstance(exc, UnknownFocusArea):
        return ApiError(404, "unknown_focus_area", str(exc))
    if isinstance(exc, UnknownLevel):
        return ApiError(404, "unknown_level", str(exc))
    if isinstance(exc, UnknownTask):
        return ApiError(404, "unknown_task", str(exc))
    if isinstance(exc, NotApplicable):
        return ApiError(409, "not_applicable", str(exc))
    if isinstance(exc, ModelMismatch):
        return ApiError(409, "model_mismatch", str(exc))
    if isinstance(exc, TypeMismatch):
        return ApiError(400, "type_mismatch", str(exc))
    if isinstance(exc, ChoiceOutOfRange):
        return ApiError(400, "choice_out_of_range", str(exc))
    if isinstance(exc, SchemaError):
        return ApiError(400, "invalid_body", str(exc), path=exc.path)
    if isinstance(exc, (DocumentSyntaxError, EncodingError)):
        return ApiError(400, "invalid_body", str(exc))
    if isinstance(exc, UnsupportedFormat):
        return ApiError(400, "unsupported_format", str(exc))
    if isinstance(exc, ValueError):
        return ApiError(400, "invalid_parameter", str(exc))
    raise exc


class AppState:
    """Model, sessions, and per-session write locks behind the handlers."""

    def __init__(
        self,
        model: MaturityModel,
        session_dir: Path | None = None,
        ui_dir: Path | None = None,
    ):
        self.model = model
        self.model_bytes = serialize_model(model)
        self.session_dir = Path(session_dir) if session_dir else None
        self.ui_dir = Path(ui_dir) if ui_dir else None
        self.sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        if self.session_dir is not None:
            self.session_dir.mkdir(parents=True, exist_ok=True)
            self._load_existing()

    def _load_existing(self) -> None:
        assert self.session_dir is not None
        for path in sorted(self.session_dir.glob("*.json")):
            try:
                session = load_session(path.read_bytes(), self.model)
            except Exception:
                continue  # foreign or stale file; leave it untouched
            self.sessions[session.session_id] = session

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def _persist(self, session: Session) -> None:
        if self.session_dir is None:
            return
        final = self.session_dir / f"{session.session_id}.json"
        tmp = self.session_dir / f".{session.session_id}.{uuid.uuid4().hex}.tmp"
        tmp.write_bytes(save_session(session))
        os.replace(tmp, final)

    def get_session(self, session_id: str) -> Session:
        with self._registry_lock:
            session = self.sessions.get(session_id)
        if session is None:
            raise ApiError(404, "unknown_session", f"unknown session id: {session_id!r}")
        return session

    def add_session(self, session: Session) -> None:
        with self._lock_for(session.session_id):
            with self._registry_lock:
                self.sessions[session.session_id] = session
            self._persist(session)

    def mutate(self, session_id: str, fn: Callable[[Session], Session]) -> Session:
        with self._lock_for(session_id):
            session = self.get_session(session_id)
            updated = fn(session)
            with self._registry_lock:
                self.sessions[session_id] = updated
            self._persist(updated)
            return updated


def _scoring_config(query: dict[str, list[str]]) -> ScoringConfig:
    kwargs: dict[str, Any] = {}
    if "threshold" in query:
        try:
            kwargs["achievement_threshold"] = Fraction(query["threshold"][0])
        except (ValueError, ZeroDivisionError):
            raise ApiError(
                400, "invalid_parameter", f"invalid threshold {query['threshold'][0]!r}"
            ) from None
    if "rounding" in query:
        try:
            kwargs["rounding"] = int(query["rounding"][0])
        except ValueError:
            raise ApiError(
                400, "invalid_parameter", f"invalid rounding {query['rounding'][0]!r}"
            ) from None
    return ScoringConfig(**kwargs)


def _plan_config(query: dict[str, list[str]]) -> PlanConfig:
    kwargs: dict[str, Any] = {}
    if "target" in query:
        kwargs["target"] = query["target"][0]
    if "deadlineDays" in query:
        try:
            kwargs["default_deadline_offset"] = int(query["deadlineDays"][0])
        except ValueError:
            raise ApiError(
                400, "invalid_parameter", f"invalid deadlineDays {query['deadlineDays'][0]!r}"
            ) from None
    if "responsible" in query:
        kwargs["default_responsible"] = query["responsible"][0]
    return PlanConfig(**kwargs)


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server: "FammServer"

    # -- plumbing ---------------------------------------------------------

    def log_message(self, fmt: str, *args: Any) -> None:
        if self.server.verbose:
            super().log_message(fmt, *args)

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, status: int, doc: Any) -> None:
        self._send(status, canonical_bytes(doc), _CONTENT_TYPES["json"])

    def _send_error(self, error: ApiError) -> None:
        self._send_json(error.status, error.body())

    def _read_body(self) -> Any:
        length = int(self.headers.get("Content-Length") or 0)
        if length > MAX_BODY_BYTES:
            raise ApiError(413, "body_too_large", "request body too large")
        raw = self.rfile.read(length) if length else b"{}"
        try:
            return json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ApiError(400, "invalid_body", f"request body is not valid JSON: {exc}")

    # -- dispatch ---------------------------------------------------------

    def do_GET(self) -> None:
        self._dispatch("GET")

    def do_POST(self) -> None:
        self._dispatch("POST")

    def do_PUT(self) -> None:
        self._dispatch("PUT")

    def _dispatch(self, method: str) -> None:
        url = urlparse(self.path)
        query = parse_qs(url.query)
        try:
            if url.path == "/api/model" and method == "GET":
                self._send(200, self.server.state.model_bytes, _CONTENT_TYPES["json"])
            elif url.path == "/api/standards" and method == "GET":
                self._standards()
            elif url.path == "/api/sessions" and method == "POST":
                self._create_session()
            elif match := _route(method, "GET", r"^/api/sessions/([^/]+)$", url.path):
                self._send_json(200, session_document(self.server.state.get_session(match[0])))
            elif match := _route(method, "GET", r"^/api/sessions/([^/]+)/progress$", url.path):
                self._progress(match[0])
            elif match := _route(
                method, "PUT", r"^/api/sessions/([^/]+)/answers/([^/]+)$", url.path
            ):
                self._put_answer(match[0], match[1])
            elif match := _route(method, "GET", r"^/api/sessions/([^/]+)/score$", url.path):
                self._score(match[0], query)
            elif match := _route(method, "GET", r"^/api/sessions/([^/]+)/plan$", url.path):
                self._plan(match[0], query)
            elif match := _route(method, "POST", r"^/api/sessions/([^/]+)/whatif$", url.path):
                self._whatif(match[0])
            elif match := _route(method, "GET", r"^/api/sessions/([^/]+)/coverage$", url.path):
                self._coverage(match[0])
            elif match := _route(method, "GET", r"^/api/sessions/([^/]+)/report$", url.path):
                self._report(match[0], query)
            elif method == "GET" and not url.path.startswith("/api/"):
                self._static(url.path)
            else:
                raise ApiError(404, "not_found", f"no route for {method} {url.path}")
        except Exception as exc:  # noqa: BLE001 - boundary: map to ApiError
            try:
                self._send_error(_to_api_error(exc))
            except Exception:
                self._send_json(500, {"code": "internal_error", "message": "internal error"})

    # -- endpoints --------------------------------------------------------

    def _standards(self) -> None:
        standards = []
        for std in self.server.state.model.standards:
            doc: dict[str, Any] = {
                "id": std.id,
                "title": std.title,
                "publisher": std.publisher,
            }
            if std.edition is not None:
                doc["edition"] = std.edition
            standards.append(doc)
        self._send_json(200, {"standards": standards})

    def _create_session(self) -> None:
        body = self._read_body()
        if not isinstance(body, dict):
            raise ApiError(400, "invalid_body", "request body must be an object")
        from .modelio import parse_organization

        organization = body.get("organization")
        if organization is None:
            organization = {
                "organization_name": body.get("organization_name", ""),
                "profile": body.get("profile", {}),
            }
        profile = parse_organization(organization, "organization")
        session = create_session(self.server.state.model, profile)
        self.server.state.add_session(session)
        self._send_json(201, session_document(session))

    def _progress(self, session_id: str) -> None:
        session = self.server.state.get_session(session_id)
        counts = progress(self.server.state.model, session)
        self._send_json(
            200,
            {
                "answered_scored": counts.answered_scored,
                "total_scored": counts.total_scored,
                "answered_all": counts.answered_all,
                "total_all": counts.total_all,
            },
        )

    def _put_answer(self, session_id: str, question_id: str) -> None:
        body = self._read_body()
        if not isinstance(body, dict) or "value" not in body:
            raise ApiError(400, "invalid_body", 'request body must be {"value": ...}')
        model = self.server.state.model

        def apply(session: Session) -> Session:
            question = model.question(question_id)
            value = typed_answer_value(question, body["value"])
            return record_answer(model, session, question_id, value)

        updated = self.server.state.mutate(session_id, apply)
        self._send_json(200, session_document(updated))

    def _score(self, session_id: str, query: dict[str, list[str]]) -> None:
        session = self.server.state.get_session(session_id)
        config = _scoring_config(query)
        result = compute_profile(self.server.state.model, session, config)
        self._send_json(200, profile_document(result))

    def _plan(self, session_id: str, query: dict[str, list[str]]) -> None:
        session = self.server.state.get_session(session_id)
        plan = plan_for(
            self.server.state.model,
            session,
            _scoring_config(query),
            _plan_config(query),
        )
        self._send_json(200, plan_document(plan))

    def _whatif(self, session_id: str) -> None:
        session = self.server.state.get_session(session_id)
        body = self._read_body()
        if not isinstance(body, dict):
            raise ApiError(400, "invalid_body", "request body must be an object")
        query = {
            key: [str(value)]
            for key, value in body.items()
            if key in ("threshold", "rounding", "target", "deadlineDays", "responsible")
        }
        config = _scoring_config(query)
        model = self.server.state.model

        if "completed_tasks" in body:
            completed = body["completed_tasks"]
            if not isinstance(completed, list) or not all(
                isinstance(item, str) for item in completed
            ):
                raise ApiError(400, "invalid_body", "completed_tasks must be a string array")
            plan = plan_for(model, session, config, _plan_config(query))
            before = plan.profile
            after = plan_what_if(model, session, plan, completed)
        else:
            answers = body.get("answers", [])
            if not isinstance(answers, list):
                raise ApiError(400, "invalid_body", "answers must be an array")
            hypothetical = []
            for i, item in enumerate(answers):
                if not isinstance(item, dict) or "question_id" not in item or "value" not in item:
                    raise ApiError(
                        400,
                        "invalid_body",
                        f"answers[{i}] must be {{question_id, value}}",
                    )
                question = model.question(str(item["question_id"]))
                hypothetical.append(
                    (question.id, typed_answer_value(question, item["value"]))
                )
            before, after = what_if(model, session, hypothetical, config)

        self._send_json(
            200, {"before": profile_document(before), "after": profile_document(after)}
        )

    def _coverage(self, session_id: str) -> None:
        from .report import coverage_matrix

        session = self.server.state.get_session(session_id)
        matrix = coverage_matrix(self.server.state.model, session)
        self._send_json(200, coverage_document(matrix))

    def _report(self, session_id: str, query: dict[str, list[str]]) -> None:
        session = self.server.state.get_session(session_id)
        fmt = query.get("format", ["json"])[0]
        if fmt not in _CONTENT_TYPES:
            raise UnsupportedFormat(fmt)
        config = _scoring_config(query)
        plan = plan_for(self.server.state.model, session, config, _plan_config(query))
        bundle = build_bundle(self.server.state.model, session, config, plan=plan)
        self._send(200, render(bundle, fmt), _CONTENT_TYPES[fmt])

    # -- static UI --------------------------------------------------------

    _PLACEHOLDER = (
        b"<!doctype html><html><head><title>famm</title></head><body>"
        b"<h1>famm service</h1><p>No UI bundle configured; the JSON API is "
        b"available under <code>/api/</code>.</p></body></html>"
    )

    _STATIC_TYPES = {
        ".html": "text/html; charset=utf-8",
        ".js": "application/javascript; charset=utf-8",
        ".mjs": "application/javascript; charset=utf-8",
        ".css": "text/css; charset=utf-8",
        ".json": "application/json; charset=utf-8",
        ".svg": "image/svg+xml",
        ".png": "image/png",
        ".ico": "image/x-icon",
        ".map": "application/json; charset=utf-8",
    }

    def _static(self, path: str) -> None:
        ui_dir = self.server.state.ui_dir
        if ui_dir is None:
            if path in ("/", "/index.html"):
                self._send(200, self._PLACEHOLDER, "text/html; charset=utf-8")
                return
            raise ApiError(404, "not_found", f"no route for GET {path}")

        relative = path.lstrip("/") or "index.html"
        target = (ui_dir / relative).resolve()
        root = ui_dir.resolve()
        if root not in target.parents and target != root:
            raise ApiError(404, "not_found", "path outside the UI directory")
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            # SPA fallback: unknown non-asset paths load the app shell.
            fallback = root / "index.html"
            if "." not in Path(relative).name and fallback.is_file():
                target = fallback
            else:
                raise ApiError(404, "not_found", f"no such file: {path}")
        content_type = self._STATIC_TYPES.get(target.suffix, "application/octet-stream")
        self._send(200, target.read_bytes(), content_type)


def _route(method: str, expected: str, pattern: str, path: str) -> tuple[str, ...] | None:
    if method != expected:
        return None
    match = re.match(pattern, path)
    return match.groups() if match else None


class FammServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address: tuple[str, int], state: AppState, verbose: bool = False):
        super().__init__(address, _Handler)
        self.state = state
        self.verbose = verbose


def make_server(
    model: MaturityModel,
    host: str = "127.0.0.1",
    port: int = 0,
    session_dir: Path | str | None = None,
    ui_dir: Path | str | None = None,
    verbose: bool = False,
) -> FammServer:
    state = AppState(
        model,
        Path(session_dir) if session_dir else None,
        Path(ui_dir) if ui_dir else None,
    )
    return FammServer((host, port), state, verbose=verbose)
