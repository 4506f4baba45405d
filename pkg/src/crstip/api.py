"""HTTP/JSON API over the assessment engine.

Every successful response body is the canonical serialization of the
corresponding engine result (the same bytes the CLI's ``--json`` mode
prints), and every non-2xx body is exactly one error object with keys
``status``, ``code``, ``message``.  Sessions persist in a file store;
writes to one session are serialized by the store's per-id locks.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.staticfiles import StaticFiles

from . import engine
from .errors import (
    CorruptDocument,
    CrstipError,
    InconsistentProfile,
    IoFailure,
    NotFound,
    SchemeMismatch,
    ValidationError,
)
from .model import Scheme
from .parser import canonical_json, load_bundled_scheme, scheme_to_document
from .radar import chart_spec, render_radar
from .store import Store

_STATUS = {
    NotFound.code: 404,
    SchemeMismatch.code: 409,
    InconsistentProfile.code: 409,
    IoFailure.code: 500,
    CorruptDocument.code: 500,
}


def create_app(data_dir: str | Path, webapp_dir: str | Path | None = None) -> FastAPI:
    """Build the service, rooted at one data directory.

    When ``webapp_dir`` points at an existing directory, its files are
    served under ``/`` (the browser UI); the API always lives under
    ``/api``.
    """
    app = FastAPI(title="crstip", version="0.1.0", docs_url=None, redoc_url=None)
    store = Store(data_dir)
    bundled = load_bundled_scheme()
    app.state.store = store

    def resolve_scheme(scheme_id: str) -> Scheme:
        if scheme_id == bundled.id:
            return bundled
        return store.load_scheme(scheme_id)

    def session_scheme(session: engine.AssessmentSession) -> Scheme:
        scheme = resolve_scheme(session.scheme_id)
        if scheme.version != session.scheme_version:
            raise SchemeMismatch(
                f"session was made with scheme {session.scheme_id!r}"
                f" v{session.scheme_version}, but v{scheme.version} is installed"
            )
        return scheme

    @app.exception_handler(CrstipError)
    async def crstip_error(_request: Request, exc: CrstipError) -> Response:
        return _error_response(_STATUS.get(exc.code, 400), exc.code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def request_error(_request: Request, exc: RequestValidationError) -> Response:
        return _error_response(400, "VALIDATION", "request body is not valid JSON")

    @app.get("/api/schemes")
    def list_schemes() -> Response:
        docs = [scheme_to_document(bundled)]
        for scheme_id in store.list_schemes():
            if scheme_id != bundled.id:
                docs.append(scheme_to_document(store.load_scheme(scheme_id)))
        return _json_response(docs)

    @app.get("/api/schemes/{scheme_id}")
    def get_scheme(scheme_id: str) -> Response:
        return _json_response(scheme_to_document(resolve_scheme(scheme_id)))

    @app.post("/api/sessions", status_code=201)
    async def create_session(request: Request) -> Response:
        payload = await _json_body(request)
        scheme = resolve_scheme(_field(payload, "scheme_id", str))
        raw_subject = _field(payload, "subject", dict)
        subject = engine.SubjectInfo(
            name=_field(raw_subject, "name", str, where="subject"),
            kind=_field(raw_subject, "kind", str, where="subject"),
            notes=str(raw_subject.get("notes", "")),
        )
        session = engine.start_session(scheme, subject)
        store.save_session(session)
        return _json_response(session.to_document(), status_code=201)

    @app.get("/api/sessions")
    def list_sessions() -> Response:
        summaries = [
            _summary(store.load_session(session_id)) for session_id in store.list_sessions()
        ]
        return _json_response(summaries)

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str) -> Response:
        return _json_response(store.load_session(session_id).to_document())

    @app.put("/api/sessions/{session_id}/answers/{indicator_id}")
    async def put_answer(session_id: str, indicator_id: str, request: Request) -> Response:
        payload = await _json_body(request)
        value = _field(payload, "value", str)
        note = str(payload.get("note", ""))

        def apply(session: engine.AssessmentSession) -> engine.AssessmentSession:
            existing = session.answers.get(indicator_id)
            if existing is not None and existing.value.value == value and existing.note == note:
                return session  # replay of an identical answer changes nothing
            scheme = session_scheme(session)
            return engine.record_answer(scheme, session, indicator_id, value, note)

        updated = store.update_session(session_id, apply)
        return _json_response(_summary(updated))

    @app.get("/api/sessions/{session_id}/profile")
    def get_profile(session_id: str) -> Response:
        session = store.load_session(session_id)
        scheme = session_scheme(session)
        profile = engine.compute_profile(scheme, session)
        violations = engine.check_consistency(scheme, session)
        return _json_response(
            {
                "profile": profile.to_document(),
                "violations": [violation.to_document() for violation in violations],
            }
        )

    @app.post("/api/sessions/{session_id}/gaps")
    async def post_gaps(session_id: str, request: Request) -> Response:
        payload = await _json_body(request)
        session = store.load_session(session_id)
        scheme = session_scheme(session)
        report = engine.gap_analysis(scheme, session, _targets(payload))
        return _json_response(report.to_document())

    @app.post("/api/sessions/{session_id}/roadmap")
    async def post_roadmap(session_id: str, request: Request) -> Response:
        payload = await _json_body(request)
        session = store.load_session(session_id)
        scheme = session_scheme(session)
        profile = engine.compute_profile(scheme, session)
        roadmap = engine.build_roadmap(scheme, profile, _targets(payload))
        return _json_response(roadmap.to_document())

    @app.post("/api/charts/radar")
    async def post_radar(request: Request) -> Response:
        payload = await _json_body(request)
        if "spec" in payload:
            raw = _field(payload, "spec", dict)
            series = []
            for entry in _field(raw, "series", list, where="spec"):
                if not isinstance(entry, dict):
                    raise ValidationError(
                        "spec.series entries must be objects with 'name' and 'values'"
                    )
                series.append(
                    (
                        _field(entry, "name", str, where="spec.series"),
                        _field(entry, "values", list, where="spec.series"),
                    )
                )
            spec = chart_spec(
                axes=_field(raw, "axes", list, where="spec"),
                max_rank=_field(raw, "max_rank", int, where="spec"),
                series=series,
            )
        elif "profiles" in payload:
            names = _field(payload, "profiles", list)
            if not 1 <= len(names) <= 2:
                raise ValidationError("profiles must list 1 or 2 stored profile names")
            profiles = [store.load_profile(str(name)) for name in names]
            scheme = resolve_scheme(profiles[0].scheme_id)
            for profile in profiles[1:]:
                if (profile.scheme_id, profile.scheme_version) != (
                    profiles[0].scheme_id,
                    profiles[0].scheme_version,
                ):
                    raise SchemeMismatch("profiles reference different schemes")
            spec = chart_spec(
                axes=[area.name for area in scheme.areas],
                max_rank=max(area.max_rank for area in scheme.areas),
                series=[
                    (name, [entry.effective_level for entry in profile.areas])
                    for name, profile in zip(names, profiles)
                ],
            )
        else:
            raise ValidationError("request must contain either 'spec' or 'profiles'")
        return Response(content=render_radar(spec), media_type="image/svg+xml")

    if webapp_dir is not None and Path(webapp_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(webapp_dir), html=True), name="webapp")

    return app


def _summary(session: engine.AssessmentSession) -> dict:
    return {
        "id": session.id,
        "scheme_id": session.scheme_id,
        "scheme_version": session.scheme_version,
        "subject": session.subject.to_document(),
        "answer_count": len(session.answers),
        "created": engine.format_timestamp(session.created),
        "modified": engine.format_timestamp(session.modified),
    }


def _targets(payload: dict) -> dict[str, int]:
    raw = _field(payload, "targets", dict)
    targets: dict[str, int] = {}
    for area_id, rank in raw.items():
        if not isinstance(rank, int) or isinstance(rank, bool):
            raise ValidationError(f"target rank for {area_id!r} must be an integer")
        targets[str(area_id)] = rank
    return targets


async def _json_body(request: Request) -> dict:
    try:
        payload = json.loads(await request.body())
    except ValueError:
        raise ValidationError("request body is not valid JSON") from None
    if not isinstance(payload, dict):
        raise ValidationError("request body must be a JSON object")
    return payload


def _field(payload: dict, key: str, kind: type, where: str = "request"):
    if key not in payload:
        raise ValidationError(f"{where} is missing {key!r}")
    value = payload[key]
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise ValidationError(f"{where}.{key} has the wrong type")
    return value


def _json_response(document: object, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(document),
        media_type="application/json",
        status_code=status_code,
    )


def _error_response(status: int, code: str, message: str) -> Response:
    return _json_response(
        {"status": status, "code": code, "message": message}, status_code=status
    )
