"""Durable plain-file storage for sessions, profiles, and schemes.

Layout under a base directory: ``sessions/<id>.json``,
``profiles/<name>.json``, ``schemes/<id>.json``.  Every document is UTF-8
JSON in the package's canonical form and round-trips through its parser.
Writes go to a temp file in the same directory followed by an atomic
rename, so a concurrent reader sees either the old or the new document,
never a torn one.  Writes to one id are serialized by a per-id lock;
different ids may be written in parallel.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .engine import AssessmentSession, Profile
from .errors import CorruptDocument, IoFailure, NotFound, SchemeMismatch, ValidationError
from .model import Indicator, Scheme
from .parser import canonical_json, parse_scheme, serialize_scheme

_SAFE_NAME = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


@dataclass(frozen=True)
class AreaDelta:
    area: str
    before: int
    after: int
    delta: int
    newly_satisfied: tuple[Indicator, ...] = ()

    def to_document(self) -> dict:
        return {
            "area": self.area,
            "before": self.before,
            "after": self.after,
            "delta": self.delta,
            "newly_satisfied": [
                {"id": ind.id, "statement": ind.statement} for ind in self.newly_satisfied
            ],
        }


@dataclass(frozen=True)
class ProfileDiff:
    """Per-area level movement between a before and an after profile."""

    scheme_id: str
    scheme_version: str
    areas: tuple[AreaDelta, ...]

    @property
    def improved(self) -> int:
        return sum(1 for entry in self.areas if entry.delta > 0)

    @property
    def regressed(self) -> int:
        return sum(1 for entry in self.areas if entry.delta < 0)

    @property
    def unchanged(self) -> int:
        return sum(1 for entry in self.areas if entry.delta == 0)

    def to_document(self) -> dict:
        return {
            "scheme_id": self.scheme_id,
            "scheme_version": self.scheme_version,
            "areas": [entry.to_document() for entry in self.areas],
            "summary": {
                "improved": self.improved,
                "regressed": self.regressed,
                "unchanged": self.unchanged,
                "total_delta": sum(entry.delta for entry in self.areas),
            },
        }


def compare_profiles(
    before: Profile, after: Profile, scheme: Scheme | None = None
) -> ProfileDiff:
    """Per-area effective-level deltas between two profiles.

    Both profiles must reference the same scheme id and version, and cover
    the same areas.  When the scheme is supplied, each delta also lists the
    indicators of the newly attained ranks.
    """
    if (before.scheme_id, before.scheme_version) != (after.scheme_id, after.scheme_version):
        raise SchemeMismatch(
            f"profiles reference different schemes:"
            f" {before.scheme_id!r} v{before.scheme_version}"
            f" vs {after.scheme_id!r} v{after.scheme_version}"
        )
    if scheme is not None and (scheme.id, scheme.version) != (
        before.scheme_id,
        before.scheme_version,
    ):
        raise SchemeMismatch(
            f"profiles reference scheme {before.scheme_id!r} v{before.scheme_version},"
            f" not {scheme.id!r} v{scheme.version}"
        )
    before_areas = [entry.area for entry in before.areas]
    after_areas = [entry.area for entry in after.areas]
    if before_areas != after_areas:
        raise SchemeMismatch(
            f"profiles cover different areas: {before_areas} vs {after_areas}"
        )

    deltas = []
    for entry in before.areas:
        other = after.area(entry.area)
        newly: tuple[Indicator, ...] = ()
        if scheme is not None:
            area = scheme.area(entry.area)
            if area is not None:
                newly = tuple(
                    ind
                    for rank in range(entry.effective_level + 1, other.effective_level + 1)
                    if (level := area.level(rank)) is not None
                    for ind in level.indicators
                )
        deltas.append(
            AreaDelta(
                area=entry.area,
                before=entry.effective_level,
                after=other.effective_level,
                delta=other.effective_level - entry.effective_level,
                newly_satisfied=newly,
            )
        )
    return ProfileDiff(
        scheme_id=before.scheme_id,
        scheme_version=before.scheme_version,
        areas=tuple(deltas),
    )


class Store:
    """File-backed document store rooted at one base directory."""

    def __init__(self, base: str | Path):
        self.base = Path(base)
        try:
            for sub in ("sessions", "profiles", "schemes"):
                (self.base / sub).mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise IoFailure(f"cannot initialize store at {self.base}: {exc}") from exc
        self._locks: dict[tuple[str, str], threading.Lock] = {}
        self._locks_guard = threading.Lock()

    # -- sessions ----------------------------------------------------------

    def save_session(self, session: AssessmentSession) -> str:
        self._write("sessions", session.id, canonical_json(session.to_document()))
        return session.id

    def load_session(self, session_id: str) -> AssessmentSession:
        path = self._path("sessions", session_id)
        doc = self._read_json(path)
        try:
            return AssessmentSession.from_document(doc)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise CorruptDocument(f"{path}: malformed session document: {exc}") from exc

    def list_sessions(self) -> list[str]:
        return self._list("sessions")

    def update_session(
        self, session_id: str, mutate: Callable[[AssessmentSession], AssessmentSession]
    ) -> AssessmentSession:
        """Load-mutate-save under the session's write lock."""
        with self.lock("sessions", session_id):
            session = self.load_session(session_id)
            updated = mutate(session)
            self.save_session(updated)
            return updated

    # -- profiles ----------------------------------------------------------

    def save_profile(self, name: str, profile: Profile) -> str:
        self._write("profiles", name, canonical_json(profile.to_document()))
        return name

    def load_profile(self, name: str) -> Profile:
        path = self._path("profiles", name)
        doc = self._read_json(path)
        try:
            return Profile.from_document(doc)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise CorruptDocument(f"{path}: malformed profile document: {exc}") from exc

    def list_profiles(self) -> list[str]:
        return self._list("profiles")

    # -- schemes -----------------------------------------------------------

    def save_scheme(self, scheme: Scheme) -> str:
        self._write("schemes", scheme.id, serialize_scheme(scheme))
        return scheme.id

    def load_scheme(self, scheme_id: str) -> Scheme:
        path = self._path("schemes", scheme_id)
        try:
            text = path.read_text("utf-8")
        except FileNotFoundError:
            raise NotFound(f"no scheme {scheme_id!r} in {self.base / 'schemes'}") from None
        except OSError as exc:
            raise IoFailure(f"cannot read {path}: {exc}") from exc
        result = parse_scheme(text)
        if result.scheme is None:
            first = result.errors[0]
            raise CorruptDocument(f"{path}: {first.code} at line {first.line}: {first.message}")
        return result.scheme

    def list_schemes(self) -> list[str]:
        return self._list("schemes")

    # -- plumbing ----------------------------------------------------------

    @contextmanager
    def lock(self, kind: str, name: str):
        with self._locks_guard:
            lock = self._locks.setdefault((kind, name), threading.Lock())
        with lock:
            yield

    def _path(self, kind: str, name: str) -> Path:
        if not _SAFE_NAME.match(name):
            raise ValidationError(f"unusable document name {name!r}")
        return self.base / kind / f"{name}.json"

    def _list(self, kind: str) -> list[str]:
        try:
            entries = sorted(
                path.name[: -len(".json")]
                for path in (self.base / kind).iterdir()
                if path.name.endswith(".json") and not path.name.startswith(".")
            )
        except OSError as exc:
            raise IoFailure(f"cannot list {self.base / kind}: {exc}") from exc
        return entries

    def _write(self, kind: str, name: str, text: str) -> None:
        path = self._path(kind, name)
        try:
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{name}.", suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
                    handle.write(text)
                    handle.flush()
                    os.fsync(handle.fileno())
                os.replace(tmp, path)
            except BaseException:
                try:
                    os.unlink(tmp)
                except OSError:
                    pass
                raise
        except OSError as exc:
            raise IoFailure(f"cannot write {path}: {exc}") from exc

    def _read_json(self, path: Path) -> dict:
        try:
            text = path.read_text("utf-8")
        except FileNotFoundError:
            raise NotFound(f"no document at {path}") from None
        except OSError as exc:
            raise IoFailure(f"cannot read {path}: {exc}") from exc
        try:
            doc = json.loads(text)
        except ValueError as exc:
            raise CorruptDocument(f"{path}: not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise CorruptDocument(f"{path}: document root must be an object")
        return doc
