"""Assessment sessions, staged scoring, consistency checks, gaps, roadmaps.

Scoring is staged and cumulative: an area attains level L only when every
indicator of every rank 2..L is answered yes.  The raw level reflects the
answers alone; the effective level additionally caps each area by the
cross-area prerequisite edges, computed to a fixed point.  Sessions are
immutable values: ``record_answer`` returns a new session, so operations
here are pure functions from (scheme, session) to values.
"""

from __future__ import annotations

import heapq
import uuid
from collections.abc import Mapping
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from enum import Enum

from .errors import (
    InconsistentProfile,
    InvalidScheme,
    SchemeMismatch,
    UnknownArea,
    UnknownAreaLevel,
    UnknownIndicator,
    ValidationError,
)
from .model import (
    AreaLevel,
    PrerequisiteEdge,
    Scheme,
    prerequisite_closure,
    validate_scheme,
)

SUBJECT_KINDS = ("organization", "process", "system")


class AnswerValue(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SubjectInfo:
    name: str
    kind: str = "organization"
    notes: str = ""

    def to_document(self) -> dict:
        return {"name": self.name, "kind": self.kind, "notes": self.notes}

    @classmethod
    def from_document(cls, doc: Mapping) -> SubjectInfo:
        return cls(name=doc["name"], kind=doc["kind"], notes=doc.get("notes", ""))


@dataclass(frozen=True)
class Answer:
    value: AnswerValue
    note: str = ""
    answered_at: datetime = field(default_factory=lambda: _now())

    def to_document(self) -> dict:
        return {
            "value": self.value.value,
            "note": self.note,
            "answered_at": format_timestamp(self.answered_at),
        }

    @classmethod
    def from_document(cls, doc: Mapping) -> Answer:
        return cls(
            value=AnswerValue(doc["value"]),
            note=doc.get("note", ""),
            answered_at=parse_timestamp(doc["answered_at"]),
        )


@dataclass(frozen=True)
class AssessmentSession:
    """One subject under assessment plus its recorded indicator answers."""

    id: str
    scheme_id: str
    scheme_version: str
    subject: SubjectInfo
    answers: dict[str, Answer]
    created: datetime
    modified: datetime

    def to_document(self) -> dict:
        return {
            "id": self.id,
            "scheme_id": self.scheme_id,
            "scheme_version": self.scheme_version,
            "subject": self.subject.to_document(),
            "answers": {
                key: self.answers[key].to_document() for key in sorted(self.answers)
            },
            "created": format_timestamp(self.created),
            "modified": format_timestamp(self.modified),
        }

    @classmethod
    def from_document(cls, doc: Mapping) -> AssessmentSession:
        return cls(
            id=doc["id"],
            scheme_id=doc["scheme_id"],
            scheme_version=doc["scheme_version"],
            subject=SubjectInfo.from_document(doc["subject"]),
            answers={key: Answer.from_document(raw) for key, raw in doc["answers"].items()},
            created=parse_timestamp(doc["created"]),
            modified=parse_timestamp(doc["modified"]),
        )


@dataclass(frozen=True)
class AreaProfile:
    area: str
    raw_level: int
    effective_level: int
    completeness: float

    def to_document(self) -> dict:
        return {
            "area": self.area,
            "raw_level": self.raw_level,
            "effective_level": self.effective_level,
            "completeness": self.completeness,
        }


@dataclass(frozen=True)
class Profile:
    """Attained levels per area for one subject at one point in time."""

    scheme_id: str
    scheme_version: str
    subject: SubjectInfo
    areas: tuple[AreaProfile, ...]

    def area(self, area_id: str) -> AreaProfile:
        for entry in self.areas:
            if entry.area == area_id:
                return entry
        raise UnknownArea(f"profile has no area {area_id!r}")

    def effective_levels(self) -> dict[str, int]:
        return {entry.area: entry.effective_level for entry in self.areas}

    def raw_levels(self) -> dict[str, int]:
        return {entry.area: entry.raw_level for entry in self.areas}

    @property
    def consistent(self) -> bool:
        return all(entry.raw_level == entry.effective_level for entry in self.areas)

    def to_document(self) -> dict:
        return {
            "scheme_id": self.scheme_id,
            "scheme_version": self.scheme_version,
            "subject": self.subject.to_document(),
            "areas": [entry.to_document() for entry in self.areas],
        }

    @classmethod
    def from_document(cls, doc: Mapping) -> Profile:
        return cls(
            scheme_id=doc["scheme_id"],
            scheme_version=doc["scheme_version"],
            subject=SubjectInfo.from_document(doc["subject"]),
            areas=tuple(
                AreaProfile(
                    area=raw["area"],
                    raw_level=raw["raw_level"],
                    effective_level=raw["effective_level"],
                    completeness=raw["completeness"],
                )
                for raw in doc["areas"]
            ),
        )


@dataclass(frozen=True)
class ConsistencyViolation:
    """An explicit prerequisite edge the recorded answers do not honor."""

    subject: AreaLevel
    requires: AreaLevel
    observed_rank: int

    def to_document(self) -> dict:
        return {
            "subject": {"area": self.subject.area, "rank": self.subject.rank},
            "requires": {"area": self.requires.area, "rank": self.requires.rank},
            "observed_rank": self.observed_rank,
        }


@dataclass(frozen=True)
class MissingIndicator:
    id: str
    statement: str
    state: str  # "no" | "unknown" | "unanswered"

    def to_document(self) -> dict:
        return {"id": self.id, "statement": self.statement, "state": self.state}


@dataclass(frozen=True)
class GapArea:
    area: str
    current_level: int
    target_rank: int
    missing: tuple[MissingIndicator, ...]

    def to_document(self) -> dict:
        return {
            "area": self.area,
            "current_level": self.current_level,
            "target_rank": self.target_rank,
            "missing": [ind.to_document() for ind in self.missing],
        }


@dataclass(frozen=True)
class GapReport:
    """Unsatisfied indicators between the current profile and a target."""

    scheme_id: str
    scheme_version: str
    areas: tuple[GapArea, ...]

    def to_document(self) -> dict:
        return {
            "scheme_id": self.scheme_id,
            "scheme_version": self.scheme_version,
            "areas": [entry.to_document() for entry in self.areas],
        }


@dataclass(frozen=True)
class RoadmapStep:
    index: int
    area_level: AreaLevel
    indicators: tuple  # of model.Indicator
    prerequisites: tuple[PrerequisiteEdge, ...]

    def to_document(self) -> dict:
        return {
            "index": self.index,
            "area": self.area_level.area,
            "rank": self.area_level.rank,
            "indicators": [
                {"id": ind.id, "statement": ind.statement} for ind in self.indicators
            ],
            "prerequisites": [
                {
                    "subject": {"area": edge.subject.area, "rank": edge.subject.rank},
                    "requires": {"area": edge.requires.area, "rank": edge.requires.rank},
                    "rationale": edge.rationale,
                }
                for edge in self.prerequisites
            ],
        }


@dataclass(frozen=True)
class Roadmap:
    """Prerequisite-respecting order of level transitions toward a target."""

    scheme_id: str
    scheme_version: str
    steps: tuple[RoadmapStep, ...]

    def to_document(self) -> dict:
        return {
            "scheme_id": self.scheme_id,
            "scheme_version": self.scheme_version,
            "steps": [step.to_document() for step in self.steps],
        }


def format_timestamp(moment: datetime) -> str:
    """RFC 3339 with fixed microsecond precision, always UTC ``Z``."""
    moment = moment.astimezone(timezone.utc)
    return moment.strftime("%Y-%m-%dT%H:%M:%S.") + f"{moment.microsecond:06d}Z"


def parse_timestamp(text: str) -> datetime:
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    moment = datetime.fromisoformat(text)
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return moment.astimezone(timezone.utc)


def _now() -> datetime:
    return datetime.now(timezone.utc)


def start_session(scheme: Scheme, subject: SubjectInfo) -> AssessmentSession:
    """Open a fresh session with an empty answer map."""
    issues = validate_scheme(scheme)
    if issues:
        raise InvalidScheme(
            "scheme is invalid: " + "; ".join(f"{i.code} at {i.path}" for i in issues)
        )
    if subject.kind not in SUBJECT_KINDS:
        raise ValidationError(
            f"subject kind must be one of {', '.join(SUBJECT_KINDS)}, got {subject.kind!r}"
        )
    moment = _now()
    return AssessmentSession(
        id=str(uuid.uuid4()),
        scheme_id=scheme.id,
        scheme_version=scheme.version,
        subject=subject,
        answers={},
        created=moment,
        modified=moment,
    )


def record_answer(
    scheme: Scheme,
    session: AssessmentSession,
    indicator_id: str,
    value: AnswerValue | str,
    note: str = "",
) -> AssessmentSession:
    """Store one answer, overwriting any previous answer for the indicator.

    Returns a new session; the modified timestamp strictly advances.
    """
    _check_session_scheme(scheme, session)
    if scheme.indicator(indicator_id) is None:
        raise UnknownIndicator(f"indicator {indicator_id!r} does not exist in the scheme")
    try:
        value = AnswerValue(value)
    except ValueError:
        raise ValidationError(
            f"answer value must be one of yes, no, unknown; got {value!r}"
        ) from None
    moment = _now()
    if moment <= session.modified:
        moment = session.modified + timedelta(microseconds=1)
    answers = dict(session.answers)
    answers[indicator_id] = Answer(value=value, note=note, answered_at=moment)
    return AssessmentSession(
        id=session.id,
        scheme_id=session.scheme_id,
        scheme_version=session.scheme_version,
        subject=session.subject,
        answers=answers,
        created=session.created,
        modified=moment,
    )


def raw_level(scheme: Scheme, session: AssessmentSession, area_id: str) -> int:
    """Greatest rank whose indicator ranks 2..L are all answered yes.

    Staged scoring: the first rank with any non-yes indicator caps the
    level, regardless of fully answered higher ranks.  Unknown and
    unanswered both fail an indicator.
    """
    _check_session_scheme(scheme, session)
    area = scheme.area(area_id)
    if area is None:
        raise UnknownArea(f"area {area_id!r} does not exist in the scheme")
    attained = 1
    for rank in range(2, area.max_rank + 1):
        level = area.level(rank)
        if level is None:
            break
        if all(
            (answer := session.answers.get(ind.id)) is not None
            and answer.value is AnswerValue.YES
            for ind in level.indicators
        ):
            attained = rank
        else:
            break
    return attained


def compute_profile(scheme: Scheme, session: AssessmentSession) -> Profile:
    """Raw and effective levels plus answer completeness for every area.

    Effective levels are the raw levels capped by explicit prerequisite
    edges, iterated across areas until stable; acyclicity of the
    prerequisite relation guarantees the fixed point exists.
    """
    _check_session_scheme(scheme, session)
    raws = {area.id: raw_level(scheme, session, area.id) for area in scheme.areas}
    effective = _effective_levels(scheme, raws)

    entries = []
    for area in scheme.areas:
        indicators = [ind for lvl in area.levels for ind in lvl.indicators]
        if indicators:
            answered = sum(
                1
                for ind in indicators
                if (answer := session.answers.get(ind.id)) is not None
                and answer.value in (AnswerValue.YES, AnswerValue.NO)
            )
            completeness = answered / len(indicators)
        else:
            completeness = 1.0
        entries.append(
            AreaProfile(
                area=area.id,
                raw_level=raws[area.id],
                effective_level=effective[area.id],
                completeness=completeness,
            )
        )
    return Profile(
        scheme_id=session.scheme_id,
        scheme_version=session.scheme_version,
        subject=session.subject,
        areas=tuple(entries),
    )


def _effective_levels(scheme: Scheme, raws: dict[str, int]) -> dict[str, int]:
    edges_at: dict[tuple[str, int], list[PrerequisiteEdge]] = {}
    for edge in scheme.prerequisites:
        edges_at.setdefault((edge.subject.area, edge.subject.rank), []).append(edge)

    effective = dict(raws)
    changed = True
    while changed:
        changed = False
        for area_id, raw in raws.items():
            capped = 1
            for rank in range(2, raw + 1):
                satisfied = all(
                    edge.requires.rank <= effective[edge.requires.area]
                    for edge in edges_at.get((area_id, rank), ())
                )
                if not satisfied:
                    break
                capped = rank
            if capped != effective[area_id]:
                effective[area_id] = capped
                changed = True
    return effective


def check_consistency(scheme: Scheme, session: AssessmentSession) -> list[ConsistencyViolation]:
    """Explicit edges the raw levels violate; empty iff raw == effective."""
    _check_session_scheme(scheme, session)
    raws = {area.id: raw_level(scheme, session, area.id) for area in scheme.areas}
    violations = []
    for edge in scheme.prerequisites:
        if (
            edge.subject.rank <= raws[edge.subject.area]
            and raws[edge.requires.area] < edge.requires.rank
        ):
            violations.append(
                ConsistencyViolation(
                    subject=edge.subject,
                    requires=edge.requires,
                    observed_rank=raws[edge.requires.area],
                )
            )
    return violations


def _coerce_targets(scheme: Scheme, targets: Mapping[str, int]) -> set[AreaLevel]:
    coords = set()
    for area_id, rank in targets.items():
        coord = AreaLevel(area_id, rank)
        if not scheme.has_coordinate(coord):
            raise UnknownAreaLevel(f"target {coord} does not exist in the scheme")
        coords.add(coord)
    return coords


def gap_analysis(
    scheme: Scheme, session: AssessmentSession, targets: Mapping[str, int]
) -> GapReport:
    """Everything still standing between the current profile and a target.

    Targets are first expanded by the prerequisite closure, so requirements
    induced in other areas show up in the report.  For each area the report
    lists every non-yes indicator of every rank in (effective, target].
    """
    coords = _coerce_targets(scheme, targets)
    closure = prerequisite_closure(scheme, coords)
    profile = compute_profile(scheme, session)

    expanded: dict[str, int] = {}
    for coord in closure:
        expanded[coord.area] = max(expanded.get(coord.area, 0), coord.rank)

    entries = []
    for area in scheme.areas:
        current = profile.area(area.id).effective_level
        target_rank = expanded.get(area.id, current)
        missing = []
        for rank in range(current + 1, target_rank + 1):
            level = area.level(rank)
            for ind in level.indicators if level else ():
                answer = session.answers.get(ind.id)
                if answer is not None and answer.value is AnswerValue.YES:
                    continue
                state = "unanswered" if answer is None else answer.value.value
                missing.append(MissingIndicator(id=ind.id, statement=ind.statement, state=state))
        entries.append(
            GapArea(
                area=area.id,
                current_level=current,
                target_rank=target_rank,
                missing=tuple(missing),
            )
        )
    return GapReport(
        scheme_id=session.scheme_id,
        scheme_version=session.scheme_version,
        areas=tuple(entries),
    )


def build_roadmap(scheme: Scheme, profile: Profile, targets: Mapping[str, int]) -> Roadmap:
    """Ordered level transitions that reach the target profile.

    Steps cover the prerequisite closure of the targets minus coordinates
    already attained, in a topological order of the prerequisite relation;
    ties break by scheme area order, then ascending rank, so the output is
    deterministic.  The starting profile must be consistent.
    """
    if profile.scheme_id != scheme.id or profile.scheme_version != scheme.version:
        raise SchemeMismatch(
            f"profile is for scheme {profile.scheme_id!r} v{profile.scheme_version},"
            f" not {scheme.id!r} v{scheme.version}"
        )
    if not profile.consistent:
        raise InconsistentProfile(
            "starting profile violates prerequisite edges; resolve the"
            " violations before planning a roadmap"
        )
    effective_check = profile.effective_levels()
    for edge in scheme.prerequisites:
        subject_level = effective_check.get(edge.subject.area, 0)
        required_level = effective_check.get(edge.requires.area, 0)
        if edge.subject.rank <= subject_level and required_level < edge.requires.rank:
            raise InconsistentProfile(
                f"starting profile claims {edge.subject} without {edge.requires}"
            )
    coords = _coerce_targets(scheme, targets)
    closure = prerequisite_closure(scheme, coords)
    effective = profile.effective_levels()
    for area_id in {coord.area for coord in closure}:
        if area_id not in effective:
            raise SchemeMismatch(f"profile has no entry for area {area_id!r}")

    needed = {coord for coord in closure if coord.rank > effective[coord.area]}

    edges_by_subject: dict[AreaLevel, list[PrerequisiteEdge]] = {}
    for edge in scheme.prerequisites:
        edges_by_subject.setdefault(edge.subject, []).append(edge)

    area_order = {area_id: idx for idx, area_id in enumerate(scheme.area_ids())}

    def pending_deps(coord: AreaLevel) -> list[AreaLevel]:
        deps = []
        implicit = AreaLevel(coord.area, coord.rank - 1)
        if implicit in needed:
            deps.append(implicit)
        for edge in edges_by_subject.get(coord, ()):
            if edge.requires in needed:
                deps.append(edge.requires)
        return deps

    blockers = {coord: len(pending_deps(coord)) for coord in needed}
    dependents: dict[AreaLevel, list[AreaLevel]] = {}
    for coord in needed:
        for dep in pending_deps(coord):
            dependents.setdefault(dep, []).append(coord)

    ready = [
        (area_order[coord.area], coord.rank, coord)
        for coord in needed
        if blockers[coord] == 0
    ]
    heapq.heapify(ready)

    ordered: list[AreaLevel] = []
    while ready:
        _, _, coord = heapq.heappop(ready)
        ordered.append(coord)
        for dependent in dependents.get(coord, ()):
            blockers[dependent] -= 1
            if blockers[dependent] == 0:
                heapq.heappush(
                    ready, (area_order[dependent.area], dependent.rank, dependent)
                )
    if len(ordered) != len(needed):  # pragma: no cover - impossible on a valid scheme
        raise InvalidScheme("prerequisite relation is cyclic; roadmap has no valid order")

    steps = []
    for index, coord in enumerate(ordered, start=1):
        level = scheme.area(coord.area).level(coord.rank)
        steps.append(
            RoadmapStep(
                index=index,
                area_level=coord,
                indicators=tuple(level.indicators),
                prerequisites=tuple(edges_by_subject.get(coord, ())),
            )
        )
    return Roadmap(
        scheme_id=scheme.id,
        scheme_version=scheme.version,
        steps=tuple(steps),
    )


def _check_session_scheme(scheme: Scheme, session: AssessmentSession) -> None:
    if session.scheme_id != scheme.id or session.scheme_version != scheme.version:
        raise SchemeMismatch(
            f"session is for scheme {session.scheme_id!r} v{session.scheme_version},"
            f" not {scheme.id!r} v{scheme.version}"
        )
