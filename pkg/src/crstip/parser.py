"""Scheme definition files: parsing with positioned diagnostics, canonical
serialization, and access to the bundled CRSTIP definition.

The file format is JSON with a fixed schema.  Canonical form means: keys in
a fixed order, 2-space indentation, LF line endings, one trailing newline.
``parse_scheme`` never raises on malformed input; everything wrong with a
document comes back as ``ParseDiagnostic`` values with 1-based line/column
of the nearest enclosing element.
"""

from __future__ import annotations

import json
import re
from bisect import bisect_right
from dataclasses import dataclass, field
from importlib import resources

from .errors import InvalidScheme
from .model import (
    AreaLevel,
    Indicator,
    KeyArea,
    Level,
    PrerequisiteEdge,
    Scheme,
    validate_scheme,
)

BUNDLED_SCHEME_ID = "crstip"

_ROOT_KEYS = {"id": str, "name": str, "version": str, "areas": list, "prerequisites": list}
_AREA_KEYS = {"id": str, "name": str, "description": str, "levels": list}
_LEVEL_KEYS = {"rank": int, "name": str, "description": str, "indicators": list}
_INDICATOR_KEYS = {"id": str, "statement": str}
_EDGE_KEYS = {"subject": dict, "requires": dict, "rationale": str}
_COORD_KEYS = {"area": str, "rank": int}


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # "error" or "warning"
    code: str
    message: str
    line: int
    column: int


@dataclass(frozen=True)
class ParseResult:
    """Outcome of parsing a scheme document.

    ``scheme`` is set only when no error-severity diagnostics were
    produced; warnings may accompany a successful parse.
    """

    scheme: Scheme | None
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.scheme is not None

    @property
    def errors(self) -> list[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]


def canonical_json(document: object) -> str:
    """Render a JSON-able structure in the package's canonical form."""
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def parse_scheme(text: str | bytes) -> ParseResult:
    """Parse a scheme document, collecting diagnostics instead of raising.

    A returned scheme additionally passes ``validate_scheme`` with zero
    issues; structural violations are reported as error diagnostics with
    the validation code and the offending element's source position.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            return ParseResult(None, [_syntax(f"document is not valid UTF-8: {exc.reason}")])
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        return ParseResult(
            None, [ParseDiagnostic("error", "SYNTAX", exc.msg, exc.lineno, exc.colno)]
        )
    except (RecursionError, ValueError) as exc:
        return ParseResult(None, [_syntax(f"document could not be parsed: {exc}")])

    locator = _Locator(text)
    if not isinstance(data, dict):
        return ParseResult(
            None, [_syntax("top-level value must be an object", *locator.position(""))]
        )

    diagnostics: list[ParseDiagnostic] = []
    scheme = _extract_scheme(data, locator, diagnostics)
    if scheme is not None and not any(d.severity == "error" for d in diagnostics):
        for issue in validate_scheme(scheme):
            line, column = locator.position(issue.path)
            diagnostics.append(ParseDiagnostic("error", issue.code, issue.message, line, column))
    if any(d.severity == "error" for d in diagnostics):
        scheme = None
    return ParseResult(scheme, diagnostics)


def serialize_scheme(scheme: Scheme) -> str:
    """Serialize a valid scheme to its canonical document.

    ``parse_scheme(serialize_scheme(s))`` reproduces ``s`` exactly;
    serializing an invalid scheme raises InvalidScheme.
    """
    issues = validate_scheme(scheme)
    if issues:
        raise InvalidScheme(
            "cannot serialize an invalid scheme: "
            + "; ".join(f"{i.code} at {i.path}" for i in issues)
        )
    return canonical_json(scheme_to_document(scheme))


def scheme_to_document(scheme: Scheme) -> dict:
    """Scheme as a JSON-able dict with keys in canonical order."""
    return {
        "id": scheme.id,
        "name": scheme.name,
        "version": scheme.version,
        "areas": [
            {
                "id": area.id,
                "name": area.name,
                "description": area.description,
                "levels": [
                    {
                        "rank": level.rank,
                        "name": level.name,
                        "description": level.description,
                        "indicators": [
                            {"id": ind.id, "statement": ind.statement}
                            for ind in level.indicators
                        ],
                    }
                    for level in area.levels
                ],
            }
            for area in scheme.areas
        ],
        "prerequisites": [
            {
                "subject": {"area": edge.subject.area, "rank": edge.subject.rank},
                "requires": {"area": edge.requires.area, "rank": edge.requires.rank},
                "rationale": edge.rationale,
            }
            for edge in scheme.prerequisites
        ],
    }


def bundled_scheme_text() -> str:
    return resources.files("crstip").joinpath("data/crstip.scheme.json").read_text("utf-8")


def load_bundled_scheme() -> Scheme:
    """The canonical CRSTIP scheme shipped with the package."""
    result = parse_scheme(bundled_scheme_text())
    if result.scheme is None:  # pragma: no cover - packaging defect
        raise InvalidScheme("bundled scheme failed to parse")
    return result.scheme


def _syntax(message: str, line: int = 1, column: int = 1) -> ParseDiagnostic:
    return ParseDiagnostic("error", "SYNTAX", message, line, column)


def _extract_scheme(
    data: dict, locator: _Locator, diagnostics: list[ParseDiagnostic]
) -> Scheme | None:
    root = _Shape(data, "", locator, diagnostics, _ROOT_KEYS)
    if not root.complete:
        return None

    areas: list[KeyArea] = []
    broken = False
    for a_idx, raw_area in enumerate(root.get("areas")):
        a_path = f"areas[{a_idx}]"
        area_obj = _Shape(raw_area, a_path, locator, diagnostics, _AREA_KEYS)
        if not area_obj.complete:
            broken = True
            continue
        area_id = area_obj.get("id")
        levels: list[Level] = []
        for l_idx, raw_level in enumerate(area_obj.get("levels")):
            l_path = f"{a_path}.levels[{l_idx}]"
            level_obj = _Shape(raw_level, l_path, locator, diagnostics, _LEVEL_KEYS)
            if not level_obj.complete:
                broken = True
                continue
            rank = level_obj.get("rank")
            indicators: list[Indicator] = []
            for i_idx, raw_ind in enumerate(level_obj.get("indicators")):
                i_path = f"{l_path}.indicators[{i_idx}]"
                ind_obj = _Shape(raw_ind, i_path, locator, diagnostics, _INDICATOR_KEYS)
                if not ind_obj.complete:
                    broken = True
                    continue
                indicators.append(
                    Indicator(
                        id=ind_obj.get("id"),
                        statement=ind_obj.get("statement"),
                        level=AreaLevel(area_id, rank),
                    )
                )
            levels.append(
                Level(
                    rank=rank,
                    name=level_obj.get("name"),
                    description=level_obj.get("description"),
                    indicators=tuple(indicators),
                )
            )
        areas.append(
            KeyArea(
                id=area_id,
                name=area_obj.get("name"),
                description=area_obj.get("description"),
                levels=tuple(levels),
            )
        )

    edges: list[PrerequisiteEdge] = []
    for e_idx, raw_edge in enumerate(root.get("prerequisites")):
        e_path = f"prerequisites[{e_idx}]"
        edge_obj = _Shape(raw_edge, e_path, locator, diagnostics, _EDGE_KEYS)
        if not edge_obj.complete:
            broken = True
            continue
        coords = []
        for side in ("subject", "requires"):
            coord_obj = _Shape(
                edge_obj.get(side), f"{e_path}.{side}", locator, diagnostics, _COORD_KEYS
            )
            if coord_obj.complete:
                coords.append(AreaLevel(coord_obj.get("area"), coord_obj.get("rank")))
        if len(coords) != 2:
            broken = True
            continue
        edges.append(
            PrerequisiteEdge(
                subject=coords[0], requires=coords[1], rationale=edge_obj.get("rationale")
            )
        )

    if broken:
        return None
    return Scheme(
        id=root.get("id"),
        name=root.get("name"),
        version=root.get("version"),
        areas=tuple(areas),
        prerequisites=tuple(edges),
    )


class _Shape:
    """Checks one JSON object against its expected key/type table."""

    def __init__(
        self,
        value: object,
        path: str,
        locator: _Locator,
        diagnostics: list[ParseDiagnostic],
        expected: dict[str, type],
    ):
        self._data: dict = {}
        self.complete = True
        label = path or "document root"
        if not isinstance(value, dict):
            line, column = locator.position(path)
            diagnostics.append(
                ParseDiagnostic(
                    "error",
                    "TYPE",
                    f"{label} must be an object, got {_type_name(value)}",
                    line,
                    column,
                )
            )
            self.complete = False
            return
        for key, kind in expected.items():
            child = f"{path}.{key}" if path else key
            if key not in value:
                line, column = locator.position(path)
                diagnostics.append(
                    ParseDiagnostic(
                        "error", "MISSING_KEY", f"{label} is missing key {key!r}", line, column
                    )
                )
                self.complete = False
                continue
            item = value[key]
            if not isinstance(item, kind) or (kind is int and isinstance(item, bool)):
                line, column = locator.position(child)
                diagnostics.append(
                    ParseDiagnostic(
                        "error",
                        "TYPE",
                        f"{child} must be a {_TYPE_LABELS[kind]}, got {_type_name(item)}",
                        line,
                        column,
                    )
                )
                self.complete = False
                continue
            self._data[key] = item
        for key in value:
            if key not in expected:
                child = f"{path}.{key}" if path else key
                line, column = locator.position(child)
                diagnostics.append(
                    ParseDiagnostic(
                        "warning", "UNKNOWN_KEY", f"{label} has unknown key {key!r}", line, column
                    )
                )

    def get(self, key: str):
        return self._data[key]


_TYPE_LABELS = {str: "string", int: "integer", list: "array", dict: "object"}


def _type_name(value: object) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    return _TYPE_LABELS.get(type(value), type(value).__name__)


_PATH_TAIL = re.compile(r"(\.[^.\[\]]+|\[\d+\]|^[^.\[\]]+)$")


class _Locator:
    """Maps JSON paths like ``areas[0].levels[2].rank`` to (line, column).

    Built with a single iterative pass over the document text; only runs
    on text ``json.loads`` already accepted, but bails out quietly rather
    than raising if the two ever disagree.
    """

    def __init__(self, text: str):
        self._offsets = _scan_offsets(text)
        self._line_starts = [0]
        for idx, ch in enumerate(text):
            if ch == "\n":
                self._line_starts.append(idx + 1)

    def position(self, path: str) -> tuple[int, int]:
        """Position of the element at ``path``, or its nearest ancestor."""
        probe = path
        while True:
            if probe in self._offsets:
                return self._to_line_col(self._offsets[probe])
            if not probe:
                return (1, 1)
            trimmed = _PATH_TAIL.sub("", probe)
            probe = trimmed if trimmed != probe else ""

    def _to_line_col(self, offset: int) -> tuple[int, int]:
        idx = bisect_right(self._line_starts, offset) - 1
        return (idx + 1, offset - self._line_starts[idx] + 1)


def _scan_offsets(text: str) -> dict[str, int]:
    """Character offset of every JSON value, keyed by path."""
    offsets: dict[str, int] = {}
    n = len(text)
    i = 0

    def skip_ws(j: int) -> int:
        while j < n and text[j] in " \t\n\r":
            j += 1
        return j

    def skip_string(j: int) -> int:
        j += 1
        while j < n:
            ch = text[j]
            if ch == "\\":
                j += 2
                continue
            j += 1
            if ch == '"':
                break
        return j

    VALUE, OBJ_KEY, AFTER = 0, 1, 2
    state = VALUE
    path = ""
    stack: list[list] = []  # ["obj", path] or ["arr", path, next_index]

    while True:
        i = skip_ws(i)
        if i >= n:
            break
        ch = text[i]
        if state == VALUE:
            offsets.setdefault(path, i)
            if ch == "{":
                stack.append(["obj", path])
                i += 1
                state = OBJ_KEY
            elif ch == "[":
                j = skip_ws(i + 1)
                if j < n and text[j] == "]":
                    i = j + 1
                    state = AFTER
                else:
                    stack.append(["arr", path, 0])
                    i += 1
                    # stay in VALUE for the first element
                    frame = stack[-1]
                    path = f"{frame[1]}[0]"
                    frame[2] = 1
            elif ch == '"':
                i = skip_string(i)
                state = AFTER
            else:
                while i < n and text[i] not in ",]} \t\n\r":
                    i += 1
                state = AFTER
        elif state == OBJ_KEY:
            if ch == "}":
                i += 1
                stack.pop()
                state = AFTER
            elif ch == '"':
                key_start = i
                i = skip_string(i)
                try:
                    key = json.loads(text[key_start:i])
                except ValueError:
                    break
                i = skip_ws(i)
                if i >= n or text[i] != ":":
                    break
                i += 1
                parent = stack[-1][1]
                path = f"{parent}.{key}" if parent else key
                state = VALUE
            else:
                break
        else:  # AFTER a completed value
            if not stack:
                break
            frame = stack[-1]
            if ch == ",":
                i += 1
                if frame[0] == "obj":
                    state = OBJ_KEY
                else:
                    path = f"{frame[1]}[{frame[2]}]"
                    frame[2] += 1
                    state = VALUE
            elif ch == "}" and frame[0] == "obj":
                i += 1
                stack.pop()
            elif ch == "]" and frame[0] == "arr":
                i += 1
                stack.pop()
            else:
                break
    return offsets
