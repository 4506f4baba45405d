"""Command-line front door: validate, assess, report, compare, roadmap,
render, serve.

Exit codes: 0 success, 1 validation or diagnostic failure, 2 usage error,
3 I/O error.  Machine-readable output (``--json``) is byte-identical to
the HTTP API's serialization of the same result.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import engine
from .errors import CrstipError, IoFailure, NotFound
from .model import Scheme
from .parser import (
    BUNDLED_SCHEME_ID,
    canonical_json,
    load_bundled_scheme,
    parse_scheme,
)
from .radar import ChartSpec, Series, render_radar
from .store import compare_profiles

BUILTIN_REF = f"builtin:{BUNDLED_SCHEME_ID}"

_ANSWER_TOKENS = {
    "y": "yes",
    "yes": "yes",
    "n": "no",
    "no": "no",
    "u": "unknown",
    "unknown": "unknown",
    "s": "skip",
    "skip": "skip",
}


@click.group()
@click.version_option(package_name="crstip")
def main() -> None:
    """Maturity assessments for security assessment processes."""


@main.command()
@click.argument("scheme_file", type=click.Path(path_type=Path))
def validate(scheme_file: Path) -> None:
    """Check a scheme definition file; exit 0 iff it is valid."""
    result = parse_scheme(_read_bytes(scheme_file))
    for diag in result.diagnostics:
        click.echo(
            f"{diag.severity}[{diag.code}] line {diag.line} col {diag.column}: {diag.message}",
            err=True,
        )
    if not result.ok:
        sys.exit(1)


@main.command()
@click.option("--scheme", "scheme_ref", default=BUILTIN_REF, show_default=True)
@click.option("--subject", required=True, help="Name of the assessed subject.")
@click.option(
    "--kind",
    type=click.Choice(engine.SUBJECT_KINDS),
    default="organization",
    show_default=True,
)
@click.option("--notes", default="", help="Free-form notes about the subject.")
@click.option(
    "--answers",
    "answers_file",
    type=click.Path(path_type=Path),
    default=None,
    help="Replay answers from a script (one of y/n/u/s per line, in indicator order).",
)
@click.option("--out", "out_file", type=click.Path(path_type=Path), default=None)
def assess(
    scheme_ref: str,
    subject: str,
    kind: str,
    notes: str,
    answers_file: Path | None,
    out_file: Path | None,
) -> None:
    """Run the questionnaire and write the resulting session document."""
    scheme = _load_scheme_ref(scheme_ref)
    session = _run_engine(
        lambda: engine.start_session(scheme, engine.SubjectInfo(subject, kind, notes))
    )
    indicators = scheme.indicators()

    if answers_file is not None:
        tokens = _read_answer_script(answers_file)
        if len(tokens) > len(indicators):
            _fail(1, f"answer script has {len(tokens)} answers for {len(indicators)} indicators")
        if len(tokens) < len(indicators):
            click.echo(
                f"note: script answers {len(tokens)} of {len(indicators)} indicators;"
                " the rest are skipped",
                err=True,
            )
        for ind, token in zip(indicators, tokens):
            if token != "skip":
                session = _run_engine(
                    lambda: engine.record_answer(scheme, session, ind.id, token)
                )
    else:
        session = _interactive_questionnaire(scheme, session)

    document = canonical_json(session.to_document())
    if out_file is not None:
        _write_text(out_file, document)
    else:
        click.echo(document, nl=False)


def _interactive_questionnaire(
    scheme: Scheme, session: engine.AssessmentSession
) -> engine.AssessmentSession:
    for area in scheme.areas:
        click.echo(f"== {area.name} ==")
        for level in sorted(area.levels, key=lambda lvl: lvl.rank):
            if not level.indicators:
                continue
            click.echo(f"-- Level {level.rank}: {level.name} --")
            for ind in level.indicators:
                click.echo(f"[{ind.id}] {ind.statement}")
                while True:
                    raw = click.prompt("  answer (y/n/u/s)", default="s", show_default=False)
                    token = _ANSWER_TOKENS.get(raw.strip().lower())
                    if token is not None:
                        break
                    click.echo("  please answer y(es), n(o), u(nknown), or s(kip)")
                if token != "skip":
                    session = _run_engine(
                        lambda: engine.record_answer(scheme, session, ind.id, token)
                    )
    return session


@main.command()
@click.argument("session_file", type=click.Path(path_type=Path))
@click.option("--scheme", "scheme_ref", default=None, help="Scheme file, if not the builtin.")
@click.option("--json", "as_json", is_flag=True, help="Print the API-identical JSON document.")
@click.option("--out", "out_file", type=click.Path(path_type=Path), default=None,
              help="Also write the profile document to this file.")
def report(session_file: Path, scheme_ref: str | None, as_json: bool, out_file: Path | None):
    """Per-area raw/effective levels, completeness, and violations."""
    session = _load_session_file(session_file)
    scheme = _resolve_session_scheme(session, scheme_ref)
    profile = _run_engine(lambda: engine.compute_profile(scheme, session))
    violations = _run_engine(lambda: engine.check_consistency(scheme, session))

    if out_file is not None:
        _write_text(out_file, canonical_json(profile.to_document()))

    if as_json:
        document = {
            "profile": profile.to_document(),
            "violations": [violation.to_document() for violation in violations],
        }
        click.echo(canonical_json(document), nl=False)
        return

    click.echo(f"Subject: {profile.subject.name} ({profile.subject.kind})")
    click.echo(f"Scheme:  {scheme.name} {scheme.version}")
    click.echo()
    width = max(len(area.name) for area in scheme.areas)
    click.echo(f"{'Area':<{width}}  Raw  Effective  Completeness")
    for entry in profile.areas:
        name = scheme.area(entry.area).name
        click.echo(
            f"{name:<{width}}  {entry.raw_level:>3}  {entry.effective_level:>9}"
            f"  {entry.completeness:>11.0%}"
        )
    click.echo()
    if violations:
        click.echo("Consistency violations:")
        for violation in violations:
            click.echo(
                f"  - {violation.subject.area} level {violation.subject.rank} requires"
                f" {violation.requires.area} level {violation.requires.rank}"
                f" (observed {violation.observed_rank})"
            )
    else:
        click.echo("No consistency violations.")


@main.command()
@click.argument("before_file", type=click.Path(path_type=Path))
@click.argument("after_file", type=click.Path(path_type=Path))
@click.option("--scheme", "scheme_ref", default=None, help="Scheme file, if not the builtin.")
@click.option("--json", "as_json", is_flag=True)
def compare(before_file: Path, after_file: Path, scheme_ref: str | None, as_json: bool):
    """Diff two profile documents area by area."""
    before = _load_profile_file(before_file)
    after = _load_profile_file(after_file)
    scheme = _resolve_profile_scheme(before, scheme_ref)
    diff = _run_engine(lambda: compare_profiles(before, after, scheme))

    if as_json:
        click.echo(canonical_json(diff.to_document()), nl=False)
        return

    names = {area.id: area.name for area in scheme.areas} if scheme else {}
    width = max(len(names.get(entry.area, entry.area)) for entry in diff.areas)
    click.echo(f"{'Area':<{width}}  Before  After  Delta")
    for entry in diff.areas:
        name = names.get(entry.area, entry.area)
        click.echo(
            f"{name:<{width}}  {entry.before:>6}  {entry.after:>5}  {entry.delta:>+5}"
        )
    click.echo()
    click.echo(
        f"Improved: {diff.improved}, regressed: {diff.regressed},"
        f" unchanged: {diff.unchanged}"
    )


@main.command()
@click.argument("session_file", type=click.Path(path_type=Path))
@click.option("--target", "target_spec", required=True,
              help="Comma-separated area=rank pairs; 'all=N' targets every area.")
@click.option("--scheme", "scheme_ref", default=None, help="Scheme file, if not the builtin.")
@click.option("--json", "as_json", is_flag=True)
def roadmap(session_file: Path, target_spec: str, scheme_ref: str | None, as_json: bool):
    """Ordered, prerequisite-respecting steps toward a target profile."""
    session = _load_session_file(session_file)
    scheme = _resolve_session_scheme(session, scheme_ref)
    targets = _parse_targets(scheme, target_spec)
    profile = _run_engine(lambda: engine.compute_profile(scheme, session))
    plan = _run_engine(lambda: engine.build_roadmap(scheme, profile, targets))

    if as_json:
        click.echo(canonical_json(plan.to_document()), nl=False)
        return

    if not plan.steps:
        click.echo("Nothing to do: the current profile already covers the target.")
        return
    click.echo(f"Roadmap for {profile.subject.name}: {len(plan.steps)} steps")
    click.echo()
    for step in plan.steps:
        area = scheme.area(step.area_level.area)
        level = area.level(step.area_level.rank)
        click.echo(f"{step.index:>2}. {area.name} -> level {level.rank} ({level.name})")
        for edge in step.prerequisites:
            req_area = scheme.area(edge.requires.area)
            click.echo(
                f"      needs {req_area.name} at level {edge.requires.rank} or above"
            )
        for ind in step.indicators:
            click.echo(f"      [{ind.id}] {ind.statement}")


@main.command()
@click.argument("profile_files", nargs=-1, required=True, type=click.Path(path_type=Path))
@click.option("--out", "out_file", type=click.Path(path_type=Path), default=None)
@click.option("--label", "labels", multiple=True,
              help="Series label; repeat for the second profile (defaults to file stems).")
@click.option("--scheme", "scheme_ref", default=None, help="Scheme file, if not the builtin.")
def render(profile_files: tuple[Path, ...], out_file: Path | None, labels: tuple[str, ...],
           scheme_ref: str | None):
    """Radar chart of one or two profile documents."""
    if not 1 <= len(profile_files) <= 2:
        _fail(2, "render takes one or two profile files")
    profiles = [_load_profile_file(path) for path in profile_files]
    if len(profiles) == 2 and (
        (profiles[0].scheme_id, profiles[0].scheme_version)
        != (profiles[1].scheme_id, profiles[1].scheme_version)
    ):
        _fail(1, "error[SCHEME_MISMATCH]: profiles reference different schemes")
    scheme = _resolve_profile_scheme(profiles[0], scheme_ref)
    if scheme is None:
        _fail(1, "error[SCHEME_MISMATCH]: cannot resolve the profiles' scheme; pass --scheme")

    series = []
    for idx, (path, profile) in enumerate(zip(profile_files, profiles)):
        label = labels[idx] if idx < len(labels) else _series_label(path)
        series.append(
            Series(name=label, values=tuple(entry.effective_level for entry in profile.areas))
        )
    spec = ChartSpec(
        axes=tuple(area.name for area in scheme.areas),
        max_rank=max(area.max_rank for area in scheme.areas),
        series=tuple(series),
    )
    svg = _run_engine(lambda: render_radar(spec))
    if out_file is not None:
        _write_text(out_file, svg)
    else:
        click.echo(svg, nl=False)


@main.command()
@click.option("--listen", default="127.0.0.1:8642", show_default=True,
              help="host:port to bind.")
@click.option("--data", "data_dir", type=click.Path(path_type=Path), default=None,
              help="Store directory [default: $CRSTIP_DATA or ./crstip-data].")
@click.option("--webapp", "webapp_dir", type=click.Path(path_type=Path),
              default=Path("frontend/dist"), show_default=True,
              help="Static webapp directory to serve at /.")
def serve(listen: str, data_dir: Path | None, webapp_dir: Path) -> None:
    """Run the HTTP API (and the webapp, when built)."""
    import uvicorn

    from .api import create_app

    if data_dir is None:
        data_dir = Path(os.environ.get("CRSTIP_DATA", "crstip-data"))
    host, _, port_text = listen.rpartition(":")
    if not host or not port_text.isdigit():
        _fail(2, f"--listen must look like host:port, got {listen!r}")
    app = create_app(data_dir, webapp_dir if webapp_dir.is_dir() else None)
    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")


# -- shared helpers ---------------------------------------------------------


def _fail(code: int, message: str) -> None:
    click.echo(message, err=True)
    sys.exit(code)


def _run_engine(operation):
    try:
        return operation()
    except (NotFound, IoFailure) as exc:
        _fail(3, f"error[{exc.code}]: {exc.message}")
    except CrstipError as exc:
        _fail(1, f"error[{exc.code}]: {exc.message}")


def _read_bytes(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        _fail(3, f"error[IO_FAILURE]: cannot read {path}: {exc}")


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, "utf-8")
    except OSError as exc:
        _fail(3, f"error[IO_FAILURE]: cannot write {path}: {exc}")


def _load_scheme_ref(ref: str) -> Scheme:
    if ref == BUILTIN_REF:
        return load_bundled_scheme()
    if ref.startswith("builtin:"):
        _fail(2, f"unknown builtin scheme {ref!r}; only {BUILTIN_REF} is bundled")
    result = parse_scheme(_read_bytes(Path(ref)))
    for diag in result.errors:
        click.echo(
            f"error[{diag.code}] line {diag.line} col {diag.column}: {diag.message}", err=True
        )
    if not result.ok:
        sys.exit(1)
    return result.scheme


def _load_json_file(path: Path) -> dict:
    try:
        doc = json.loads(_read_bytes(path))
    except ValueError as exc:
        _fail(1, f"error[CORRUPT_DOCUMENT]: {path}: {exc}")
    if not isinstance(doc, dict):
        _fail(1, f"error[CORRUPT_DOCUMENT]: {path}: document root must be an object")
    return doc


def _load_session_file(path: Path) -> engine.AssessmentSession:
    try:
        return engine.AssessmentSession.from_document(_load_json_file(path))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        _fail(1, f"error[CORRUPT_DOCUMENT]: {path}: malformed session document: {exc}")


def _load_profile_file(path: Path) -> engine.Profile:
    try:
        return engine.Profile.from_document(_load_json_file(path))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        _fail(1, f"error[CORRUPT_DOCUMENT]: {path}: malformed profile document: {exc}")


def _resolve_session_scheme(
    session: engine.AssessmentSession, scheme_ref: str | None
) -> Scheme:
    scheme = _resolve_scheme_for(session.scheme_id, session.scheme_version, scheme_ref)
    if scheme is None:
        _fail(
            1,
            f"error[SCHEME_MISMATCH]: session references scheme {session.scheme_id!r}"
            f" v{session.scheme_version}, which is not the builtin; pass --scheme",
        )
    return scheme


def _resolve_profile_scheme(profile: engine.Profile, scheme_ref: str | None) -> Scheme | None:
    return _resolve_scheme_for(profile.scheme_id, profile.scheme_version, scheme_ref)


def _resolve_scheme_for(
    scheme_id: str, scheme_version: str, scheme_ref: str | None
) -> Scheme | None:
    if scheme_ref is not None:
        return _load_scheme_ref(scheme_ref)
    bundled = load_bundled_scheme()
    if scheme_id == bundled.id and scheme_version == bundled.version:
        return bundled
    return None


def _parse_targets(scheme: Scheme, spec: str) -> dict[str, int]:
    targets: dict[str, int] = {}
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, sep, value = chunk.partition("=")
        if not sep or not value.strip().isdigit():
            _fail(2, f"bad --target entry {chunk!r}; expected area=rank or all=rank")
        rank = int(value.strip())
        if key.strip() == "all":
            for area in scheme.areas:
                targets[area.id] = rank
        else:
            targets[key.strip()] = rank
    if not targets:
        _fail(2, "--target needs at least one area=rank pair")
    return targets


def _read_answer_script(path: Path) -> list[str]:
    tokens: list[str] = []
    for line_no, line in enumerate(_read_bytes(path).decode("utf-8").splitlines(), start=1):
        text = line.split("#", 1)[0].strip().lower()
        if not text:
            continue
        token = _ANSWER_TOKENS.get(text)
        if token is None:
            _fail(1, f"error[VALIDATION]: {path}:{line_no}: unrecognized answer {text!r}")
        tokens.append(token)
    return tokens


def _series_label(path: Path) -> str:
    name = path.name
    for suffix in (".profile.json", ".json"):
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return name
