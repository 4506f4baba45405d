from __future__ import annotations

from pathlib import Path

import pytest

from crstip import engine
from crstip.model import AreaLevel, Indicator, KeyArea, Level, PrerequisiteEdge, Scheme
from crstip.parser import load_bundled_scheme

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def canonical() -> Scheme:
    return load_bundled_scheme()


@pytest.fixture()
def golden_dir() -> Path:
    return GOLDEN


def make_area(area_id: str, ranks: list[int], indicators_per_rank: int = 1) -> KeyArea:
    levels = []
    for rank in ranks:
        indicators = ()
        if rank >= 2:
            indicators = tuple(
                Indicator(
                    id=f"{area_id}.{rank}.{n}",
                    statement=f"Criterion {n} for {area_id} rank {rank}",
                    level=AreaLevel(area_id, rank),
                )
                for n in range(1, indicators_per_rank + 1)
            )
        levels.append(
            Level(rank=rank, name=f"L{rank}", description=f"{area_id} rank {rank}",
                  indicators=indicators)
        )
    return KeyArea(id=area_id, name=f"Area {area_id}", description="", levels=tuple(levels))


def make_scheme(
    areas: dict[str, list[int]],
    edges: list[tuple[str, int, str, int]] = (),
    indicators_per_rank: int = 1,
) -> Scheme:
    return Scheme(
        id="test",
        name="Test scheme",
        version="1",
        areas=tuple(
            make_area(area_id, ranks, indicators_per_rank) for area_id, ranks in areas.items()
        ),
        prerequisites=tuple(
            PrerequisiteEdge(AreaLevel(sa, sr), AreaLevel(ra, rr), "test edge")
            for sa, sr, ra, rr in edges
        ),
    )


def answer_all(scheme: Scheme, session, value_for_rank) -> "engine.AssessmentSession":
    """Record an answer for every indicator; value_for_rank(rank) -> value or None."""
    for ind in scheme.indicators():
        value = value_for_rank(ind.level.rank)
        if value is not None:
            session = engine.record_answer(scheme, session, ind.id, value)
    return session


def fixture_session(scheme: Scheme, levels: dict[str, int], subject_name: str = "Fixture"):
    """A session whose raw level per area equals ``levels`` exactly.

    Answers yes to every indicator of ranks up to the area's level and no
    to everything above it.
    """
    session = engine.start_session(scheme, engine.SubjectInfo(subject_name, "system"))
    for ind in scheme.indicators():
        value = "yes" if ind.level.rank <= levels[ind.level.area] else "no"
        session = engine.record_answer(scheme, session, ind.id, value)
    return session
