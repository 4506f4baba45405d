from __future__ import annotations

import random

import pytest

from conftest import answer_all, fixture_session, make_scheme
from crstip import engine
from crstip.errors import (
    InconsistentProfile,
    InvalidScheme,
    SchemeMismatch,
    UnknownArea,
    UnknownAreaLevel,
    UnknownIndicator,
    ValidationError,
)
from crstip.model import AreaLevel
from oracles import (
    brute_force_closure,
    check_effective_levels,
    replay_roadmap,
    satisfies_edges,
    staged_level,
)

MEDIPEDIA = engine.SubjectInfo("Medipedia", "system")


def answer_states(session):
    return {key: answer.value.value for key, answer in session.answers.items()}


class TestSessions:
    def test_start_session_canonical(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        assert session.scheme_id == "crstip"
        assert session.answers == {}
        assert session.created == session.modified
        assert session.subject.name == "Medipedia"

    def test_fresh_ids(self, canonical):
        one = engine.start_session(canonical, MEDIPEDIA)
        two = engine.start_session(canonical, MEDIPEDIA)
        assert one.id != two.id

    def test_unanswered_count_matches_indicators(self):
        scheme = make_scheme({"a": [1, 2, 3]}, indicators_per_rank=2)
        session = engine.start_session(scheme, engine.SubjectInfo("X"))
        assert len(scheme.indicators()) - len(session.answers) == 4

    def test_invalid_scheme_rejected(self):
        with pytest.raises(InvalidScheme):
            engine.start_session(make_scheme({"a": [1, 3]}), engine.SubjectInfo("X"))

    def test_bad_subject_kind_rejected(self, canonical):
        with pytest.raises(ValidationError):
            engine.start_session(canonical, engine.SubjectInfo("X", kind="committee"))

    def test_record_answer_adds_one(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        updated = engine.record_answer(canonical, session, "security_testing.2.1", "yes")
        assert len(updated.answers) == len(session.answers) + 1
        assert updated.answers["security_testing.2.1"].value is engine.AnswerValue.YES
        assert session.answers == {}  # original untouched

    def test_last_write_wins(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        session = engine.record_answer(canonical, session, "security_testing.2.1", "yes")
        session = engine.record_answer(canonical, session, "security_testing.2.1", "no")
        assert len(session.answers) == 1
        assert session.answers["security_testing.2.1"].value is engine.AnswerValue.NO

    def test_unknown_indicator(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        with pytest.raises(UnknownIndicator):
            engine.record_answer(canonical, session, "nope.9.9", "yes")

    def test_bad_value(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        with pytest.raises(ValidationError):
            engine.record_answer(canonical, session, "security_testing.2.1", "maybe")

    def test_modified_strictly_advances(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        for _ in range(5):
            before = session.modified
            session = engine.record_answer(canonical, session, "compliance.2.1", "yes")
            assert session.modified > before

    def test_session_scheme_mismatch(self, canonical):
        other = make_scheme({"a": [1, 2]})
        session = engine.start_session(other, engine.SubjectInfo("X"))
        with pytest.raises(SchemeMismatch):
            engine.record_answer(canonical, session, "compliance.2.1", "yes")

    def test_document_round_trip(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        session = engine.record_answer(canonical, session, "compliance.2.1", "yes", note="audited")
        session = engine.record_answer(canonical, session, "tooling.2.1", "unknown")
        restored = engine.AssessmentSession.from_document(session.to_document())
        assert restored == session


class TestRawLevel:
    def test_all_yes_gives_max_rank(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        session = answer_all(canonical, session, lambda rank: "yes")
        for area in canonical.areas:
            assert engine.raw_level(canonical, session, area.id) == 4

    def test_no_answers_gives_floor(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        for area in canonical.areas:
            assert engine.raw_level(canonical, session, area.id) == 1

    def test_staged_scoring_ignores_higher_complete_ranks(self, canonical):
        # Rank 2 all yes, one rank-3 indicator unknown, rank 4 all yes.
        # The independent full-prefix oracle confirms the area stays at 2.
        session = engine.start_session(canonical, MEDIPEDIA)
        area = canonical.area("compliance")
        for ind in canonical.indicators():
            if ind.level.area != "compliance":
                continue
            value = "unknown" if ind.id == "compliance.3.1" else "yes"
            session = engine.record_answer(canonical, session, ind.id, value)
        assert staged_level(area, answer_states(session)) == 2
        assert engine.raw_level(canonical, session, "compliance") == 2

    def test_unknown_area(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        with pytest.raises(UnknownArea):
            engine.raw_level(canonical, session, "nope")

    def test_matches_oracle_on_random_answers(self, canonical):
        rng = random.Random(424242)
        for _ in range(200):
            session = engine.start_session(canonical, MEDIPEDIA)
            for ind in canonical.indicators():
                roll = rng.random()
                if roll < 0.45:
                    session = engine.record_answer(canonical, session, ind.id, "yes")
                elif roll < 0.65:
                    session = engine.record_answer(canonical, session, ind.id, "no")
                elif roll < 0.75:
                    session = engine.record_answer(canonical, session, ind.id, "unknown")
            states = answer_states(session)
            for area in canonical.areas:
                assert engine.raw_level(canonical, session, area.id) == staged_level(
                    area, states
                )


class TestProfiles:
    def test_medipedia_before_fixture(self, canonical):
        session = fixture_session(canonical, {a.id: 2 for a in canonical.areas}, "Medipedia")
        profile = engine.compute_profile(canonical, session)
        assert [entry.raw_level for entry in profile.areas] == [2, 2, 2, 2]
        assert [entry.effective_level for entry in profile.areas] == [2, 2, 2, 2]
        assert all(entry.completeness == 1.0 for entry in profile.areas)
        assert engine.check_consistency(canonical, session) == []

    def test_capping_and_violation(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        for ind in canonical.indicators():
            if ind.level.area == "security_testing" and ind.level.rank <= 3:
                session = engine.record_answer(canonical, session, ind.id, "yes")
        profile = engine.compute_profile(canonical, session)
        assert profile.area("security_testing").raw_level == 3
        assert profile.area("security_testing").effective_level == 2
        assert profile.area("risk_assessment").raw_level == 1

        violations = engine.check_consistency(canonical, session)
        assert [v.to_document() for v in violations] == [
            {
                "subject": {"area": "security_testing", "rank": 3},
                "requires": {"area": "risk_assessment", "rank": 2},
                "observed_rank": 1,
            }
        ]

    def test_empty_session_profile(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        profile = engine.compute_profile(canonical, session)
        assert all(entry.raw_level == 1 for entry in profile.areas)
        assert all(entry.effective_level == 1 for entry in profile.areas)
        assert all(entry.completeness == 0.0 for entry in profile.areas)

    def test_completeness_counts_only_yes_and_no(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        session = engine.record_answer(canonical, session, "tooling.2.1", "unknown")
        session = engine.record_answer(canonical, session, "tooling.3.1", "no")
        profile = engine.compute_profile(canonical, session)
        assert profile.area("tooling").completeness == 1 / 4

    def test_all_max_is_consistent(self, canonical):
        session = fixture_session(canonical, {a.id: 4 for a in canonical.areas})
        assert engine.check_consistency(canonical, session) == []
        profile = engine.compute_profile(canonical, session)
        assert profile.consistent

    def test_risk4_tooling2_violation(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        for ind in canonical.indicators():
            if ind.level.area == "risk_assessment":
                session = engine.record_answer(canonical, session, ind.id, "yes")
            if ind.level.area == "tooling" and ind.level.rank == 2:
                session = engine.record_answer(canonical, session, ind.id, "yes")
        violations = engine.check_consistency(canonical, session)
        assert [v.to_document() for v in violations] == [
            {
                "subject": {"area": "risk_assessment", "rank": 4},
                "requires": {"area": "tooling", "rank": 3},
                "observed_rank": 2,
            }
        ]

    def test_effective_definition_on_random_sessions(self, canonical):
        rng = random.Random(77)
        for _ in range(300):
            levels = {area.id: rng.randint(1, 4) for area in canonical.areas}
            session = fixture_session(canonical, levels)
            profile = engine.compute_profile(canonical, session)
            problems = check_effective_levels(
                canonical, profile.raw_levels(), profile.effective_levels()
            )
            assert problems == [], problems
            empty_iff_equal = (
                engine.check_consistency(canonical, session) == []
            ) == profile.consistent
            assert empty_iff_equal

    def test_chained_capping_propagates(self):
        # c needs b at 2, b needs a at 2; a stays at 1, so both cap.
        scheme = make_scheme(
            {"a": [1, 2], "b": [1, 2], "c": [1, 2]},
            edges=[("c", 2, "b", 2), ("b", 2, "a", 2)],
        )
        session = engine.start_session(scheme, engine.SubjectInfo("X"))
        for ind in scheme.indicators():
            if ind.level.area in ("b", "c"):
                session = engine.record_answer(scheme, session, ind.id, "yes")
        profile = engine.compute_profile(scheme, session)
        assert profile.raw_levels() == {"a": 1, "b": 2, "c": 2}
        assert profile.effective_levels() == {"a": 1, "b": 1, "c": 1}

    def test_profile_document_round_trip(self, canonical):
        session = fixture_session(canonical, {a.id: 3 for a in canonical.areas})
        profile = engine.compute_profile(canonical, session)
        assert engine.Profile.from_document(profile.to_document()) == profile


class TestGapAnalysis:
    def test_single_area_target(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        report = engine.gap_analysis(canonical, session, {"tooling": 2})
        by_area = {entry.area: entry for entry in report.areas}
        assert [ind.id for ind in by_area["tooling"].missing] == ["tooling.2.1"]
        assert all(not by_area[a].missing for a in by_area if a != "tooling")

    def test_closure_pulls_other_areas(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        report = engine.gap_analysis(canonical, session, {"security_testing": 3})
        by_area = {entry.area: entry for entry in report.areas}
        assert by_area["risk_assessment"].target_rank == 2
        assert [ind.id for ind in by_area["risk_assessment"].missing] == [
            "risk_assessment.2.1",
            "risk_assessment.2.2",
        ]
        closure = brute_force_closure(canonical, {AreaLevel("security_testing", 3)})
        assert AreaLevel("risk_assessment", 2) in closure

    def test_fixture_to_all_four(self, canonical):
        session = fixture_session(canonical, {a.id: 2 for a in canonical.areas})
        report = engine.gap_analysis(canonical, session, {a.id: 4 for a in canonical.areas})
        for entry in report.areas:
            area = canonical.area(entry.area)
            expected = [
                ind.id
                for rank in (3, 4)
                for ind in area.level(rank).indicators
            ]
            assert [ind.id for ind in entry.missing] == expected

    def test_target_at_or_below_current_is_empty(self, canonical):
        session = fixture_session(canonical, {a.id: 3 for a in canonical.areas})
        report = engine.gap_analysis(canonical, session, {"compliance": 2})
        by_area = {entry.area: entry for entry in report.areas}
        assert by_area["compliance"].missing == ()

    def test_gap_states(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        session = engine.record_answer(canonical, session, "tooling.2.1", "unknown")
        session = engine.record_answer(canonical, session, "tooling.3.1", "no")
        report = engine.gap_analysis(canonical, session, {"tooling": 3})
        by_area = {entry.area: entry for entry in report.areas}
        assert [(i.id, i.state) for i in by_area["tooling"].missing] == [
            ("tooling.2.1", "unknown"),
            ("tooling.3.1", "no"),
        ]

    def test_unknown_target(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        with pytest.raises(UnknownAreaLevel):
            engine.gap_analysis(canonical, session, {"tooling": 9})


class TestRoadmaps:
    def test_fixture_to_all_four(self, canonical):
        session = fixture_session(canonical, {a.id: 2 for a in canonical.areas}, "Medipedia")
        profile = engine.compute_profile(canonical, session)
        plan = engine.build_roadmap(canonical, profile, {a.id: 4 for a in canonical.areas})
        order = [step.area_level for step in plan.steps]
        assert len(order) == 8
        tooling3 = order.index(AreaLevel("tooling", 3))
        assert tooling3 < order.index(AreaLevel("risk_assessment", 4))
        assert tooling3 < order.index(AreaLevel("security_testing", 4))
        final = replay_roadmap(canonical, profile.effective_levels(), order)
        assert all(final[a.id] >= 4 for a in canonical.areas)

    def test_already_attained_targets_make_empty_roadmap(self, canonical):
        session = fixture_session(canonical, {a.id: 4 for a in canonical.areas})
        profile = engine.compute_profile(canonical, session)
        plan = engine.build_roadmap(canonical, profile, {"compliance": 4, "tooling": 2})
        assert plan.steps == ()

    def test_compliance4_pulls_risk2_first(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        profile = engine.compute_profile(canonical, session)
        plan = engine.build_roadmap(canonical, profile, {"compliance": 4})
        order = [step.area_level for step in plan.steps]
        assert order.index(AreaLevel("risk_assessment", 2)) < order.index(
            AreaLevel("compliance", 4)
        )

    def test_inconsistent_profile_rejected(self, canonical):
        session = engine.start_session(canonical, MEDIPEDIA)
        for ind in canonical.indicators():
            if ind.level.area == "security_testing" and ind.level.rank <= 3:
                session = engine.record_answer(canonical, session, ind.id, "yes")
        profile = engine.compute_profile(canonical, session)
        assert not profile.consistent
        with pytest.raises(InconsistentProfile):
            engine.build_roadmap(canonical, profile, {"tooling": 2})

    def test_steps_cover_closure_minus_attained(self, canonical):
        session = fixture_session(canonical, {"compliance": 1, "risk_assessment": 2,
                                              "security_testing": 1, "tooling": 3})
        profile = engine.compute_profile(canonical, session)
        targets = {"security_testing": 4}
        plan = engine.build_roadmap(canonical, profile, targets)
        expected = {
            coord
            for coord in brute_force_closure(canonical, {AreaLevel("security_testing", 4)})
            if coord.rank > profile.effective_levels()[coord.area]
        }
        assert {step.area_level for step in plan.steps} == expected

    def test_gap_and_roadmap_agree_on_indicators(self, canonical):
        session = fixture_session(canonical, {"compliance": 2, "risk_assessment": 1,
                                              "security_testing": 1, "tooling": 2})
        profile = engine.compute_profile(canonical, session)
        targets = {"security_testing": 4, "compliance": 3}
        plan = engine.build_roadmap(canonical, profile, targets)
        report = engine.gap_analysis(canonical, session, targets)
        roadmap_ids = {ind.id for step in plan.steps for ind in step.indicators}
        gap_ids = {ind.id for entry in report.areas for ind in entry.missing}
        assert roadmap_ids == gap_ids

    def test_replay_on_random_consistent_profiles(self, canonical):
        rng = random.Random(5150)
        checked = 0
        while checked < 150:
            levels = {area.id: rng.randint(1, 4) for area in canonical.areas}
            if not satisfies_edges(canonical, levels):
                continue
            checked += 1
            session = fixture_session(canonical, levels)
            profile = engine.compute_profile(canonical, session)
            targets = {area.id: rng.randint(1, 4) for area in canonical.areas}
            plan = engine.build_roadmap(canonical, profile, targets)
            final = replay_roadmap(
                canonical, profile.effective_levels(), [s.area_level for s in plan.steps]
            )
            for area_id, rank in targets.items():
                assert final[area_id] >= rank


class TestScoringProperties:
    def test_monotone_and_order_insensitive(self, canonical):
        rng = random.Random(314159)
        indicators = canonical.indicators()
        for _ in range(150):
            chosen = [
                (ind.id, rng.choice(["yes", "no", "unknown"]))
                for ind in indicators
                if rng.random() < 0.7
            ]
            ordered = list(chosen)
            rng.shuffle(ordered)

            session_a = engine.start_session(canonical, MEDIPEDIA)
            for ind_id, value in chosen:
                session_a = engine.record_answer(canonical, session_a, ind_id, value)
            session_b = engine.start_session(canonical, MEDIPEDIA)
            for ind_id, value in ordered:
                session_b = engine.record_answer(canonical, session_b, ind_id, value)

            profile_a = engine.compute_profile(canonical, session_a)
            profile_b = engine.compute_profile(canonical, session_b)
            assert [e.raw_level for e in profile_a.areas] == [
                e.raw_level for e in profile_b.areas
            ]

            if chosen:
                flip_id, _ = rng.choice(chosen)
                promoted = engine.record_answer(canonical, session_a, flip_id, "yes")
                demoted = engine.record_answer(canonical, session_a, flip_id, "no")
                for area in canonical.areas:
                    base = engine.raw_level(canonical, session_a, area.id)
                    assert engine.raw_level(canonical, promoted, area.id) >= base
                    assert engine.raw_level(canonical, demoted, area.id) <= base
