from __future__ import annotations

import random

import pytest

from conftest import make_scheme
from crstip.errors import UnknownAreaLevel
from crstip.model import (
    AreaLevel,
    PrerequisiteEdge,
    Scheme,
    prerequisite_closure,
    validate_scheme,
)
from oracles import brute_force_closure, random_valid_scheme, reaches_itself


def codes(issues) -> list[str]:
    return [issue.code for issue in issues]


class TestValidateScheme:
    def test_canonical_scheme_is_valid(self, canonical):
        assert validate_scheme(canonical) == []

    def test_validation_is_pure_and_idempotent(self, canonical):
        bad = make_scheme({"a": [1, 2, 4]})
        assert validate_scheme(bad) == validate_scheme(bad)
        assert validate_scheme(canonical) == validate_scheme(canonical)

    def test_non_contiguous_ranks(self):
        scheme = make_scheme({"a": [1, 2, 3, 4], "b": [1, 2], "c": [1], "tooling": [1, 2, 4]})
        issues = validate_scheme(scheme)
        assert codes(issues) == ["NON_CONTIGUOUS_RANKS"]
        assert issues[0].path == "areas[3].levels"

    def test_duplicate_rank_also_breaks_contiguity(self):
        scheme = make_scheme({"a": [1, 2, 2, 4]})
        result = codes(validate_scheme(scheme))
        assert "DUPLICATE_RANK" in result
        assert "NON_CONTIGUOUS_RANKS" in result
        # the twin rank-2 levels also collide on indicator ids
        assert "DUPLICATE_INDICATOR_ID" in result

    def test_missing_rank_one(self):
        scheme = make_scheme({"a": [2, 3]})
        assert "MISSING_RANK" in codes(validate_scheme(scheme))

    def test_duplicate_area_id(self):
        base = make_scheme({"a": [1, 2]})
        scheme = Scheme(
            id="test", name="t", version="1", areas=base.areas + (base.areas[0],)
        )
        result = codes(validate_scheme(scheme))
        assert "DUPLICATE_AREA_ID" in result
        assert "DUPLICATE_INDICATOR_ID" in result

    def test_rank1_with_indicators_and_empty_rank2(self):
        template = make_scheme({"a": [1, 2]})
        area = template.areas[0]
        rank1, rank2 = area.levels
        broken_area = type(area)(
            id=area.id,
            name=area.name,
            description=area.description,
            levels=(
                type(rank1)(rank=1, name="L1", description="", indicators=rank2.indicators),
                type(rank2)(rank=2, name="L2", description="", indicators=()),
            ),
        )
        scheme = Scheme(id="test", name="t", version="1", areas=(broken_area,))
        assert codes(validate_scheme(scheme)) == ["RANK1_HAS_INDICATORS", "EMPTY_INDICATORS"]

    def test_dangling_and_self_area_edges(self):
        scheme = make_scheme(
            {"a": [1, 2], "b": [1, 2]},
            edges=[("a", 2, "ghost", 1), ("a", 2, "a", 1)],
        )
        result = codes(validate_scheme(scheme))
        assert result.count("DANGLING_PREREQ") == 1
        assert result.count("SELF_AREA_PREREQ") == 1

    def test_cycle_detected(self):
        # (a,3) -> (b,2) and (b,2) -> (a,3): confirmed circular by the
        # reachability oracle, then asserted against the validator.
        scheme = make_scheme(
            {"a": [1, 2, 3], "b": [1, 2]},
            edges=[("a", 3, "b", 2), ("b", 2, "a", 3)],
        )
        assert reaches_itself(scheme, AreaLevel("a", 3))
        assert "PREREQ_CYCLE" in codes(validate_scheme(scheme))

    def test_cycle_through_implicit_edges(self):
        # (a,2) -> (b,2) and (b,3)... no explicit back edge, but
        # (b,2) -> (a,3) pulls a cycle through a's implicit 3 -> 2.
        scheme = make_scheme(
            {"a": [1, 2, 3], "b": [1, 2]},
            edges=[("a", 2, "b", 2), ("b", 2, "a", 3)],
        )
        assert reaches_itself(scheme, AreaLevel("a", 2))
        assert "PREREQ_CYCLE" in codes(validate_scheme(scheme))

    def test_acyclic_cross_edges_pass(self):
        scheme = make_scheme(
            {"a": [1, 2, 3], "b": [1, 2, 3]},
            edges=[("a", 3, "b", 2), ("b", 3, "a", 2)],
        )
        assert not reaches_itself(scheme, AreaLevel("a", 3))
        assert validate_scheme(scheme) == []

    def test_huge_rank_reports_quickly(self):
        scheme = make_scheme({"a": [1, 999999999999]})
        result = codes(validate_scheme(scheme))
        assert "NON_CONTIGUOUS_RANKS" in result


class TestPrerequisiteClosure:
    def test_canonical_single_target(self, canonical):
        # Frozen from the brute-force reachability oracle on the canonical
        # edge list.
        closure = prerequisite_closure(canonical, {AreaLevel("security_testing", 3)})
        expected = {
            AreaLevel("security_testing", 1),
            AreaLevel("security_testing", 2),
            AreaLevel("security_testing", 3),
            AreaLevel("risk_assessment", 1),
            AreaLevel("risk_assessment", 2),
        }
        assert closure == expected
        assert closure == brute_force_closure(canonical, {AreaLevel("security_testing", 3)})

    def test_canonical_risk_assessment_4_pulls_tooling(self, canonical):
        closure = prerequisite_closure(canonical, {AreaLevel("risk_assessment", 4)})
        assert {AreaLevel("tooling", rank) for rank in (1, 2, 3)} <= closure
        assert closure == brute_force_closure(canonical, {AreaLevel("risk_assessment", 4)})

    def test_rank_one_is_its_own_closure(self):
        scheme = make_scheme({"a": [1, 2]})
        assert prerequisite_closure(scheme, {AreaLevel("a", 1)}) == {AreaLevel("a", 1)}

    def test_unknown_target_rejected(self, canonical):
        with pytest.raises(UnknownAreaLevel):
            prerequisite_closure(canonical, {AreaLevel("compliance", 9)})
        with pytest.raises(UnknownAreaLevel):
            prerequisite_closure(canonical, {AreaLevel("nope", 1)})

    def test_extensive_monotone_idempotent(self, canonical):
        small = {AreaLevel("security_testing", 3)}
        large = small | {AreaLevel("compliance", 4)}
        closure_small = prerequisite_closure(canonical, small)
        closure_large = prerequisite_closure(canonical, large)
        assert small <= closure_small
        assert closure_small <= closure_large
        assert prerequisite_closure(canonical, set(closure_small)) == closure_small

    def test_previous_rank_always_in_closure(self, canonical):
        for area in canonical.areas:
            for level in area.levels:
                if level.rank < 2:
                    continue
                coord = AreaLevel(area.id, level.rank)
                closure = prerequisite_closure(canonical, {coord})
                assert AreaLevel(area.id, level.rank - 1) in closure

    def test_oracle_equivalence_on_random_schemes(self):
        rng = random.Random(20260809)
        for _ in range(60):
            scheme = random_valid_scheme(rng)
            assert validate_scheme(scheme) == []
            for area in scheme.areas:
                for level in area.levels:
                    target = {AreaLevel(area.id, level.rank)}
                    assert prerequisite_closure(scheme, target) == brute_force_closure(
                        scheme, target
                    ), f"closure mismatch on {target}"
