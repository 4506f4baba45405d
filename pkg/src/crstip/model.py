"""Core domain model: schemes, areas, levels, indicators, prerequisites.

A scheme is a set of key areas, each with an ordered ladder of levels.
Levels of rank 2 and above carry yes/no indicators; rank 1 is the default
floor state every subject starts at and therefore carries none.  Cross-area
prerequisite edges declare that attaining one area's level requires another
area to already be at or above a given level.  Within-area ordering (rank k
requires rank k-1) is implicit and never stored as an edge.

All types are immutable values; the operations here are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import UnknownAreaLevel


@dataclass(frozen=True)
class AreaLevel:
    """Coordinate of one level inside one area: the unit of attainment."""

    area: str
    rank: int

    def __str__(self) -> str:
        return f"({self.area},{self.rank})"


@dataclass(frozen=True)
class Indicator:
    """A yes/no-answerable statement about the subject's process."""

    id: str
    statement: str
    level: AreaLevel


@dataclass(frozen=True)
class Level:
    rank: int
    name: str
    description: str
    indicators: tuple[Indicator, ...] = ()


@dataclass(frozen=True)
class KeyArea:
    id: str
    name: str
    description: str
    levels: tuple[Level, ...] = ()

    def level(self, rank: int) -> Level | None:
        for lvl in self.levels:
            if lvl.rank == rank:
                return lvl
        return None

    @property
    def max_rank(self) -> int:
        return max((lvl.rank for lvl in self.levels), default=0)


@dataclass(frozen=True)
class PrerequisiteEdge:
    """Attaining ``subject`` requires ``requires`` to already be attained."""

    subject: AreaLevel
    requires: AreaLevel
    rationale: str = ""


@dataclass(frozen=True)
class Scheme:
    id: str
    name: str
    version: str
    areas: tuple[KeyArea, ...] = ()
    prerequisites: tuple[PrerequisiteEdge, ...] = ()

    def area(self, area_id: str) -> KeyArea | None:
        for a in self.areas:
            if a.id == area_id:
                return a
        return None

    def area_ids(self) -> list[str]:
        return [a.id for a in self.areas]

    def has_coordinate(self, coord: AreaLevel) -> bool:
        area = self.area(coord.area)
        return area is not None and area.level(coord.rank) is not None

    def indicators(self) -> list[Indicator]:
        """All indicators in document order (area order, rank ascending)."""
        out: list[Indicator] = []
        for area in self.areas:
            for lvl in sorted(area.levels, key=lambda l: l.rank):
                out.extend(lvl.indicators)
        return out

    @cached_property
    def _indicator_index(self) -> dict[str, Indicator]:
        # cached_property writes straight into __dict__, so this is fine on
        # a frozen dataclass; the value is derived, not state
        return {ind.id: ind for ind in self.indicators()}

    def indicator(self, indicator_id: str) -> Indicator | None:
        return self._indicator_index.get(indicator_id)

    @cached_property
    def _requirement_adjacency(self) -> dict[AreaLevel, list[AreaLevel]]:
        return _adjacency(self)


@dataclass(frozen=True)
class ValidationIssue:
    """One violated invariant, located by a path into the scheme document."""

    code: str
    path: str
    message: str


def validate_scheme(scheme: Scheme) -> list[ValidationIssue]:
    """Check every structural invariant of a scheme.

    Returns one issue per violation, in document traversal order (areas
    first, then prerequisite edges, cycle checks last).  An empty list
    means the scheme is valid.  Issues are data, not exceptions: this
    function never raises.
    """
    issues: list[ValidationIssue] = []

    seen_area_ids: set[str] = set()
    seen_indicator_ids: dict[str, str] = {}
    for a_idx, area in enumerate(scheme.areas):
        a_path = f"areas[{a_idx}]"
        if not area.id:
            issues.append(ValidationIssue("EMPTY_AREA_ID", a_path, "area id is empty"))
        elif area.id in seen_area_ids:
            issues.append(
                ValidationIssue(
                    "DUPLICATE_AREA_ID", a_path, f"area id {area.id!r} is already defined"
                )
            )
        seen_area_ids.add(area.id)

        ranks = [lvl.rank for lvl in area.levels]
        seen_ranks: set[int] = set()
        for rank in ranks:
            if rank in seen_ranks:
                issues.append(
                    ValidationIssue(
                        "DUPLICATE_RANK",
                        f"{a_path}.levels",
                        f"area {area.id!r} defines rank {rank} more than once",
                    )
                )
            seen_ranks.add(rank)
        if ranks:
            if 1 not in seen_ranks:
                issues.append(
                    ValidationIssue(
                        "MISSING_RANK",
                        f"{a_path}.levels",
                        f"area {area.id!r} has no rank-1 level",
                    )
                )
            # Gaps are located by walking the present ranks, never by
            # materializing 1..max: a hostile document can carry huge ranks.
            uniq = sorted(seen_ranks)
            gaps: list[str] = []
            if uniq[0] < 1:
                gaps.append(f"rank {uniq[0]} is below 1")
            prev = max(uniq[0], 1)
            for rank in uniq:
                if rank > prev + 1:
                    gaps.append(
                        f"missing rank {prev + 1}"
                        if rank == prev + 2
                        else f"missing ranks {prev + 1}..{rank - 1}"
                    )
                prev = max(prev, rank)
            if gaps:
                issues.append(
                    ValidationIssue(
                        "NON_CONTIGUOUS_RANKS",
                        f"{a_path}.levels",
                        f"area {area.id!r} level ranks are not contiguous from 1: "
                        + ", ".join(gaps),
                    )
                )
        else:
            issues.append(
                ValidationIssue(
                    "MISSING_RANK", f"{a_path}.levels", f"area {area.id!r} has no levels"
                )
            )

        for l_idx, lvl in enumerate(area.levels):
            l_path = f"{a_path}.levels[{l_idx}]"
            if lvl.rank == 1 and lvl.indicators:
                issues.append(
                    ValidationIssue(
                        "RANK1_HAS_INDICATORS",
                        l_path,
                        f"rank 1 of area {area.id!r} is the default floor state and"
                        " must not carry indicators",
                    )
                )
            if lvl.rank >= 2 and not lvl.indicators:
                issues.append(
                    ValidationIssue(
                        "EMPTY_INDICATORS",
                        l_path,
                        f"rank {lvl.rank} of area {area.id!r} has no indicators",
                    )
                )
            for i_idx, ind in enumerate(lvl.indicators):
                i_path = f"{l_path}.indicators[{i_idx}]"
                if not ind.statement.strip():
                    issues.append(
                        ValidationIssue(
                            "EMPTY_STATEMENT", i_path, f"indicator {ind.id!r} has no statement"
                        )
                    )
                if ind.id in seen_indicator_ids:
                    issues.append(
                        ValidationIssue(
                            "DUPLICATE_INDICATOR_ID",
                            i_path,
                            f"indicator id {ind.id!r} is already defined at"
                            f" {seen_indicator_ids[ind.id]}",
                        )
                    )
                else:
                    seen_indicator_ids[ind.id] = i_path

    usable_edges: list[PrerequisiteEdge] = []
    for e_idx, edge in enumerate(scheme.prerequisites):
        e_path = f"prerequisites[{e_idx}]"
        dangling = False
        for side, coord in (("subject", edge.subject), ("requires", edge.requires)):
            if not scheme.has_coordinate(coord):
                issues.append(
                    ValidationIssue(
                        "DANGLING_PREREQ",
                        f"{e_path}.{side}",
                        f"{side} {coord} does not exist in the scheme",
                    )
                )
                dangling = True
        if edge.subject.area == edge.requires.area:
            issues.append(
                ValidationIssue(
                    "SELF_AREA_PREREQ",
                    e_path,
                    f"edge {edge.subject} -> {edge.requires} stays within one area;"
                    " within-area ordering is implicit",
                )
            )
            dangling = True
        if not dangling:
            usable_edges.append(edge)

    for cycle in _find_cycles(scheme, usable_edges):
        issues.append(
            ValidationIssue(
                "PREREQ_CYCLE",
                "prerequisites",
                "prerequisite cycle: " + " -> ".join(str(c) for c in cycle),
            )
        )

    return issues


def _adjacency(
    scheme: Scheme, edges: list[PrerequisiteEdge] | None = None
) -> dict[AreaLevel, list[AreaLevel]]:
    """Requirement graph: explicit edges plus implicit rank k -> k-1 edges."""
    if edges is None:
        edges = [
            e
            for e in scheme.prerequisites
            if scheme.has_coordinate(e.subject) and scheme.has_coordinate(e.requires)
        ]
    adj: dict[AreaLevel, list[AreaLevel]] = {}
    for area in scheme.areas:
        for lvl in area.levels:
            node = AreaLevel(area.id, lvl.rank)
            adj[node] = []
            if lvl.rank >= 2 and area.level(lvl.rank - 1) is not None:
                adj[node].append(AreaLevel(area.id, lvl.rank - 1))
    for edge in edges:
        adj[edge.subject].append(edge.requires)
    return adj


def _find_cycles(scheme: Scheme, edges: list[PrerequisiteEdge]) -> list[list[AreaLevel]]:
    """Cycles in the requirement graph, one representative path per cycle.

    Iterative DFS: level ladders can be arbitrarily tall, so recursion is
    not an option.
    """
    adj = _adjacency(scheme, edges)
    cycles: list[list[AreaLevel]] = []
    state: dict[AreaLevel, int] = {}  # 0 unseen, 1 on path, 2 done
    area_order = {aid: idx for idx, aid in enumerate(scheme.area_ids())}
    roots = sorted(adj, key=lambda c: (area_order.get(c.area, 0), c.rank))

    for root in roots:
        if state.get(root, 0) != 0:
            continue
        state[root] = 1
        path = [root]
        stack = [iter(adj[root])]
        while stack:
            descended = False
            for nxt in stack[-1]:
                mark = state.get(nxt, 0)
                if mark == 0:
                    state[nxt] = 1
                    path.append(nxt)
                    stack.append(iter(adj[nxt]))
                    descended = True
                    break
                if mark == 1:
                    cycles.append(path[path.index(nxt):] + [nxt])
            if not descended:
                state[path.pop()] = 2
                stack.pop()
    return cycles


def prerequisite_closure(scheme: Scheme, targets: set[AreaLevel]) -> frozenset[AreaLevel]:
    """Smallest superset of targets closed under all prerequisite edges.

    Follows explicit cross-area edges and the implicit within-area chain
    rank k -> rank k-1 down to rank 1.  Raises UnknownAreaLevel when a
    target names a coordinate the scheme does not define.
    """
    for coord in targets:
        if not scheme.has_coordinate(coord):
            raise UnknownAreaLevel(f"target {coord} does not exist in the scheme")
    adj = scheme._requirement_adjacency
    closure: set[AreaLevel] = set()
    frontier = list(targets)
    while frontier:
        node = frontier.pop()
        if node in closure:
            continue
        closure.add(node)
        frontier.extend(adj[node])
    return frozenset(closure)
