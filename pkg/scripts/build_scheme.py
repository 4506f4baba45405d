"""One-off builder for the bundled CRSTIP scheme definition.

Constructs the canonical scheme in memory and writes it through the
canonical serializer, so the committed file is canonical by construction.
Kept in the repo so edits to the scheme content stay reviewable.
"""

from __future__ import annotations

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from crstip.model import AreaLevel, Indicator, KeyArea, Level, PrerequisiteEdge, Scheme
from crstip.parser import serialize_scheme


def _area(area_id: str, name: str, description: str, levels: list[tuple]) -> KeyArea:
    built = []
    for rank, level_name, level_description, statements in levels:
        indicators = tuple(
            Indicator(
                id=f"{area_id}.{rank}.{n}",
                statement=statement,
                level=AreaLevel(area_id, rank),
            )
            for n, statement in enumerate(statements, start=1)
        )
        built.append(
            Level(rank=rank, name=level_name, description=level_description, indicators=indicators)
        )
    return KeyArea(id=area_id, name=name, description=description, levels=tuple(built))


COMPLIANCE = _area(
    "compliance",
    "Legal and compliance assessment",
    "The overall process that is employed with the objective of adhering to the"
    " requirements of laws, to industry and organizational standards and codes, to"
    " principles of good governance and accepted community as well as to ethical"
    " standards.",
    [
        (
            1,
            "Ad-hoc",
            "The compliance assessment is unstructured, does not use a defined compliance"
            " process, and compliance decisions are made primarily on an event-driven basis.",
            [],
        ),
        (
            2,
            "Check list based",
            "The checklist-based compliance assessment uses a checklist to answer a set of"
            " standard questions or to tick checkboxes.",
            [
                "Compliance assessment is performed against a defined checklist.",
                "The checklist covers the standard compliance questions the subject must answer.",
            ],
        ),
        (
            3,
            "Systematic",
            "A systematic compliance assessment follows a structured and planned approach"
            " where there is a defined process and structured documentation of compliance."
            " Generally, the process involves the identification of compliance requirements,"
            " evaluation of the compliance issues and taking measures to ensure compliance.",
            [
                "A defined compliance assessment process is followed.",
                "Compliance is recorded in structured documentation.",
                "Compliance requirements are identified systematically.",
                "Compliance issues are evaluated and measures are taken to ensure compliance.",
            ],
        ),
        (
            4,
            "Systematic and risk-driven",
            "A systematic and risk-driven compliance assessment involves a defined process"
            " for risk-driven compliance where requirements are prioritized based on their"
            " risks. This approach is supported by a systematic documentation that enables"
            " the mapping of different risks and controls to relevant compliance requirements.",
            [
                "Compliance requirements are prioritized based on their risks.",
                "Documentation maps risks and controls to the relevant compliance requirements.",
            ],
        ),
    ],
)

RISK_ASSESSMENT = _area(
    "risk_assessment",
    "Security risk assessment",
    "The overall process of risk identification, estimation and evaluation, covering"
    " sources of risk, areas of impact, and events together with their causes and"
    " potential consequences.",
    [
        (
            1,
            "Checklist",
            "Risk assessment mainly consists of answering a sequence of questions or"
            " filling in a form.",
            [],
        ),
        (
            2,
            "Qualitative",
            "Risk assessment is based on qualitative risk values. The value descriptions or"
            " distinctions are based on some quality or characteristic rather than on some"
            " quantity or measured value.",
            [
                "Risks are identified, estimated and evaluated in a dedicated assessment"
                " activity.",
                "Risk levels are expressed on a qualitative scale.",
            ],
        ),
        (
            3,
            "Quantitative",
            "Risk assessment is based on quantitative values. The values are based on some"
            " quantity or number, e.g. a measurement, rather than on some quality.",
            [
                "Risk estimation uses quantitative values.",
                "Quantitative risk values are derived from measurements or recorded data.",
            ],
        ),
        (
            4,
            "Real time",
            "Risk assessment is done in real-time based on an underlying, computerized"
            " monitoring-infrastructure.",
            [
                "A computerized monitoring infrastructure feeds the risk assessment.",
                "Risk values are updated in real time as monitoring data arrives.",
            ],
        ),
    ],
)

SECURITY_TESTING = _area(
    "security_testing",
    "Security testing",
    "Empirically checking software implementations with respect to their security"
    " properties and resistance to attack, from functional security testing to"
    " vulnerability testing.",
    [
        (
            1,
            "Unstructured",
            "Unstructured security testing is performed either by the development team or"
            " the testing team without planning or documentation. The tests are intended to"
            " be run only once, unless a defect is discovered. The testing is neither"
            " systematic nor planned. Defects found using this method may be harder to"
            " reproduce.",
            [],
        ),
        (
            2,
            "Planned",
            "Planned security testing is performed either by the development team or the"
            " testing team after a structured test plan has been elaborated. A test plan"
            " documents the scope, approach, and resources that will be used for testing.",
            [
                "A documented test plan exists.",
                "The test plan documents scope, approach, and resources.",
            ],
        ),
        (
            3,
            "Risk based",
            "Security tests are planned and executed, either by the development team or by"
            " the testing team. The planning of security testing is done on the basis of"
            " the security risk assessment using impact estimations or likelihood values to"
            " focus the testing process.",
            [
                "Security test planning is driven by the security risk assessment.",
                "Impact or likelihood values are used to focus the testing effort.",
            ],
        ),
        (
            4,
            "Continuous risk based",
            "Continuous risk based security testing is a process of continuously monitoring"
            " and testing a system with respect to potential vulnerabilities. Security risk"
            " analysis results are still used to focus the security testing and optimize"
            " resource planning. Any evolution of the system, of its environment or of the"
            " identified threats leads to updated security tests so that vulnerabilities"
            " can be detected throughout the whole life cycle of the test item.",
            [
                "The system is continuously monitored and tested for potential"
                " vulnerabilities.",
                "Risk analysis results steer the continuous testing and its resource"
                " planning.",
                "Changes to the system, its environment, or known threats trigger updated"
                " security tests.",
            ],
        ),
    ],
)

TOOLING = _area(
    "tooling",
    "Tool support and integration",
    "The degree of tool support and integration available for the other key areas,"
    " from isolated tools to central integration platforms with shared data"
    " definitions.",
    [
        (
            1,
            "None",
            "No tool support in any of the above mentioned key areas is available.",
            [],
        ),
        (
            2,
            "Stand-alone",
            "Tools are available for some of the previously mentioned key areas. However,"
            " the tools are not integrated thus they do not exchange data nor do they share"
            " the same user interface.",
            [
                "Software tools support at least one of the other key areas.",
            ],
        ),
        (
            3,
            "Partially integrated",
            "Tools are available for some of the above mentioned key areas. Tool"
            " integration is based on point-to-point coalitions between tools."
            " Point-to-point coalitions are often used in small and ad-hoc environments but"
            " have problems when it comes to more tools and larger environments as they do"
            " not scale.",
            [
                "Tools exchange data through at least point-to-point integrations.",
            ],
        ),
        (
            4,
            "Integrated",
            "Tools are available for nearly all the key areas. Tool integration is based on"
            " central integration platforms and repositories that provide a common set of"
            " interfaces and data definitions to be exchanged.",
            [
                "Tools are available for nearly all of the key areas.",
                "Tool integration uses a central platform or repository with common"
                " interfaces and data definitions.",
            ],
        ),
    ],
)

EDGES = (
    PrerequisiteEdge(
        subject=AreaLevel("compliance", 4),
        requires=AreaLevel("risk_assessment", 2),
        rationale="Prioritizing compliance requirements by risk needs at least"
        " qualitative risk values.",
    ),
    PrerequisiteEdge(
        subject=AreaLevel("risk_assessment", 4),
        requires=AreaLevel("tooling", 3),
        rationale="Real-time risk assessment needs a computerized monitoring"
        " infrastructure, which presumes at least partially integrated tooling.",
    ),
    PrerequisiteEdge(
        subject=AreaLevel("security_testing", 3),
        requires=AreaLevel("risk_assessment", 2),
        rationale="Risk based test planning draws on risk assessment results, which must"
        " be at least qualitative.",
    ),
    PrerequisiteEdge(
        subject=AreaLevel("security_testing", 4),
        requires=AreaLevel("tooling", 3),
        rationale="Continuously monitoring and testing a system is impractical without at"
        " least partially integrated tooling.",
    ),
)

SCHEME = Scheme(
    id="crstip",
    name="CRSTIP",
    version="1.0.0",
    areas=(COMPLIANCE, RISK_ASSESSMENT, SECURITY_TESTING, TOOLING),
    prerequisites=EDGES,
)


def main() -> None:
    out = pathlib.Path(__file__).resolve().parents[1] / "src/crstip/data/crstip.scheme.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(serialize_scheme(SCHEME), "utf-8")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
