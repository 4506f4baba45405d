"""CRSTIP: a schema-driven maturity assessment engine for security
assessment processes.

The package models an assessment scheme (key areas with ordered levels,
yes/no indicators, and cross-area prerequisites), runs questionnaire
sessions against it, scores attained levels, reports gaps and ordered
improvement roadmaps, renders radar-chart profiles, and exposes the whole
thing through a CLI and an HTTP API.  The canonical CRSTIP scheme ships
as a bundled definition file; any scheme with the same shape works.
"""

__version__ = "0.1.0"
