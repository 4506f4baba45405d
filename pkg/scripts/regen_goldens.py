"""Regenerate the committed golden outputs for the Medipedia fixture flow.

Run from the repo root after an intentional change to output formats:

    python3 scripts/regen_goldens.py

The goldens freeze the scripted CLI flow (assess -> report -> roadmap ->
render) byte-for-byte; tests compare against them exactly, so regenerate
only when the change in output is deliberate and reviewed.
"""

from __future__ import annotations

import pathlib
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from click.testing import CliRunner

from crstip.cli import main

GOLDEN = ROOT / "tests" / "golden"

# Answer scripts walk indicators in scheme order: compliance (8),
# risk_assessment (6), security_testing (7), tooling (4).
BEFORE_ANSWERS = """\
# Medipedia baseline: checklist compliance, qualitative risk assessment,
# planned security testing, stand-alone tools.
y
y
n
n
n
n
n
n
y
y
n
n
n
n
y
y
n
n
n
n
n
y
n
n
n
"""

AFTER_ANSWERS = """\
# Medipedia with the planned improvements in place: risk-driven compliance,
# quantitative risk assessment, continuous risk based testing, partially
# integrated tooling.
y
y
y
y
y
y
y
y
y
y
y
y
n
n
y
y
y
y
y
y
y
y
y
n
n
"""


def run(runner: CliRunner, args: list[str]) -> str:
    result = runner.invoke(main, args)
    if result.exit_code != 0:
        raise SystemExit(f"command {args} failed:\n{result.output}\n{result.stderr}")
    return result.output


def main_() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    (GOLDEN / "medipedia-before.answers").write_text(BEFORE_ANSWERS, "utf-8")
    (GOLDEN / "medipedia-after.answers").write_text(AFTER_ANSWERS, "utf-8")

    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmp:
        work = pathlib.Path(tmp)
        for tag in ("before", "after"):
            run(
                runner,
                [
                    "assess", "--subject", "Medipedia", "--kind", "system",
                    "--answers", str(GOLDEN / f"medipedia-{tag}.answers"),
                    "--out", str(work / f"{tag}.session.json"),
                ],
            )
            report_text = run(
                runner,
                [
                    "report", str(work / f"{tag}.session.json"),
                    "--out", str(work / f"medipedia-{tag}.profile.json"),
                ],
            )
            if tag == "before":
                (GOLDEN / "medipedia-report.txt").write_text(report_text, "utf-8")
                report_json = run(
                    runner, ["report", str(work / "before.session.json"), "--json"]
                )
                (GOLDEN / "medipedia-report.json").write_text(report_json, "utf-8")
            (GOLDEN / f"medipedia-{tag}.profile.json").write_text(
                (work / f"medipedia-{tag}.profile.json").read_text("utf-8"), "utf-8"
            )

        roadmap_text = run(
            runner, ["roadmap", str(work / "before.session.json"), "--target", "all=4"]
        )
        (GOLDEN / "medipedia-roadmap.txt").write_text(roadmap_text, "utf-8")
        roadmap_json = run(
            runner,
            ["roadmap", str(work / "before.session.json"), "--target", "all=4", "--json"],
        )
        (GOLDEN / "medipedia-roadmap.json").write_text(roadmap_json, "utf-8")

        svg = run(
            runner,
            [
                "render",
                str(work / "medipedia-before.profile.json"),
                str(work / "medipedia-after.profile.json"),
            ],
        )
        (GOLDEN / "medipedia-radar.svg").write_text(svg, "utf-8")

    for path in sorted(GOLDEN.iterdir()):
        print(f"wrote {path.relative_to(ROOT)}")


if __name__ == "__main__":
    main_()
