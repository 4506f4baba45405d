"""Freeze real API responses as fixtures for the webapp tests.

The webapp never computes levels itself, so its tests mock fetch with
responses produced by the actual service; regenerate after any change to
the API's serialization:

    python3 scripts/gen_frontend_fixtures.py
"""

from __future__ import annotations

import pathlib
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient

from crstip.api import create_app
from crstip.parser import load_bundled_scheme

FIXTURES = ROOT / "frontend" / "tests" / "fixtures"

BEFORE_SCRIPT = ROOT / "tests" / "golden" / "medipedia-before.answers"


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    scheme = load_bundled_scheme()
    with tempfile.TemporaryDirectory() as tmp:
        app = create_app(pathlib.Path(tmp) / "data")
        with TestClient(app) as client:
            save = lambda name, response: (FIXTURES / name).write_bytes(response.content)

            save("scheme.json", client.get("/api/schemes/crstip"))

            created = client.post(
                "/api/sessions",
                json={
                    "scheme_id": "crstip",
                    "subject": {"name": "Medipedia", "kind": "system", "notes": ""},
                },
            )
            save("session-new.json", created)
            session_id = created.json()["id"]

            save("profile-empty.json", client.get(f"/api/sessions/{session_id}/profile"))
            save(
                "gaps-empty-st3.json",
                client.post(
                    f"/api/sessions/{session_id}/gaps",
                    json={"targets": {"security_testing": 3}},
                ),
            )
            save(
                "roadmap-empty-st3.json",
                client.post(
                    f"/api/sessions/{session_id}/roadmap",
                    json={"targets": {"security_testing": 3}},
                ),
            )

            tokens = [
                line.split("#", 1)[0].strip()
                for line in BEFORE_SCRIPT.read_text("utf-8").splitlines()
                if line.split("#", 1)[0].strip()
            ]
            values = {"y": "yes", "n": "no", "u": "unknown"}
            for ind, token in zip(scheme.indicators(), tokens):
                client.put(
                    f"/api/sessions/{session_id}/answers/{ind.id}",
                    json={"value": values[token]},
                )
            save("profile-level2.json", client.get(f"/api/sessions/{session_id}/profile"))
            save("session-level2.json", client.get(f"/api/sessions/{session_id}"))

            save(
                "radar-level2.svg",
                client.post(
                    "/api/charts/radar",
                    json={
                        "spec": {
                            "axes": [area.name for area in scheme.areas],
                            "max_rank": 4,
                            "series": [{"name": "Medipedia", "values": [2, 2, 2, 2]}],
                        }
                    },
                ),
            )

    for path in sorted(FIXTURES.iterdir()):
        print(f"wrote {path.relative_to(ROOT)}")


if __name__ == "__main__":
    main()
