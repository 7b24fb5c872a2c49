import os
from pathlib import Path

import pytest
from hypothesis import settings

from sasakit import build_cone, load_cone, make_diagram

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).resolve().parent.parent / "data"

NORMALS = {
    "c3": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    "conifold": [[1, 0, 0], [1, 1, 0], [1, 1, 1], [1, 0, 1]],
    "dp1": [[1, 0, 0], [1, 0, 1], [1, 1, 2], [1, 1, 0]],
    "dp2": [[1, 0, 0], [1, 0, 1], [1, 1, 2], [1, 2, 1], [1, 1, 0]],
}

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def cones():
    return {k: build_cone(make_diagram(k, v)) for k, v in NORMALS.items()}


@pytest.fixture(scope="session")
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
