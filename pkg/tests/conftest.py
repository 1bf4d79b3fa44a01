import json
from functools import lru_cache
from pathlib import Path

import pytest

from polysparse.builtin_meshes import BUILTIN_IDS, builtin
from polysparse.topology_stats import classify

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


@lru_cache(maxsize=None)
def derived(mesh_id):
    return classify(builtin(mesh_id))


@pytest.fixture(scope="session")
def reference():
    return json.loads((DATA / "reference_tables.json").read_text())


@pytest.fixture(scope="session")
def derived_stats():
    return {m: derived(m) for m in BUILTIN_IDS}


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
