import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

ROOT = HERE.parent
MODELS = ROOT / "models"
GOLDEN = HERE / "golden"

# filled in by test_acceptance.py: criterion number -> (passed, line)
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def models() -> Path:
    return MODELS


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k][1])
