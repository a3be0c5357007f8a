import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from wrl.info import bsc_pair  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def degraded_pair():
    return bsc_pair(0.1, 0.3)


BSC_PAIR_TOML = """\
name = "BSC(0.1) main, BSC(0.3) eavesdropper"
nx = 2
ny = 2
nz = 2
kernel = [
  [0.63, 0.27, 0.07, 0.03],
  [0.03, 0.07, 0.27, 0.63],
]
"""


@pytest.fixture
def bsc_pair_file(tmp_path):
    path = tmp_path / "bsc_pair.toml"
    path.write_text(BSC_PAIR_TOML)
    return path
