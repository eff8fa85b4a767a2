import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import criteria  # noqa: E402
from sigpat.dataset import BinaryDataset  # noqa: E402

DEMO = Path(__file__).parents[1] / "src" / "sigpat" / "data" / "demo.dat"


def pytest_terminal_summary(terminalreporter):
    if not criteria.results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(criteria.results):
        status, title, detail = criteria.results[number]
        terminalreporter.write_line(f"{status}  [{number}] {title}: {detail}")


@pytest.fixture
def demo_path():
    return DEMO


@pytest.fixture
def small_dataset():
    return BinaryDataset([[0, 1, 2], [0, 1], [0, 1, 3], [2, 3], [1, 2], [0, 1, 2, 3]])
