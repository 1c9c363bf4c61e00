import numpy as np
import pytest

from disassort import DegreeSequence, build

# criterion number -> (passed, detail), filled by the acceptance module
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def worked():
    ds = DegreeSequence([1, 2, 2, 3])
    return ds, build(ds, seed=0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
