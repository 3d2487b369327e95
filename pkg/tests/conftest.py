import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from efqss.field import PrimeModulus  # noqa: E402
from efqss.protocol import ProtocolConfig  # noqa: E402


@pytest.fixture
def gf23():
    return PrimeModulus(23)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def golden_config():
    return ProtocolConfig(23, 4, 6, 1, xs=range(2, 8), active_set=(1, 3, 4, 6))


GOLDEN_POLY = [[17, 5, 12, 6]]
GOLDEN_RANDOMS = {1: [0], 3: [3], 4: [16], 6: [9]}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
