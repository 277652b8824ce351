import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tropcurve import corpus  # noqa: E402


@pytest.fixture
def seg4():
    return corpus.seg4()


@pytest.fixture
def loop4():
    return corpus.loop4()


@pytest.fixture
def theta():
    return corpus.theta()


@pytest.fixture
def seg4_inf():
    return corpus.seg4_infseg()


@pytest.fixture(params=corpus.METRIC_CORPUS)
def metric_curve(request):
    return corpus.get(request.param)


@pytest.fixture(params=list(corpus.CORPUS))
def any_curve(request):
    return corpus.get(request.param)


# one line per acceptance criterion, repeated at the end of the run
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
