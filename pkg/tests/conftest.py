import numpy as np
import pytest
from hypothesis import settings

from ltetm.degree_dist import from_pairs, reference_distribution
from ltetm.graph import from_neighbors

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture
def ref_dist():
    return reference_distribution()


@pytest.fixture
def toy_graph():
    # 8 data bits, 12 coded bits, degrees 1..4
    rng = np.random.default_rng(7)
    neighbors = [rng.choice(8, size=d, replace=False) for d in (1, 2, 3, 4, 2, 1, 3, 2, 4, 1, 2, 3)]
    return from_neighbors(8, neighbors)


@pytest.fixture
def single_atom():
    return from_pairs([(3, 1.0)])


def pytest_terminal_summary(terminalreporter):
    from tests import report

    if report.LINES:
        terminalreporter.section("acceptance criteria")
        for line in report.LINES:
            terminalreporter.write_line(line)
