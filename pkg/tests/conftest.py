import os
import sys

import pytest

from toric_k3.io import read_vertex_file
from toric_k3.polytope import IntegralPolytope

DATA = os.path.join(os.path.dirname(__file__), "data")

# worked example polytopes
EXAMPLES = {
    "prism": [(2, -1, 1), (2, -1, -1), (-1, 1, 1), (-1, 1, -1), (-1, -1, 1), (-1, -1, -1)],
    "long_edge": [(-1, 1, 0), (2, -1, 0), (-1, -1, -6), (-1, -1, 6)],
    "bipyramid": [(2, -1, 0), (-1, 1, 0), (-1, -1, 0), (0, 0, 1), (0, 0, -1)],
    "plane_bundle": [(1, 0, 0), (0, 1, 0), (-1, -1, 0), (0, 0, 1), (0, 0, -1)],
    "tetra": [(2, -1, 0), (-1, 1, 0), (-1, -1, 1), (-1, -1, -1)],
    "skew_tetra": [(-1, 1, 0), (-1, -1, 0), (1, -1, 2), (3, -1, -2)],
}


def example(key: str) -> IntegralPolytope:
    return IntegralPolytope(EXAMPLES[key])


def data_path(name: str) -> str:
    return os.path.join(DATA, name)


@pytest.fixture(scope="session")
def random_reflexive():
    return [IntegralPolytope(r.vertices) for r in read_vertex_file(data_path("random_reflexive.txt"))]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
