import random
from pathlib import Path

import pytest

from harmonic_barcode.filtration import parse_filtration, random_filtration

FIXTURES = Path(__file__).parent / "fixtures"

# Random instances shared by the fuzz-style tests: m <= 40, dimension <= 3.
FUZZ_SEEDS = range(200)
FUZZ_MAX_M = 40
FUZZ_MAX_DIM = 3

_SUMMARY_KEY = pytest.StashKey[list]()


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load_fixture(name: str):
    return parse_filtration(fixture_path(name).read_text())


def fuzz_instance(seed: int):
    return random_filtration(random.Random(seed), FUZZ_MAX_M, FUZZ_MAX_DIM)


FILTRATION_FIXTURES = ["triangle.txt", "two_cycles.txt", "single_vertex.txt", "empty.txt",
                       "lower_star_triangle.txt", "tetra_shell.txt"]


@pytest.fixture
def triangle():
    return load_fixture("triangle.txt")


@pytest.fixture
def two_cycles():
    return load_fixture("two_cycles.txt")


def pytest_configure(config):
    config.stash[_SUMMARY_KEY] = []


@pytest.fixture
def report_line(request):
    """Collects one status line per acceptance criterion; they are printed
    together at the end of the run."""
    lines = request.config.stash[_SUMMARY_KEY]

    def emit(line: str) -> None:
        print(line)
        lines.append(line)
    return emit


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_SUMMARY_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
