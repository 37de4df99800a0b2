import numpy as np
import pytest

from hcprony.oracle import ExponentialSumSpec, make_oracle_from_spec
from hcprony.instances import hyperbola_spec


@pytest.fixture
def two_term_spec():
    # f(a) = 1 + 2^(a_1): points (1,1) and (2,1)
    return ExponentialSumSpec.from_points([(1, 1), (2, 1)], [1, 1])


@pytest.fixture
def two_term_oracle(two_term_spec):
    return make_oracle_from_spec(two_term_spec, "exact")


@pytest.fixture
def hyperbola():
    return hyperbola_spec(7)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def report():
    """Record the one-line verdict of an acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
