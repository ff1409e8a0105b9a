import numpy as np
import pytest

from telegraph_distance import DistancePairParams, SimConfig, simulate_distance

TABLE_PARAMS = dict(lambda1=2.0, lambda2=1.0, c1=4.0, c2=2.0)
T_TABLE = 3.0


@pytest.fixture(scope="session")
def table_pair():
    return DistancePairParams.from_values(**TABLE_PARAMS)


@pytest.fixture(scope="session")
def table_pairs_1e7(table_pair):
    """Ten million simulated pairs at the table parameters."""
    return simulate_distance(SimConfig(20261014, 10**7, table_pair, T_TABLE), workers=4)


@pytest.fixture(scope="session")
def equal_speed_pairs_1e7():
    d = DistancePairParams.from_values(1.0, 1.0, 1.0, 1.0)
    return d, simulate_distance(SimConfig(77, 10**7, d, 1.0), workers=4)


def standard_error(p, n):
    return float(np.sqrt(p * (1 - p) / n))


ACCEPTANCE_LINES = {}


def record_acceptance(number, ok, text):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {text}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
