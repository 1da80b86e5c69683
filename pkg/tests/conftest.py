import numpy as np
import pytest

from levyhunt import LevyMeasure, validate_triplet


def triplet(a=0.0, q=0.0, *comps):
    return validate_triplet([float(a)], [[float(q)]], LevyMeasure(list(comps)))


@pytest.fixture
def make_triplet():
    return triplet


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
