import numpy as np
import pytest

from cpboot.limitlaw import limit_spec_from_model
from cpboot.model import study_models, variance_table_model

# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s.split()[0][1:])):
        passed, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")


@pytest.fixture(scope="session")
def models():
    return study_models()


@pytest.fixture(scope="session")
def table_model():
    return variance_table_model()


@pytest.fixture(scope="session")
def table_spec(table_model):
    return limit_spec_from_model(table_model)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
