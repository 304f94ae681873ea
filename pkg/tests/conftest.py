import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from lclpaths.fixtures import shipped

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def problems():
    return shipped()


@pytest.fixture(scope="session")
def fixtures_dir():
    return ROOT / "fixtures"


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
