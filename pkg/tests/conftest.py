import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def s4():
    from ezdops import reference as ref

    return ref.rings()


@pytest.fixture(scope="session")
def s4_complex(s4):
    from ezdops import reference as ref

    return ref.complex_over(s4[1])


@pytest.fixture(scope="session")
def s4_complex4(s4_complex):
    from ezdops.resolution import extend_resolution

    return extend_resolution(s4_complex, 1, 9)


@pytest.fixture(scope="session")
def s4_bundle(s4, s4_complex4):
    from ezdops import reference as ref
    from ezdops.operators import operator_pipeline

    S, R = s4
    return operator_pipeline(s4_complex4, S, ref.F_TEXT, ref.G_TEXT, [("t", "t"), ("y^2", "y^2"), ("w^2", "w^2")])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
