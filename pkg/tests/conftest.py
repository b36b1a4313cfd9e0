import pytest
from hypothesis import settings

from inflecta.solver import inflection_points, random_smooth_curve

settings.register_profile("inflecta", deadline=None, derandomize=True, max_examples=40)
settings.load_profile("inflecta")

# lines collected by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def cubic_base():
    curve = random_smooth_curve(3, 1)
    return curve, inflection_points(curve, seed=1)


@pytest.fixture(scope="session")
def quartic_base():
    curve = random_smooth_curve(4, 1)
    return curve, inflection_points(curve, seed=1)
