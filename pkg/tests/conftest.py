import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci",
    max_examples=300,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("dev", max_examples=60, deadline=None)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))


# Collected acceptance-criterion verdicts, echoed in the terminal summary
# so they are visible even with output capture on.
_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    def log(num: int, label: str, status: str, detail: str) -> None:
        line = f"ACCEPTANCE {num} [{label}]: {status} ({detail})"
        _acceptance_lines.append(line)
        print(line)

    return log


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
