import hypothesis

from qsfa.fields import HELIUM, NM_TO_OMEGA, config_for_drive

hypothesis.settings.register_profile(
    "suite",
    max_examples=50,
    deadline=None,
    derandomize=True,
)
hypothesis.settings.load_profile("suite")

import pytest  # noqa: E402


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    import sys

    mod = (sys.modules.get("test_acceptance")
           or sys.modules.get("tests.test_acceptance"))
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for name, value, requirement, ok in results:
        flag = "PASS" if ok else "FAIL"
        terminalreporter.write_line(
            f"{flag}  {name:<32} {value}  [{requirement}]")


@pytest.fixture(scope="session")
def atom():
    return HELIUM


@pytest.fixture(scope="session")
def cfg800():
    """Headline drive: 400 nm (2w of an 800 nm fundamental) at 3e14 W/cm^2."""
    return config_for_drive(NM_TO_OMEGA / 800.0, 3e14)
