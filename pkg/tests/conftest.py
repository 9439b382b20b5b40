import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# one line per acceptance criterion at the end of the run

_ACCEPTANCE: dict[str, list[str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1].split("[")[0].removeprefix("test_")
        _ACCEPTANCE.setdefault(name, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcomes in _ACCEPTANCE.items():
        verdict = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        label = name.replace("_", " ", 2).replace("_", "-")
        terminalreporter.write_line(f"{verdict}  {label}  ({len(outcomes)} case(s))")


@pytest.fixture(scope="session")
def depth8_curve():
    from carnotlip.cantor import build_curve

    return build_curve(8)
