import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from padic_cherednik.cherednik import CherednikAlgebra, default_params  # noqa: E402
from padic_cherednik.refgroup import make_group  # noqa: E402
from padic_cherednik.scalars import Scalar  # noqa: E402

settings.register_profile(
    "repo", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

GOLDEN = Path(__file__).parent / "golden"


def algebra(family, rank=1, m=2, field_order=1, c=(Scalar(1) / 3,), t=1, omega=None):
    group = make_group(family, rank, m, field_order)
    return CherednikAlgebra(group, default_params(group, [Scalar(v) for v in c], t, omega))


@pytest.fixture(scope="session")
def z2():
    return algebra("cyclic", c=(Scalar(1) / 3,))


@pytest.fixture(scope="session")
def s3():
    return algebra("symmetric", 3, c=(Scalar(1) / 3,))


@pytest.fixture(scope="session")
def b2():
    return algebra("hyperoctahedral", 2, c=(Scalar(1) / 3, Scalar(2) / 7))


@pytest.fixture(scope="session")
def i26():
    return algebra("dihedral", 2, 6, c=(Scalar(1) / 2, Scalar(-1) / 5))


@pytest.fixture(scope="session")
def z4():
    return algebra("cyclic", 1, 4, 4, c=(Scalar(1) / 3, Scalar(1) / 2, Scalar(-2) / 5))


# -- acceptance summary ------------------------------------------------------------------

ACCEPTANCE: dict[int, tuple[str, float]] = {}
NOTES: dict[int, list[str]] = {}


@pytest.fixture
def criterion(request):
    """Notes list for one acceptance criterion; printed in the terminal summary."""
    notes = NOTES.setdefault(request.node.get_closest_marker("criterion").args[0], [])
    notes.clear()
    return notes


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        ACCEPTANCE[marker.args[0]] = ("PASS" if report.passed else "FAIL", report.duration)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        status, elapsed = ACCEPTANCE[number]
        notes = "; ".join(NOTES.get(number, []))
        terminalreporter.write_line(f"criterion {number:2d}: {status} ({elapsed:.1f} s)" + (f"  {notes}" if notes else ""))
