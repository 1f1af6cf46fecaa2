import importlib.resources as resources

import pytest

# one-line verdicts collected by the acceptance tests, echoed after the
# run so they are visible despite output capture
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

from curvebraid.geometry import region_decomposition, trace_bplus
from curvebraid.pipeline import CurveSpec, auto_window


def fixture_path():
    return str(resources.files("curvebraid") / "fixtures" / "rudolph_8_20.json")


@pytest.fixture(scope="session")
def spec():
    return CurveSpec.load(fixture_path())


@pytest.fixture(scope="session")
def branch(spec):
    from curvebraid.geometry import branch_points

    return branch_points(spec.f, spec.cfg)


@pytest.fixture(scope="session")
def bplus(spec, branch):
    window = auto_window(spec, branch)
    return trace_bplus(spec.f, window, spec.cfg, branch=branch)


@pytest.fixture(scope="session")
def rmap(spec, bplus):
    return region_decomposition(bplus, spec.loop, f=spec.f, cfg=spec.cfg)
