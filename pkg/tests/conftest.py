import pytest

from stabpar import kernels
from stabpar.parse import parse_matrix, parse_problem
from stabpar.polyring import PolyRing


@pytest.fixture
def Rz():
    return PolyRing("z")


@pytest.fixture
def R2():
    return PolyRing("z1 z2")


@pytest.fixture
def R3():
    return PolyRing("x y z")


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    prev = kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(prev)


def plant(text):
    """Plant from problem-file text, e.g. ``plant("ring z; plant [1/(1-2*z)]")``."""
    return parse_problem(text).to_plant()


def mat(text, ring):
    return parse_matrix(text, ring)


# -- acceptance summary: one line per criterion -------------------------------
_criteria = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criteria.setdefault(m.args[0], {"title": m.args[1], "outcomes": []})


def pytest_runtest_logreport(report):
    if report.when != "call" and report.passed:
        return
    for key, info in _criteria.items():
        if report.nodeid.split("::")[-1].startswith(f"test_criterion_{key}_"):
            info["outcomes"].append(report.passed or report.skipped)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria (exact arithmetic, tolerance 0)")
    for key in sorted(_criteria):
        info = _criteria[key]
        outs = info["outcomes"]
        verdict = "PASS" if outs and all(outs) else ("NOT RUN" if not outs else "FAIL")
        tr.write_line(f"criterion {key}: {verdict}  {info['title']}")
