import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from samod.fixtures import make_fixture  # noqa: E402
from samod.lattice import generate  # noqa: E402

settings.register_profile("samod", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("samod")

SMALL_MODULES = ["BOOL", "B2", "C3", "C4", "CHAIN(4)", "NSAT(3)", "NSAT4", "ZMOD(3)",
                 "SUPERTROP(1)", "SUPERTROP(2)", "FREE(BOOL,3)", "PRODUCT(CHAIN(1),NSAT(2))",
                 "QUOT(ZMOD(4))"]


def module(fid):
    return make_fixture(fid)[1]


@pytest.fixture
def mod():
    return module


@st.composite
def modules(draw, ids=tuple(SMALL_MODULES)):
    return module(draw(st.sampled_from(ids)))


@st.composite
def submodules_of(draw, V, max_gens=2):
    gens = draw(st.lists(st.integers(0, V.size - 1), max_size=max_gens))
    return generate(V, sum(1 << g for g in set(gens)))


@st.composite
def module_with_subs(draw, k=2, ids=tuple(SMALL_MODULES)):
    V = draw(modules(ids))
    return V, [draw(submodules_of(V)) for _ in range(k)]


# --- acceptance summary: one line per criterion ------------------------------------------

_CRITERIA: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA, key=lambda n: int(n.split("_")[2])):
        title = name.split("_", 3)[3].replace("_", " ")
        terminalreporter.write_line(f"criterion {name.split('_')[2]}: {_CRITERIA[name]}  {title}")
