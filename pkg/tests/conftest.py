from __future__ import annotations

import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from strictify.oracle import TermSampler, sampling_signature
from strictify.signature import TRICATEGORY, parse_signature

settings.register_profile("kernel", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("kernel")

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def load_sig(rel: str):
    return parse_signature((FIXTURES / rel).read_text(encoding="utf-8"))


def read_fixture(rel: str) -> str:
    return (FIXTURES / rel).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def bisig():
    return sampling_signature()


@pytest.fixture(scope="session")
def trisig():
    return sampling_signature(TRICATEGORY)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def sampler(sig, seed: int, max_nodes: int = 7) -> TermSampler:
    return TermSampler(sig, random.Random(seed), max_nodes)


# Acceptance reporting -----------------------------------------------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    number, title = marker.args
    if report.failed or report.when == "call":
        previous = _CRITERIA.get(number, (title, "PASS"))[1]
        verdict = "PASS" if report.passed and previous == "PASS" else "FAIL"
        _CRITERIA[number] = (title, verdict)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, verdict = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2}: {verdict}  {title}")
