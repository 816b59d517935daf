import functools
import sys

import pytest

from kloomoments.finite_field import build_field
from kloomoments.kloo_codes import CodeSpec, weight_distribution


@functools.lru_cache(maxsize=None)
def field(r):
    return build_field(r)


@functools.lru_cache(maxsize=None)
def full_distribution(r, kind, param):
    """Full DP weight distribution, shared across test modules."""
    spec = CodeSpec(kind, param, field(r))
    return weight_distribution(spec.counts())


@pytest.fixture(scope="session")
def F8():
    return field(3)


@pytest.fixture(scope="session")
def F16():
    return field(4)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        ok, line = results[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key:>2}: {line}")
