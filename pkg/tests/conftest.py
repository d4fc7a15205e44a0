import sys

import pytest

from matroid_mso import oracle
from matroid_mso.logic.evaluator import run_deep


def deep(fn, *args, **kwargs):
    """Run on a large-stack thread; lifted formulas nest deeply."""
    return run_deep(fn, *args, **kwargs)


@pytest.fixture(scope="session")
def corpus6():
    return [e for e in oracle.corpus_matroids(6)]


@pytest.fixture(scope="session")
def labeled4():
    return [m for n in range(5) for m in oracle.enumerate_matroids(n)]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
