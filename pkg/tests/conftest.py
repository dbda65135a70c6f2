import math

import pytest

from wignerbell import bell, logical_model as lm

OPTIMAL = bell.TransformationSettings.optimal()


@pytest.fixture(scope="session")
def optimal_mixtures():
    """[W11, W12, W21, W22] at the optimal settings, alpha = 2, variance 1/2."""
    return bell.transformed_mixtures(OPTIMAL, 2.0, 0.5)


@pytest.fixture(scope="session")
def w_rho0():
    return lm.to_wigner(lm.rho0(), 2.0, 0.5)


def angle_grid(n=5):
    return [k * math.pi / n for k in range(n)]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key, (ok, detail) in RESULTS.items():
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key}: {detail}")
