import sys

import numpy as np
import pytest

from marginalscope import qstate


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def ghz():
    return qstate.ghz_state()


@pytest.fixture
def w():
    return qstate.w_state(3)


@pytest.fixture
def sep():
    return qstate.product_state(3)


def brute_force_marginal(amps, qubit, n):
    """Partial trace by summing over basis bitstrings; qubit is 1-based, MSB first."""
    rho = np.zeros((2, 2), dtype=complex)
    shift = n - qubit
    for k in range(2**n):
        for l in range(2**n):
            rest_k = k & ~(1 << shift)
            rest_l = l & ~(1 << shift)
            if rest_k == rest_l:
                rho[(k >> shift) & 1, (l >> shift) & 1] += amps[k] * np.conj(amps[l])
    return rho


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.LINES):
        terminalreporter.write_line(mod.LINES[n])
