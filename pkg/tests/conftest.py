import numpy as np
import pytest


_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_matrix(rng, m, n, rank=None, complex_=False):
    """Random ``m x n`` matrix of the requested rank (generic otherwise)."""
    k = min(m, n) if rank is None else rank
    if k == 0:
        return np.zeros((m, n), dtype=complex if complex_ else float)

    def g(*shape):
        a = rng.standard_normal(shape)
        if complex_:
            a = a + 1j * rng.standard_normal(shape)
        return a

    return g(m, k) @ g(k, n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240321)
