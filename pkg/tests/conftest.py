import numpy as np
import pytest


def random_symmetric(seed, p):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((p, p))
    return (g + g.T) / 2


def random_frame(rng, p, d):
    q, r = np.linalg.qr(rng.standard_normal((p, p)))
    return (q * np.sign(np.diag(r)))[:, :d]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
