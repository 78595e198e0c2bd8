import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "distcc",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("distcc")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_task(rng, N=None, M=None, D=None, sparsity=0.5):
    """Small random task with a nonzero, normalized coefficient tensor."""
    from distcc.tasks import make_task

    N = N or int(rng.integers(2, 5))
    M = M or int(rng.integers(1, 4))
    D = D or int(rng.integers(2, 4))
    c = rng.random((N, M, D)) * (rng.random((N, M, D)) > sparsity)
    c[0, 0, 0] += 0.1
    return make_task(N, M, D, c, renormalize=True, label="random")


def random_density(rng, d, rank=None):
    rank = rank or d
    G = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
