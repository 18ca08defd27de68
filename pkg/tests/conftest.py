import numpy as np
import pytest

from sqtransfer.hilbert import DensityMatrix, enumerate_basis
from sqtransfer.liouvillian import SystemParams
from sqtransfer.reservoir import SqueezingParams, max_correlation

N0 = 0.125
M0 = max_correlation(N0)  # 0.375


@pytest.fixture
def basis2():
    return enumerate_basis(2)


@pytest.fixture
def sym_params():
    return SystemParams.symmetric(N0, M0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_density_matrix(basis, rng, rank=None):
    d = basis.dim
    rank = rank or d
    x = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = x @ x.conj().T
    return DensityMatrix(rho / np.trace(rho).real, basis)


def random_params(rng, complex_m=False):
    k1, k2 = rng.uniform(0.3, 2.0, size=2)
    na, nb = rng.uniform(0.0, 1.0, size=2)
    bound = np.sqrt(na * nb + min(na, nb))
    m = bound * rng.uniform(0, 1)
    if complex_m:
        m = m * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return SystemParams(
        k1, k2, SqueezingParams(na, m, N_b=nb),
        kappa12=np.sqrt(k1 * k2) * rng.uniform(0.5, 1.0),
        eta=rng.uniform(0.5, 1.0),
    )


# filled by test_acceptance, echoed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":").rstrip("ab"))):
            terminalreporter.write_line(line)
