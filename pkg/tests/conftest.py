import numpy as np
import pytest

from mirrorew import bell_encode, catalog


@pytest.fixture(scope="session")
def w12():
    return catalog("W_gamma_12")


@pytest.fixture(scope="session")
def w34():
    return catalog("W_gamma_34")


@pytest.fixture(scope="session")
def rho_gamma():
    return catalog("rho_gamma")


@pytest.fixture(scope="session")
def rho_gamma_c():
    return catalog("rho_gamma_c")


@pytest.fixture(scope="session")
def d5_ops():
    """Dense operators for the five-level witness/state families."""
    names = ["W1_d5", "W2_d5", "W3_d5", "W4_d5",
             "rho1_d5", "rho2_d5", "rho3_d5_corrected", "rho4_d5"]
    return {n: bell_encode(catalog(n)) for n in names}


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    h = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (h + h.conj().T) / 2


def random_density(rng: np.random.Generator, n: int) -> np.ndarray:
    k = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = k @ k.conj().T
    return rho / np.trace(rho).real
