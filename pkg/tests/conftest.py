"""Shared test helpers: independent oracles kept out of the package.

The density-matrix channel and the matrix-exponential gate constructions
here are deliberately separate implementations from the package's
statevector/closed-form paths, so every comparison is a genuine dual-route
check.
"""
import numpy as np
import pytest
from scipy.linalg import expm

from driftcal.simcore import pauli_matrix


def expm_gate(generator: np.ndarray) -> np.ndarray:
    """Matrix-exponential gate oracle: exp(i * generator)."""
    return expm(1j * generator)


def density_from_state(state: np.ndarray) -> np.ndarray:
    return np.outer(state, state.conj())


def depolarize_density(rho: np.ndarray, p: float, targets: list[int], n: int) -> np.ndarray:
    """Exact depolarizing channel on ``targets`` of an n-qubit density matrix."""
    k = len(targets)
    twirl = np.zeros_like(rho)
    letters = "IXYZ"
    for which in range(4**k):
        label = ["I"] * n
        for j, t in enumerate(targets):
            label[t] = letters[(which >> (2 * (k - 1 - j))) & 3]
        pmat = pauli_matrix("".join(label))
        twirl += pmat @ rho @ pmat.conj().T
    twirl /= 4**k
    return (1.0 - p) * rho + p * twirl


def unitary_density(rho: np.ndarray, u: np.ndarray, targets: list[int], n: int) -> np.ndarray:
    full = embed_unitary(u, targets, n)
    return full @ rho @ full.conj().T


def embed_unitary(u: np.ndarray, targets: list[int], n: int) -> np.ndarray:
    """Dense n-qubit embedding of ``u`` acting on ``targets``."""
    dim = 2**n
    full = np.zeros((dim, dim), dtype=complex)
    k = len(targets)
    rest = [q for q in range(n) if q not in targets]
    for col in range(dim):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        tidx = sum(bits[t] << (k - 1 - j) for j, t in enumerate(targets))
        for row_t in range(2**k):
            amp = u[row_t, tidx]
            if amp == 0:
                continue
            new_bits = list(bits)
            for j, t in enumerate(targets):
                new_bits[t] = (row_t >> (k - 1 - j)) & 1
            row = sum(b << (n - 1 - q) for q, b in enumerate(new_bits))
            full[row, col] += amp
    return full


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
