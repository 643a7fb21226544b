"""Minimal statevector kernel: unitaries, stochastic Pauli noise, measurement.

Conventions, fixed once here and relied on everywhere else:

- A state on ``n`` qubits is a complex vector of length ``2**n``.  Basis
  index ``i`` corresponds to the bitstring ``format(i, f"0{n}b")`` with
  qubit 0 leftmost (most significant).
- Measured bit values map to sigma-z eigenvalues as bit 0 <-> z = +1,
  bit 1 <-> z = -1.
- Depolarization is simulated by stochastic unraveling: with probability
  ``p`` a uniformly random Pauli (identity included) is applied to the
  target qubits.  Averaged over shots this reproduces the channel
  rho -> p * I/d + (1 - p) * rho exactly on the targets; a single shot
  remains a pure state.  The density-matrix form exists only as a test
  oracle.
- Global phase is ignored; state equality is tested via |<psi|phi>|.

All operations are pure functions of (state, rng); callers own their states
and rng streams, so trajectories can run fully in parallel.
"""
from __future__ import annotations

import numpy as np
from numpy.random import Generator

NORM_ATOL = 1e-12

_PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(label: str) -> np.ndarray:
    """Dense matrix of a Pauli string, qubit 0 = leftmost letter."""
    if not label or any(c not in _PAULI_1Q for c in label):
        raise ValueError(f"invalid Pauli label {label!r}")
    out = _PAULI_1Q[label[0]]
    for c in label[1:]:
        out = np.kron(out, _PAULI_1Q[c])
    return out


def zero_state(n_qubits: int) -> np.ndarray:
    """|0...0> on ``n_qubits``."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be positive")
    state = np.zeros(2**n_qubits, dtype=complex)
    state[0] = 1.0
    return state


def num_qubits(state: np.ndarray) -> int:
    n = int(np.log2(len(state)))
    if 2**n != len(state):
        raise ValueError("state length is not a power of two")
    return n


def _check_normalized(state: np.ndarray) -> None:
    norm2 = float(np.vdot(state, state).real)
    if abs(norm2 - 1.0) > 1e-9:
        raise ValueError(f"state is not normalized: |psi|^2 = {norm2}")


def apply_unitary(state: np.ndarray, u: np.ndarray, targets: list[int] | tuple[int, ...]) -> np.ndarray:
    """Apply ``u`` to ``targets`` (identity elsewhere); returns a new state."""
    n = num_qubits(state)
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise ValueError("targets must be distinct")
    if any(t < 0 or t >= n for t in targets):
        raise IndexError(f"target out of range for {n} qubits: {targets}")
    k = len(targets)
    if u.shape != (2**k, 2**k):
        raise ValueError(f"unitary dim {u.shape} does not match {k} targets")
    psi = state.reshape([2] * n)
    rest = [ax for ax in range(n) if ax not in targets]
    psi = psi.transpose(targets + rest).reshape(2**k, -1)
    psi = u @ psi
    psi = psi.reshape([2] * n)
    inv = np.argsort(targets + rest)
    return psi.transpose(inv).reshape(-1)


def apply_pauli(state: np.ndarray, label: str, targets: list[int] | tuple[int, ...] | None = None) -> np.ndarray:
    """Apply a Pauli string; ``targets`` defaults to all qubits in order."""
    n = num_qubits(state)
    if targets is None:
        targets = list(range(n))
    if len(label) != len(targets):
        raise ValueError("label length must match target count")
    out = state
    for c, t in zip(label, targets):
        if c != "I":
            out = apply_unitary(out, _PAULI_1Q[c], [t])
    return out


def apply_depolarizing(state: np.ndarray, p: float, targets: list[int] | tuple[int, ...], rng: Generator) -> np.ndarray:
    """Stochastic unraveling of the depolarizing channel on ``targets``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    if p == 0.0 or rng.random() >= p:
        return state
    k = len(targets)
    which = int(rng.integers(4**k))
    if which == 0:
        return state
    letters = "IXYZ"
    label = "".join(letters[(which >> (2 * (k - 1 - j))) & 3] for j in range(k))
    return apply_pauli(state, label, targets)


def outcome_distribution(state: np.ndarray) -> np.ndarray:
    """Exact Born probabilities over all ``2**n`` outcomes."""
    _check_normalized(state)
    probs = np.abs(state) ** 2
    return probs / probs.sum()


def measure_computational(state: np.ndarray, rng: Generator) -> str:
    """Sample one terminal computational-basis measurement outcome."""
    probs = outcome_distribution(state)
    idx = int(np.searchsorted(np.cumsum(probs), rng.random(), side="right"))
    idx = min(idx, len(probs) - 1)
    return format(idx, f"0{num_qubits(state)}b")


def bit_to_z(bit: int | str) -> int:
    """Measured bit -> sigma-z eigenvalue (0 -> +1, 1 -> -1)."""
    return 1 - 2 * int(bit)


def overlap(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|, the global-phase-insensitive state overlap."""
    return float(abs(np.vdot(a, b)))
