"""Shared random fixtures and brute-force oracles for tests."""

import numpy as np


def random_state_vector(rng: np.random.Generator, num_qubits: int) -> np.ndarray:
    """Random normalized complex vector."""
    vector = rng.normal(size=2**num_qubits) + 1j * rng.normal(size=2**num_qubits)
    return vector / np.linalg.norm(vector)


def random_density_entries(rng: np.random.Generator, num_qubits: int) -> np.ndarray:
    """Random full-rank density matrix."""
    dim = 2**num_qubits
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)
