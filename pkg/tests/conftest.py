"""Shared helpers: dense-matrix oracles and random problem instances.

The dense oracles are deliberately independent of the package's
state-vector engine: operators are built as explicit Kronecker products
(character i of a string acting on qubit i, qubit 0 = least-significant
bit) and evolved by plain matrix algebra.
"""

import numpy as np
import pytest

from vqa_lab import AnsatzSpec, Hamiltonian, RandomHamSpec, gen_random_hamiltonian

PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_pauli(factors: str) -> np.ndarray:
    """Kronecker-product matrix with factor i on qubit i (bit i)."""
    mat = np.array([[1.0]], dtype=complex)
    for ch in factors:
        mat = np.kron(PAULI_MATS[ch], mat)
    return mat


def dense_hamiltonian(h: Hamiltonian) -> np.ndarray:
    dim = 1 << h.n
    mat = np.zeros((dim, dim), dtype=complex)
    for term in h:
        mat += term.coefficient * dense_pauli(term.string.factors)
    return mat


def random_instance(seed: int, n: int = 3, layers: int = 2, j: int = 5):
    """A generic (Hamiltonian, ansatz, theta) triple for property tests."""
    h = gen_random_hamiltonian(RandomHamSpec(n=n, j=j, mu=0.0, sigma=1.0, seed=seed))
    spec = AnsatzSpec(n=n, layers=layers)
    rng = np.random.default_rng(seed + 10_000)
    theta = rng.uniform(0.0, 2.0 * np.pi, spec.param_count)
    return h, spec, theta


def random_state(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return amps / np.linalg.norm(amps)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
