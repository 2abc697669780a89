"""Layered hardware-efficient variational circuit and its energy cost.

One layer = a parameterized single-qubit rotation on every qubit
followed by the entangling chain CNOT(0,1) CNOT(1,2) ... CNOT(n-2,n-1).
With ``layers = L`` the circuit uses k = (2n-1)*L gates and carries
d = n*L angles.

Parameter vectors are flat numpy arrays; the angle of layer ``j``
(0-based) on qubit ``i`` sits at index ``j*n + i``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import Hamiltonian
from .statevector import StateVector, init_state


@dataclass(frozen=True)
class AnsatzSpec:
    """Circuit shape: qubit count, layer count, rotation axis."""

    n: int
    layers: int
    rotation_axis: str = "Y"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.n}")
        if self.layers < 1:
            raise ValueError(f"layer count must be >= 1, got {self.layers}")
        if self.rotation_axis not in ("X", "Y", "Z"):
            raise ValueError(f"rotation axis must be X, Y or Z, got {self.rotation_axis!r}")

    @property
    def gate_count(self) -> int:
        """Total gates k = (2n - 1) * L; n rotations and n-1 CNOTs per layer."""
        return (2 * self.n - 1) * self.layers

    @property
    def param_count(self) -> int:
        return self.n * self.layers


def apply_ansatz(
    state: StateVector,
    spec: AnsatzSpec,
    theta: np.ndarray,
    dagger: bool = False,
) -> StateVector:
    """Apply the layered circuit U(theta), or its exact inverse."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (spec.param_count,):
        raise ValueError(
            f"theta must have shape ({spec.param_count},), got {theta.shape}"
        )
    if state.n_system < spec.n:
        raise ValueError(
            f"state has {state.n_system} system qubits, ansatz needs {spec.n}"
        )
    n = spec.n
    axis = spec.rotation_axis
    if not dagger:
        for layer in range(spec.layers):
            base = layer * n
            for q in range(n):
                state.apply_rotation(q, axis, theta[base + q])
            for q in range(n - 1):
                state.apply_cnot(q, q + 1)
    else:
        for layer in reversed(range(spec.layers)):
            base = layer * n
            for q in reversed(range(n - 1)):
                state.apply_cnot(q, q + 1)
            for q in reversed(range(n)):
                state.apply_rotation(q, axis, -theta[base + q])
    return state


def prepare_state(
    spec: AnsatzSpec, theta: np.ndarray, with_detector: bool = False
) -> StateVector:
    """U(theta) applied to the all-zeros register."""
    return apply_ansatz(init_state(spec.n, with_detector), spec, theta)


def cost(hamiltonian: Hamiltonian, spec: AnsatzSpec, theta: np.ndarray) -> float:
    """Energy <psi(theta)| H |psi(theta)>, computed exactly."""
    if hamiltonian.n != spec.n:
        raise ValueError(
            f"Hamiltonian acts on {hamiltonian.n} qubits, ansatz on {spec.n}"
        )
    state = prepare_state(spec, theta)
    return sum(t.coefficient * state.expectation(t.string) for t in hamiltonian)
