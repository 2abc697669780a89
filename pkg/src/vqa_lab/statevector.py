"""Dense complex state-vector engine for a small register plus an
optional single-qubit detector.

Conventions
-----------
* Qubit ``q`` is bit ``q`` of the amplitude index (qubit 0 = least
  significant bit).
* When a detector is present it occupies the highest-order position,
  i.e. bit ``n_system`` of the index, and is prepared in the equal
  superposition (|0> + |1>)/sqrt(2).
* Pauli strings address system qubits only; the detector is reached
  through :meth:`StateVector.apply_detector_coupling` and
  :meth:`StateVector.detector_rdm`.

Gates mutate the state in place and return ``self`` so protocol
pipelines can be chained. A state must not be mutated from two tasks at
once; independent states are safe to evolve concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString, PauliTerm

_MAX_TOTAL_QUBITS = 20

# arange / permutation caches, keyed by dimension (and gate wiring);
# bounded by the handful of register sizes a process touches.
_INDEX_CACHE: dict[int, np.ndarray] = {}
_CNOT_CACHE: dict[tuple[int, int, int], np.ndarray] = {}


def _indices(dim: int) -> np.ndarray:
    idx = _INDEX_CACHE.get(dim)
    if idx is None:
        idx = np.arange(dim, dtype=np.uint32)
        _INDEX_CACHE[dim] = idx
    return idx


def _parity_signs(values: np.ndarray) -> np.ndarray:
    return 1.0 - 2.0 * (np.bitwise_count(values) & np.uint32(1))


class StateVector:
    """Pure state of ``n_system`` qubits, optionally plus a detector."""

    __slots__ = ("n_system", "detector_present", "amps")

    def __init__(self, n_system: int, amps: np.ndarray, detector_present: bool):
        self.n_system = n_system
        self.detector_present = detector_present
        self.amps = amps

    @property
    def n_total(self) -> int:
        return self.n_system + (1 if self.detector_present else 0)

    @property
    def detector_index(self) -> int:
        if not self.detector_present:
            raise ValueError("state has no detector qubit")
        return self.n_system

    @property
    def dim(self) -> int:
        return self.amps.size

    def copy(self) -> "StateVector":
        return StateVector(self.n_system, self.amps.copy(), self.detector_present)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    # -- gates ---------------------------------------------------------

    def apply_rotation(self, qubit: int, axis: str, theta: float) -> "StateVector":
        """exp(-i * theta/2 * sigma_axis) on one qubit."""
        if not 0 <= qubit < self.n_total:
            raise ValueError(f"qubit {qubit} out of range for {self.n_total} qubits")
        if axis not in ("X", "Y", "Z"):
            raise ValueError(f"rotation axis must be X, Y or Z, got {axis!r}")
        half = 0.5 * theta
        c = np.cos(half)
        s = np.sin(half)
        a = self.amps.reshape(-1, 2, 1 << qubit)
        a0 = a[:, 0, :].copy()
        a1 = a[:, 1, :]
        if axis == "Y":
            a[:, 0, :] = c * a0 - s * a1
            a[:, 1, :] = s * a0 + c * a1
        elif axis == "X":
            a[:, 0, :] = c * a0 - 1j * s * a1
            a[:, 1, :] = -1j * s * a0 + c * a1
        else:
            a[:, 0, :] = (c - 1j * s) * a0
            a[:, 1, :] = (c + 1j * s) * a1
        return self

    def apply_cnot(self, control: int, target: int) -> "StateVector":
        if control == target:
            raise ValueError("control and target must differ")
        for q in (control, target):
            if not 0 <= q < self.n_total:
                raise ValueError(f"qubit {q} out of range for {self.n_total} qubits")
        key = (self.dim, control, target)
        perm = _CNOT_CACHE.get(key)
        if perm is None:
            idx = _indices(self.dim)
            flip = ((idx >> np.uint32(control)) & np.uint32(1)) * np.uint32(1 << target)
            perm = idx ^ flip
            _CNOT_CACHE[key] = perm
        self.amps = self.amps[perm]
        return self

    def _pauli_image(self, p: PauliString, extra_zy_mask: int = 0) -> np.ndarray:
        """Return (P |psi>) as a fresh array, where P is the string on the
        system qubits, optionally with a detector Z folded in."""
        key = (self.dim, extra_zy_mask)
        cached = p._apply_cache.get(key)
        if cached is None:
            idx = _indices(self.dim)
            src = idx ^ np.uint32(p.x_mask)
            phases = (1j**p.num_y) * _parity_signs(
                src & np.uint32(p.zy_mask | extra_zy_mask)
            )
            cached = (src, phases)
            p._apply_cache[key] = cached
        src, phases = cached
        return self.amps[src] * phases

    def expectation(self, p: PauliString) -> float:
        """<psi| P |psi> for a Pauli string on the system qubits."""
        if p.n != self.n_system:
            raise ValueError(
                f"Pauli string length {p.n} != system qubit count {self.n_system}"
            )
        return float(np.vdot(self.amps, self._pauli_image(p)).real)

    def apply_detector_coupling(
        self, lambda_angle: float, term: PauliTerm, sign: int
    ) -> "StateVector":
        """exp(sign * i * lambda * h * (Z_detector x P)) applied exactly.

        Z_d x P squares to the identity, so the exponential reduces to
        cos(phi) * 1 + i sin(phi) * (Z_d x P) with phi = sign*lambda*h.
        """
        if not self.detector_present:
            raise ValueError("detector coupling needs a detector qubit")
        if term.string.n != self.n_system:
            raise ValueError(
                f"term string length {term.string.n} != system qubit "
                f"count {self.n_system}"
            )
        if sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign}")
        phi = sign * lambda_angle * term.coefficient
        image = self._pauli_image(term.string, extra_zy_mask=1 << self.n_system)
        self.amps = np.cos(phi) * self.amps + 1j * np.sin(phi) * image
        return self

    def detector_rdm(self) -> "DetectorDensityMatrix":
        """Partial trace over the system qubits."""
        if not self.detector_present:
            raise ValueError("state has no detector qubit")
        psi = self.amps.reshape(2, -1)
        return DetectorDensityMatrix(psi @ psi.conj().T)


@dataclass
class DetectorDensityMatrix:
    """2x2 reduced density matrix of the detector qubit."""

    matrix: np.ndarray

    @property
    def off_diagonal(self) -> complex:
        """<0| rho |1>, the coherence that stores the accumulated phase."""
        return complex(self.matrix[0, 1])

    @property
    def x_expectation(self) -> float:
        return float(2.0 * self.matrix[0, 1].real)

    @property
    def y_expectation(self) -> float:
        return float(-2.0 * self.matrix[0, 1].imag)


def init_state(n: int, with_detector: bool = False) -> StateVector:
    """All-zeros register; the detector (when present) gets a Hadamard."""
    if n < 1:
        raise ValueError(f"qubit count must be >= 1, got {n}")
    n_total = n + (1 if with_detector else 0)
    if n_total > _MAX_TOTAL_QUBITS:
        raise ValueError(f"register limited to {_MAX_TOTAL_QUBITS} qubits total")
    amps = np.zeros(1 << n_total, dtype=complex)
    if with_detector:
        amps[0] = amps[1 << n] = 1.0 / np.sqrt(2.0)
    else:
        amps[0] = 1.0
    return StateVector(n, amps, with_detector)
