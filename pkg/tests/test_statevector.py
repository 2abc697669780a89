"""State-vector engine against dense-matrix oracles."""

import numpy as np
import pytest
from scipy.linalg import expm

from vqa_lab import PauliString, PauliTerm, StateVector, init_state

from conftest import dense_pauli, random_state


# --- initial states ---

def test_init_plain():
    s = init_state(2)
    assert s.amps[0] == 1.0
    assert np.all(s.amps[1:] == 0.0)


def test_init_with_detector():
    s = init_state(1, with_detector=True)
    expected = np.zeros(4, dtype=complex)
    expected[0] = expected[2] = 1 / np.sqrt(2)
    np.testing.assert_allclose(s.amps, expected, atol=1e-15)
    assert s.detector_index == 1


def test_init_detector_coherence_is_half():
    rdm = init_state(1, with_detector=True).detector_rdm()
    assert rdm.off_diagonal == pytest.approx(0.5, abs=1e-15)


def test_init_rejects_zero_qubits():
    with pytest.raises(ValueError):
        init_state(0)


# --- rotations ---

def test_rotation_zero_angle_is_identity():
    s = StateVector(2, random_state(2, 1), False)
    before = s.amps.copy()
    s.apply_rotation(1, "Y", 0.0)
    np.testing.assert_allclose(s.amps, before, atol=1e-15)


def test_ry_pi_flips():
    s = init_state(1).apply_rotation(0, "Y", np.pi)
    np.testing.assert_allclose(np.abs(s.amps), [0.0, 1.0], atol=1e-15)


def test_ry_half_pi_superposition():
    # analytic matrix: cos(pi/4)|0> + sin(pi/4)|1>
    s = init_state(1).apply_rotation(0, "Y", np.pi / 2)
    np.testing.assert_allclose(s.amps, [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-12)


@pytest.mark.parametrize("axis", ["X", "Y", "Z"])
@pytest.mark.parametrize("qubit", [0, 1, 2])
def test_rotation_matches_dense_matrix(axis, qubit):
    theta = 0.813
    psi = random_state(3, seed=qubit + 17)
    s = StateVector(3, psi.copy(), False)
    s.apply_rotation(qubit, axis, theta)
    pauli = "".join(axis if i == qubit else "I" for i in range(3))
    mat = expm(-0.5j * theta * dense_pauli(pauli))
    np.testing.assert_allclose(s.amps, mat @ psi, atol=1e-12)


def test_rotation_out_of_range():
    with pytest.raises(ValueError):
        init_state(2).apply_rotation(2, "Y", 0.1)


def test_rotation_bad_axis():
    with pytest.raises(ValueError):
        init_state(1).apply_rotation(0, "H", 0.1)


# --- cnot ---

def test_cnot_truth_table():
    for src, dst in [(0b00, 0b00), (0b01, 0b11), (0b10, 0b10), (0b11, 0b01)]:
        amps = np.zeros(4, dtype=complex)
        amps[src] = 1.0
        s = StateVector(2, amps, False).apply_cnot(0, 1)
        assert s.amps[dst] == 1.0


def test_cnot_builds_bell_state():
    s = init_state(2).apply_rotation(0, "Y", np.pi / 2).apply_cnot(0, 1)
    np.testing.assert_allclose(
        s.amps, [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)], atol=1e-12
    )


def test_cnot_index_guards():
    with pytest.raises(ValueError):
        init_state(2).apply_cnot(1, 1)
    with pytest.raises(ValueError):
        init_state(2).apply_cnot(0, 2)


# --- expectation values ---

def test_expectation_z_on_zero():
    assert init_state(1).expectation(PauliString("Z")) == pytest.approx(1.0)


def test_expectation_x_on_plus():
    s = init_state(1).apply_rotation(0, "Y", np.pi / 2)
    assert s.expectation(PauliString("X")) == pytest.approx(1.0)


def test_expectation_identity_is_one():
    s = StateVector(3, random_state(3, 4), False)
    assert s.expectation(PauliString("III")) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("factors", ["XYZ", "ZZI", "YIY", "IXI"])
def test_expectation_matches_dense_kron(factors):
    psi = random_state(3, seed=hash(factors) % 1000)
    s = StateVector(3, psi.copy(), False)
    expected = np.vdot(psi, dense_pauli(factors) @ psi).real
    assert s.expectation(PauliString(factors)) == pytest.approx(expected, abs=1e-12)


def test_expectation_with_detector_ignores_detector():
    s = init_state(2, with_detector=True)
    assert s.expectation(PauliString("ZZ")) == pytest.approx(1.0)


def test_expectation_length_mismatch():
    with pytest.raises(ValueError):
        init_state(2).expectation(PauliString("ZZZ"))


# --- detector coupling ---

def test_coupling_zero_angle_is_identity():
    s = init_state(2, with_detector=True)
    before = s.amps.copy()
    s.apply_detector_coupling(0.0, PauliTerm(1.0, PauliString("XY")), +1)
    np.testing.assert_allclose(s.amps, before, atol=1e-15)


def test_coupling_z_phase_on_basis_state():
    # detector |0>, system |0>: eigenvalue +1 of Z_d x Z -> phase e^{i s lam}
    lam = 0.37
    for sign in (+1, -1):
        amps = np.zeros(4, dtype=complex)
        amps[0] = 1.0
        s = StateVector(1, amps, True)
        s.apply_detector_coupling(lam, PauliTerm(1.0, PauliString("Z")), sign)
        assert s.amps[0] == pytest.approx(np.exp(1j * sign * lam), abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_coupling_matches_dense_exponential(n):
    rng = np.random.default_rng(n)
    factors = "".join(rng.choice(list("IXYZ"), size=n))
    if set(factors) == {"I"}:
        factors = "Z" + factors[1:]
    coeff = float(rng.normal())
    lam = 0.23
    psi = random_state(n + 1, seed=50 + n)
    for sign in (+1, -1):
        s = StateVector(n, psi.copy(), True)
        s.apply_detector_coupling(lam, PauliTerm(coeff, PauliString(factors)), sign)
        za_p = np.kron(dense_pauli("Z"), dense_pauli(factors))
        oracle = expm(1j * sign * lam * coeff * za_p) @ psi
        np.testing.assert_allclose(s.amps, oracle, atol=1e-10)


def test_coupling_product_matches_ordered_dense_product():
    # J=3 random 2-qubit terms; term 0 acts first in both engines
    rng = np.random.default_rng(77)
    terms = [
        PauliTerm(float(rng.normal()), PauliString("".join(rng.choice(list("IXYZ"), 2))))
        for _ in range(3)
    ]
    lam = 0.19
    psi = random_state(3, seed=99)
    for sign in (+1, -1):
        s = StateVector(2, psi.copy(), True)
        for t in terms:
            s.apply_detector_coupling(lam, t, sign)
        u = np.eye(8, dtype=complex)
        for t in terms:
            za_p = np.kron(dense_pauli("Z"), dense_pauli(t.string.factors))
            u = expm(1j * sign * lam * t.coefficient * za_p) @ u
        np.testing.assert_allclose(s.amps, u @ psi, atol=1e-10)


def test_coupling_requires_detector():
    with pytest.raises(ValueError):
        init_state(2).apply_detector_coupling(0.1, PauliTerm(1.0, PauliString("ZZ")), 1)


# --- detector reduced density matrix ---

def test_rdm_of_product_state_is_pure():
    s = init_state(2, with_detector=True)
    rdm = s.detector_rdm().matrix
    np.testing.assert_allclose(rdm, np.full((2, 2), 0.5), atol=1e-12)


def test_rdm_of_detector_system_bell_state():
    # entangle detector with system qubit 0 via a detector-side trick:
    # start detector in |+>, couple with Z_d x Z at lam=pi/4 twice to rotate
    s = init_state(1, with_detector=True)
    s.apply_detector_coupling(np.pi / 4, PauliTerm(1.0, PauliString("Z")), +1)
    s.apply_rotation(0, "X", np.pi / 2)
    s.apply_detector_coupling(np.pi / 4, PauliTerm(1.0, PauliString("Z")), +1)
    rdm = s.detector_rdm().matrix
    assert rdm[0, 0].real == pytest.approx(0.5, abs=1e-10)
    assert abs(rdm[0, 1]) < 0.5  # coherence degraded by entanglement


def test_rdm_properties_on_random_states(rng):
    for seed in range(5):
        s = StateVector(3, random_state(4, seed + 300), True)
        rdm = s.detector_rdm().matrix
        assert abs(np.trace(rdm) - 1.0) < 1e-12
        np.testing.assert_allclose(rdm, rdm.conj().T, atol=1e-12)
        eig = np.linalg.eigvalsh(rdm)
        assert eig.min() >= -1e-12
        assert eig.max() <= 1.0 + 1e-12


def test_rdm_requires_detector():
    with pytest.raises(ValueError):
        init_state(2).detector_rdm()


# --- norm preservation ---

def test_norm_preserved_over_thousand_random_gates(rng):
    s = init_state(3, with_detector=True)
    terms = [
        PauliTerm(float(rng.normal()), PauliString("".join(rng.choice(list("IXYZ"), 3))))
        for _ in range(4)
    ]
    for _ in range(1000):
        kind = rng.integers(0, 3)
        if kind == 0:
            s.apply_rotation(int(rng.integers(0, 4)), "XYZ"[rng.integers(0, 3)],
                             float(rng.uniform(0, 2 * np.pi)))
        elif kind == 1:
            a, b = rng.choice(4, size=2, replace=False)
            s.apply_cnot(int(a), int(b))
        else:
            s.apply_detector_coupling(
                float(rng.uniform(0, 0.5)), terms[rng.integers(0, 4)],
                int(rng.choice([-1, 1])),
            )
    assert abs(s.norm_sq() - 1.0) < 1e-9
