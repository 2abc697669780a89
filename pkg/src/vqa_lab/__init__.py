"""vqa-lab: state-vector laboratory for variational energy minimization.

Compares two ways of extracting cost-function gradients from a layered
variational circuit - per-term projective (direct) measurement and a
detector-phase (non-demolition) readout - in convergence behaviour and
in logical-gate cost.
"""

from .ansatz import AnsatzSpec, apply_ansatz, cost, prepare_state
from .gradients import (
    KAPPA,
    GradientEstimate,
    GradientMethod,
    QndmConfig,
    ShotConfig,
    dm_gradient,
    exact_gradient,
    qndm_gradient,
    quasi_char_function,
)
from .optimizer import ConvergenceTrace, OptimizerConfig, gd_step, run_optimization
from .pauli import (
    H2_REFERENCE_GROUND_ENERGY,
    Hamiltonian,
    HamiltonianFormatError,
    PauliString,
    PauliTerm,
    RandomHamSpec,
    bundled_hamiltonian,
    gen_random_hamiltonian,
    load_hamiltonian,
    parse_hamiltonian,
    serialize_hamiltonian,
)
from .resources import (
    CostModel,
    Regime,
    ResourceReport,
    build_report,
    classify_regime,
    dm_cost,
    qndm_cost,
    scaling_csv,
    scaling_sweep,
)
from .statevector import DetectorDensityMatrix, StateVector, init_state

__version__ = "0.1.0"

__all__ = [
    "AnsatzSpec",
    "ConvergenceTrace",
    "CostModel",
    "DetectorDensityMatrix",
    "GradientEstimate",
    "GradientMethod",
    "H2_REFERENCE_GROUND_ENERGY",
    "Hamiltonian",
    "HamiltonianFormatError",
    "KAPPA",
    "OptimizerConfig",
    "PauliString",
    "PauliTerm",
    "QndmConfig",
    "RandomHamSpec",
    "Regime",
    "ResourceReport",
    "ShotConfig",
    "StateVector",
    "apply_ansatz",
    "build_report",
    "bundled_hamiltonian",
    "classify_regime",
    "cost",
    "dm_cost",
    "dm_gradient",
    "exact_gradient",
    "gd_step",
    "gen_random_hamiltonian",
    "init_state",
    "load_hamiltonian",
    "parse_hamiltonian",
    "prepare_state",
    "qndm_cost",
    "qndm_gradient",
    "quasi_char_function",
    "run_optimization",
    "scaling_csv",
    "scaling_sweep",
    "serialize_hamiltonian",
]
