"""Logical-gate accounting for the two gradient-measurement strategies.

The counting convention lives entirely in :class:`CostModel`:

* Direct measurement runs one circuit per Hamiltonian term, per shift
  point, per component, per shot. Each circuit costs the ansatz
  (k gates) plus one pre-measurement basis rotation per X/Y factor.

      R_DM = 2 * d * N * sum_i (k + xy_i)

* The detector-phase route runs one circuit per component per shot
  (doubled for the two detector readout bases by the gradient module,
  but counted once here: the detector is measured a single time per
  run). Each circuit costs three ansatz blocks, two coupling products,
  and the detector's preparation/readout rotations.

      R_QNDM = d * N * (3k + 2 * sum_i c_i + overhead)

  A term's coupling cost c_i is a CNOT parity ladder down and up
  (2 * weight two-qubit gates) plus one detector phase rotation. Basis
  frames for X/Y factors are folded into the adjacent ladder gates, so
  their default cost is zero; set ``coupling_basis_per_xy=2`` to count
  the conjugating single-qubit pairs explicitly instead.

Totals are per full gradient evaluation. Multiply by the iteration
count (the CLI exposes ``--include-iterations``) for whole-run costs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .ansatz import AnsatzSpec
from .gradients import ShotConfig
from .pauli import Hamiltonian, PauliString, RandomHamSpec, gen_random_hamiltonian

_SEED_MASK = (1 << 64) - 1


class Regime(str, Enum):
    """Which of k and n*J dominates, with a factor-10 margin."""

    K_LL_NJ = "k<<nJ"
    K_GG_NJ = "k>>nJ"
    INTERMEDIATE = "intermediate"


def classify_regime(k: int, n: int, j: int) -> Regime:
    if 10 * k <= n * j:
        return Regime.K_LL_NJ
    if k >= 10 * n * j:
        return Regime.K_GG_NJ
    return Regime.INTERMEDIATE


@dataclass(frozen=True)
class CostModel:
    """All counting constants in one place; see the module docstring."""

    measure_basis_per_xy: int = 1
    two_qubit_per_weight: int = 2
    detector_rotation_per_term: int = 1
    coupling_basis_per_xy: int = 0
    detector_overhead: int = 2

    def basis_change_cost(self, p: PauliString) -> int:
        return self.measure_basis_per_xy * p.xy_count

    def coupling_cost(self, p: PauliString) -> int:
        return (
            self.two_qubit_per_weight * p.weight
            + self.detector_rotation_per_term
            + self.coupling_basis_per_xy * p.xy_count
        )


@dataclass
class ResourceReport:
    """Gate totals for one (Hamiltonian, ansatz, shots) configuration."""

    n: int
    layers: int
    j: int
    n_shots: int
    d: int
    k: int
    weights: tuple[int, ...]
    r_dm: int
    r_qndm: int

    @property
    def ratio(self) -> float:
        return self.r_dm / self.r_qndm

    @property
    def reduction(self) -> float:
        return (self.r_dm - self.r_qndm) / self.r_dm

    @property
    def regime(self) -> Regime:
        return classify_regime(self.k, self.n, self.j)


def _require_finite(shots: ShotConfig):
    if not shots.is_finite:
        raise ValueError("gate totals are undefined for infinite shots")


def dm_cost(
    h: Hamiltonian,
    spec: AnsatzSpec,
    shots: ShotConfig,
    model: CostModel = CostModel(),
) -> int:
    """Gates for one direct-measurement gradient evaluation."""
    _require_finite(shots)
    k = spec.gate_count
    per_circuit = sum(k + model.basis_change_cost(t.string) for t in h)
    return 2 * spec.param_count * shots.n_shots * per_circuit


def qndm_cost(
    h: Hamiltonian,
    spec: AnsatzSpec,
    shots: ShotConfig,
    model: CostModel = CostModel(),
) -> int:
    """Gates for one detector-phase gradient evaluation."""
    _require_finite(shots)
    k = spec.gate_count
    couplings = sum(model.coupling_cost(t.string) for t in h)
    per_circuit = 3 * k + 2 * couplings + model.detector_overhead
    return spec.param_count * shots.n_shots * per_circuit


def build_report(
    h: Hamiltonian,
    spec: AnsatzSpec,
    shots: ShotConfig,
    model: CostModel = CostModel(),
) -> ResourceReport:
    return ResourceReport(
        n=spec.n,
        layers=spec.layers,
        j=h.num_terms,
        n_shots=shots.n_shots,
        d=spec.param_count,
        k=spec.gate_count,
        weights=tuple(t.string.weight for t in h),
        r_dm=dm_cost(h, spec, shots, model),
        r_qndm=qndm_cost(h, spec, shots, model),
    )


def scaling_sweep(
    n: int,
    layers: int,
    j_values: list[int],
    shots: ShotConfig,
    ham_spec: RandomHamSpec,
    model: CostModel = CostModel(),
) -> list[ResourceReport]:
    """One report per term count, each on a fresh random Hamiltonian.

    The per-J Hamiltonian seed derives from (ham_spec.seed, J) so sweeps
    are reproducible and neighboring J values are independent draws.
    """
    if not j_values:
        raise ValueError("j_values must not be empty")
    _require_finite(shots)
    spec = AnsatzSpec(n, layers)
    reports = []
    for j in j_values:
        child = np.random.SeedSequence((ham_spec.seed & _SEED_MASK, j))
        seed = int(child.generate_state(1, np.uint64)[0])
        h = gen_random_hamiltonian(replace(ham_spec, n=n, j=j, seed=seed))
        reports.append(build_report(h, spec, shots, model))
    return reports


def scaling_csv(reports: list[ResourceReport]) -> str:
    """Render a sweep as CSV: J, r_dm, r_qndm, ratio, reduction, regime."""
    lines = ["j,r_dm,r_qndm,ratio,reduction,regime"]
    for rep in reports:
        lines.append(
            f"{rep.j},{rep.r_dm},{rep.r_qndm},"
            f"{rep.ratio:.12g},{rep.reduction:.12g},{rep.regime.value}"
        )
    return "\n".join(lines) + "\n"


def linear_fit_r_squared(x: list[float], y: list[float]) -> tuple[float, float]:
    """Least-squares line through (x, y); returns (R^2, slope)."""
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    design = np.vstack([xs, np.ones_like(xs)]).T
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    predicted = design @ coef
    ss_res = float(np.sum((ys - predicted) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    if ss_tot == 0.0:
        return (1.0 if ss_res < 1e-30 else 0.0), float(coef[0])
    return 1.0 - ss_res / ss_tot, float(coef[0])


def stationarity_gap(mean_energy: np.ndarray, window: int = 50) -> float:
    """Relative wobble of the tail of a convergence curve.

    Spread of the last ``window`` mean energies divided by the full
    curve's energy range; small values indicate the optimization has
    flattened out.
    """
    tail = mean_energy[-window:]
    full_range = float(mean_energy.max() - mean_energy.min())
    if full_range == 0.0:
        return 0.0
    return float(tail.max() - tail.min()) / full_range
