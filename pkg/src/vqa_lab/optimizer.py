"""Plain gradient descent with multi-restart statistics.

Each restart draws its own starting point uniformly from the configured
angle range, runs a fixed iteration budget (no early stopping), and
records the exact energy after every update. The convergence curve is
the per-iteration mean across restarts; the spread (population standard
deviation) is the uncertainty band. Recording exact energies keeps
readout noise out of the curve - noise enters only through the sampled
gradients driving the updates.

Everything is deterministic given ``master_seed``: the restart-r
starting point uses seed (master_seed, r), and the gradient sampling
for iteration t uses context (r, t), so restarts may run concurrently
without changing a single bit of the output.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ansatz import AnsatzSpec, cost
from .gradients import (
    GradientEstimate,
    GradientMethod,
    QndmConfig,
    ShotConfig,
    dm_gradient,
    exact_gradient,
    qndm_gradient,
)
from .pauli import Hamiltonian

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class OptimizerConfig:
    eta: float
    max_iterations: int
    method: GradientMethod
    shots: ShotConfig = ShotConfig()
    qndm: QndmConfig | None = None
    restarts: int = 1
    master_seed: int = 0
    init_range: tuple[float, float] = (0.0, 2.0 * math.pi)

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError(f"learning rate must be > 0, got {self.eta}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.method is GradientMethod.QNDM and self.qndm is None:
            raise ValueError("qndm method requires a QndmConfig")


@dataclass
class ConvergenceTrace:
    """Per-restart energy sequences plus their aggregate statistics.

    ``energies`` has shape (restarts, iterations + 1); row r starts with
    the energy at the untouched initial point. ``theta_digests`` holds a
    short fingerprint of the parameter vector at every recorded step,
    enough to compare runs without storing the full trajectories.
    """

    method: GradientMethod
    energies: np.ndarray
    mean_energy: np.ndarray
    std_energy: np.ndarray
    theta_digests: list[list[str]]
    final_thetas: np.ndarray
    total_circuits: int
    total_gate_resources: int | None = field(default=None)

    @property
    def restarts(self) -> int:
        return self.energies.shape[0]

    @property
    def iterations(self) -> int:
        return self.energies.shape[1] - 1


def gd_step(theta: np.ndarray, grad: GradientEstimate, eta: float) -> np.ndarray:
    """One descent update theta - eta * g."""
    values = grad.values
    if values.shape != theta.shape:
        raise ValueError(
            f"gradient shape {values.shape} does not match theta {theta.shape}"
        )
    return theta - eta * values


def _theta_digest(theta: np.ndarray) -> str:
    return hashlib.blake2b(theta.tobytes(), digest_size=8).hexdigest()


def _evaluate_gradient(
    h: Hamiltonian,
    spec: AnsatzSpec,
    theta: np.ndarray,
    config: OptimizerConfig,
    context: tuple[int, ...],
) -> GradientEstimate:
    if config.method is GradientMethod.EXACT:
        return exact_gradient(h, spec, theta)
    if config.method is GradientMethod.DM:
        return dm_gradient(h, spec, theta, shots=config.shots, seed_context=context)
    return qndm_gradient(
        h, spec, theta, config.qndm, shots=config.shots, seed_context=context
    )


def _run_restart(
    h: Hamiltonian, spec: AnsatzSpec, config: OptimizerConfig, restart: int
):
    rng = np.random.default_rng(
        np.random.SeedSequence((config.master_seed & _SEED_MASK, restart))
    )
    low, high = config.init_range
    theta = rng.uniform(low, high, spec.param_count)
    energies = np.empty(config.max_iterations + 1)
    digests = [_theta_digest(theta)]
    energies[0] = cost(h, spec, theta)
    circuits = 0
    for iteration in range(1, config.max_iterations + 1):
        grad = _evaluate_gradient(h, spec, theta, config, (restart, iteration))
        circuits += grad.circuits_executed
        theta = gd_step(theta, grad, config.eta)
        energies[iteration] = cost(h, spec, theta)
        digests.append(_theta_digest(theta))
    return energies, digests, theta, circuits


def run_optimization(
    h: Hamiltonian,
    spec: AnsatzSpec,
    config: OptimizerConfig,
    threads: int = 1,
) -> ConvergenceTrace:
    """Run all restarts and aggregate the convergence statistics.

    ``threads`` > 1 evaluates restarts concurrently; results are
    identical either way.
    """
    if h.n != spec.n:
        raise ValueError(f"Hamiltonian acts on {h.n} qubits, ansatz on {spec.n}")
    ids = range(config.restarts)
    if threads > 1 and config.restarts > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda r: _run_restart(h, spec, config, r), ids))
    else:
        results = [_run_restart(h, spec, config, r) for r in ids]
    energies = np.vstack([res[0] for res in results])
    return ConvergenceTrace(
        method=config.method,
        energies=energies,
        mean_energy=energies.mean(axis=0),
        std_energy=energies.std(axis=0),
        theta_digests=[res[1] for res in results],
        final_thetas=np.vstack([res[2] for res in results]),
        total_circuits=sum(res[3] for res in results),
    )
