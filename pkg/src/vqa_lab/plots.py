"""Figure rendering for the CLI report path.

Figures are written next to the CSV output: a convergence plot (mean
energy with a shaded spread band per method) and a resource-scaling
plot (gate totals and their ratio versus term count).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .optimizer import ConvergenceTrace
from .resources import ResourceReport

_METHOD_COLORS = {"dm": "tab:blue", "qndm": "tab:orange", "exact": "tab:green"}


def save_convergence_plot(
    traces: dict[str, ConvergenceTrace],
    path,
    ground_energy: float | None = None,
    per_restart: bool = False,
):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name, trace in traces.items():
        color = _METHOD_COLORS.get(name, None)
        iters = range(len(trace.mean_energy))
        if per_restart:
            for row in trace.energies:
                ax.plot(iters, row, color=color, alpha=0.15, lw=0.6)
        ax.plot(iters, trace.mean_energy, label=name.upper(), color=color)
        ax.fill_between(
            iters,
            trace.mean_energy - trace.std_energy,
            trace.mean_energy + trace.std_energy,
            color=color,
            alpha=0.25,
        )
    if ground_energy is not None:
        ax.axhline(ground_energy, ls="--", color="k", lw=0.8, label="exact ground")
    ax.set_xlabel("iteration")
    ax.set_ylabel("energy")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_scaling_plot(reports: list[ResourceReport], path):
    js = [rep.j for rep in reports]
    fig, (ax_tot, ax_ratio) = plt.subplots(1, 2, figsize=(9, 4))
    ax_tot.plot(js, [rep.r_dm for rep in reports], "o-", label="direct measurement")
    ax_tot.plot(js, [rep.r_qndm for rep in reports], "s-", label="detector phase")
    ax_tot.set_yscale("log")
    ax_tot.set_xlabel("Hamiltonian terms J")
    ax_tot.set_ylabel("gates per gradient")
    ax_tot.legend()
    ax_ratio.plot(js, [rep.ratio for rep in reports], "d-", color="tab:red")
    ax_ratio.set_xlabel("Hamiltonian terms J")
    ax_ratio.set_ylabel("gate ratio (DM / detector)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
