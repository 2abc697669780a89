"""Command-line harness.

Subcommands
-----------
``gen-ham``    write a random Hamiltonian file
``run``        run a convergence experiment from a JSON config
``resources``  tabulate gate totals across a sweep of term counts

Exit codes: 0 success, 1 usage/config error, 2 runtime error.

``run`` reads a single JSON object (unknown keys are hard errors) and
writes, into the configured output directory: one trace CSV per method,
``summary.txt``, and ``convergence.png``. ``resources`` writes a
scaling CSV and ``scaling.png``. CSV floats carry 12 significant
digits, so identical configs and seeds give byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ansatz import AnsatzSpec
from .gradients import GradientMethod, QndmConfig, ShotConfig
from .optimizer import ConvergenceTrace, OptimizerConfig, run_optimization
from .pauli import (
    Hamiltonian,
    RandomHamSpec,
    bundled_hamiltonian,
    gen_random_hamiltonian,
    load_hamiltonian,
    serialize_hamiltonian,
)
from .resources import CostModel, build_report, dm_cost, qndm_cost, scaling_csv, scaling_sweep

_MAX_DIAG_QUBITS = 12


class ConfigError(ValueError):
    """Invalid configuration or command usage (exit code 1)."""


# -- config parsing ------------------------------------------------------


def _require(mapping: dict, field: str, path: str):
    if field not in mapping:
        raise ConfigError(f"missing field {path}.{field}")
    return mapping[field]


def _reject_unknown(mapping: dict, known: set[str], path: str):
    unknown = set(mapping) - known
    if unknown:
        raise ConfigError(f"unknown field {path}.{sorted(unknown)[0]}")


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path} must be a number")
    return float(value)


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path} must be an integer")
    return value


@dataclass
class ExperimentConfig:
    hamiltonian_file: Path | None
    hamiltonian_random: RandomHamSpec | None
    hamiltonian_bundled: str | None
    ansatz: AnsatzSpec
    methods: list[GradientMethod]
    eta: float
    max_iterations: int
    restarts: int
    master_seed: int
    shots: ShotConfig
    qndm: QndmConfig | None
    out_dir: Path
    emit_per_restart: bool
    plot: bool

    def load_hamiltonian(self) -> Hamiltonian:
        if self.hamiltonian_file is not None:
            return load_hamiltonian(self.hamiltonian_file)
        if self.hamiltonian_bundled is not None:
            return bundled_hamiltonian(self.hamiltonian_bundled)
        return gen_random_hamiltonian(self.hamiltonian_random)


def parse_experiment_config(raw: dict, base_dir: Path) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    _reject_unknown(
        raw, {"hamiltonian", "ansatz", "optimizer", "shots", "qndm", "outputs"}, "config"
    )

    ham = _require(raw, "hamiltonian", "config")
    _reject_unknown(ham, {"file", "random", "bundled"}, "hamiltonian")
    sources = [k for k in ("file", "random", "bundled") if k in ham]
    if len(sources) != 1:
        raise ConfigError(
            "hamiltonian must name exactly one source: file, random or bundled"
        )
    ham_file = ham_random = ham_bundled = None
    if "file" in ham:
        ham_file = (base_dir / str(ham["file"])).resolve()
    elif "bundled" in ham:
        ham_bundled = str(ham["bundled"])
    else:
        rnd = ham["random"]
        _reject_unknown(
            rnd, {"n", "j", "mu", "sigma", "seed", "allow_identity"}, "hamiltonian.random"
        )
        try:
            ham_random = RandomHamSpec(
                n=_integer(_require(rnd, "n", "hamiltonian.random"), "hamiltonian.random.n"),
                j=_integer(_require(rnd, "j", "hamiltonian.random"), "hamiltonian.random.j"),
                mu=_number(_require(rnd, "mu", "hamiltonian.random"), "hamiltonian.random.mu"),
                sigma=_number(
                    _require(rnd, "sigma", "hamiltonian.random"), "hamiltonian.random.sigma"
                ),
                seed=_integer(
                    _require(rnd, "seed", "hamiltonian.random"), "hamiltonian.random.seed"
                ),
                allow_identity=bool(rnd.get("allow_identity", False)),
            )
        except ValueError as exc:
            raise ConfigError(f"hamiltonian.random: {exc}") from None

    ans = _require(raw, "ansatz", "config")
    _reject_unknown(ans, {"n", "layers", "axis"}, "ansatz")
    try:
        ansatz = AnsatzSpec(
            n=_integer(_require(ans, "n", "ansatz"), "ansatz.n"),
            layers=_integer(_require(ans, "layers", "ansatz"), "ansatz.layers"),
            rotation_axis=str(ans.get("axis", "Y")),
        )
    except ValueError as exc:
        raise ConfigError(f"ansatz: {exc}") from None
    if ham_random is not None and ham_random.n != ansatz.n:
        raise ConfigError(
            f"ansatz.n={ansatz.n} does not match hamiltonian.random.n={ham_random.n}"
        )

    opt = _require(raw, "optimizer", "config")
    _reject_unknown(
        opt, {"method", "eta", "max_iterations", "restarts", "master_seed"}, "optimizer"
    )
    method_name = str(_require(opt, "method", "optimizer")).lower()
    if method_name == "both":
        methods = [GradientMethod.DM, GradientMethod.QNDM]
    else:
        try:
            methods = [GradientMethod(method_name)]
        except ValueError:
            raise ConfigError(
                f"optimizer.method must be exact, dm, qndm or both, got {method_name!r}"
            ) from None
    eta = _number(_require(opt, "eta", "optimizer"), "optimizer.eta")
    max_iterations = _integer(
        _require(opt, "max_iterations", "optimizer"), "optimizer.max_iterations"
    )
    restarts = _integer(_require(opt, "restarts", "optimizer"), "optimizer.restarts")
    master_seed = _integer(_require(opt, "master_seed", "optimizer"), "optimizer.master_seed")
    if eta <= 0:
        raise ConfigError(f"optimizer.eta must be > 0, got {eta}")
    if max_iterations < 1:
        raise ConfigError(f"optimizer.max_iterations must be >= 1, got {max_iterations}")
    if restarts < 1:
        raise ConfigError(f"optimizer.restarts must be >= 1, got {restarts}")

    shots_raw = raw.get("shots", {})
    _reject_unknown(shots_raw, {"n_shots", "seed"}, "shots")
    n_shots = shots_raw.get("n_shots")
    if n_shots is not None:
        n_shots = _integer(n_shots, "shots.n_shots")
    seed = shots_raw.get("seed", master_seed)
    try:
        shots = ShotConfig(n_shots=n_shots, seed=_integer(seed, "shots.seed"))
    except ValueError as exc:
        raise ConfigError(f"shots: {exc}") from None

    qndm = None
    if "qndm" in raw:
        q = raw["qndm"]
        _reject_unknown(q, {"lambda", "s"}, "qndm")
        try:
            qndm = QndmConfig(
                lam=_number(_require(q, "lambda", "qndm"), "qndm.lambda"),
                s=_number(q.get("s", math.pi / 2), "qndm.s"),
            )
        except ValueError as exc:
            raise ConfigError(f"qndm: {exc}") from None
    if GradientMethod.QNDM in methods and qndm is None:
        raise ConfigError("optimizer.method includes qndm but no qndm section is given")

    outputs = _require(raw, "outputs", "config")
    _reject_unknown(outputs, {"directory", "emit_per_restart", "plot"}, "outputs")
    out_dir = base_dir / str(_require(outputs, "directory", "outputs"))

    return ExperimentConfig(
        hamiltonian_file=ham_file,
        hamiltonian_random=ham_random,
        hamiltonian_bundled=ham_bundled,
        ansatz=ansatz,
        methods=methods,
        eta=eta,
        max_iterations=max_iterations,
        restarts=restarts,
        master_seed=master_seed,
        shots=shots,
        qndm=qndm,
        out_dir=out_dir,
        emit_per_restart=bool(outputs.get("emit_per_restart", False)),
        plot=bool(outputs.get("plot", True)),
    )


# -- output rendering ----------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def trace_csv(trace: ConvergenceTrace, per_restart: bool) -> str:
    header = ["iteration", "mean_energy", "std_energy"]
    if per_restart:
        header += [f"restart_{r}" for r in range(trace.restarts)]
    lines = [",".join(header)]
    for i in range(trace.energies.shape[1]):
        row = [str(i), _fmt(trace.mean_energy[i]), _fmt(trace.std_energy[i])]
        if per_restart:
            row += [_fmt(v) for v in trace.energies[:, i]]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _summary_text(
    config: ExperimentConfig,
    h: Hamiltonian,
    traces: dict[str, ConvergenceTrace],
    resources: dict[str, int],
) -> str:
    if config.hamiltonian_file is not None:
        source = f"file {config.hamiltonian_file.name}"
    elif config.hamiltonian_bundled is not None:
        source = f"bundled {config.hamiltonian_bundled}"
    else:
        r = config.hamiltonian_random
        source = f"random (n={r.n}, J={r.j}, mu={r.mu}, sigma={r.sigma}, seed={r.seed})"
    lines = [
        f"hamiltonian: {source}",
        f"qubits: {h.n}",
        f"terms: {h.num_terms}",
        f"ansatz layers: {config.ansatz.layers} (gates per block: {config.ansatz.gate_count},"
        f" parameters: {config.ansatz.param_count})",
        f"restarts: {config.restarts}",
        f"iterations: {config.max_iterations}",
        f"shots: {config.shots.n_shots if config.shots.is_finite else 'infinite'}",
    ]
    if h.n <= _MAX_DIAG_QUBITS:
        lines.append(f"exact ground energy: {_fmt(h.ground_energy())}")
    for name, trace in traces.items():
        lines.append(
            f"{name} final energy: {_fmt(trace.mean_energy[-1])}"
            f" +- {_fmt(trace.std_energy[-1])}"
        )
        lines.append(f"{name} total circuits: {trace.total_circuits}")
    if "dm" in resources:
        lines.append(f"gates per gradient (dm): {resources['dm']}")
    if "qndm" in resources:
        lines.append(f"gates per gradient (qndm): {resources['qndm']}")
    if "dm" in resources and "qndm" in resources:
        reduction = (resources["dm"] - resources["qndm"]) / resources["dm"]
        lines.append(f"gate reduction (dm vs qndm): {_fmt(reduction)}")
    return "\n".join(lines) + "\n"


# -- subcommands ---------------------------------------------------------


def cmd_gen_ham(args) -> int:
    try:
        spec = RandomHamSpec(
            n=args.n, j=args.j, mu=args.mu, sigma=args.sigma, seed=args.seed,
            allow_identity=args.allow_identity,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    h = gen_random_hamiltonian(spec)
    header = [
        f"random Hamiltonian: n={spec.n} J={spec.j} mu={spec.mu:g} "
        f"sigma={spec.sigma:g} seed={spec.seed}",
    ]
    out = Path(args.out)
    out.write_text(serialize_hamiltonian(h, header=header), encoding="utf-8")
    print(f"wrote {h.num_terms} terms on {h.n} qubits to {out}")
    return 0


def cmd_run(args) -> int:
    config_path = Path(args.config)
    try:
        raw = json.loads(config_path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {config_path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    config = parse_experiment_config(raw, config_path.resolve().parent)

    h = config.load_hamiltonian()
    if h.n != config.ansatz.n:
        raise ConfigError(
            f"ansatz.n={config.ansatz.n} does not match the Hamiltonian's {h.n} qubits"
        )

    threads = _resolve_threads(args.threads)
    traces: dict[str, ConvergenceTrace] = {}
    for method in config.methods:
        opt = OptimizerConfig(
            eta=config.eta,
            max_iterations=config.max_iterations,
            method=method,
            shots=config.shots,
            qndm=config.qndm,
            restarts=config.restarts,
            master_seed=config.master_seed,
        )
        traces[method.value] = run_optimization(h, config.ansatz, opt, threads=threads)

    resources: dict[str, int] = {}
    if config.shots.is_finite:
        model = CostModel()
        resources["dm"] = dm_cost(h, config.ansatz, config.shots, model)
        resources["qndm"] = qndm_cost(h, config.ansatz, config.shots, model)

    config.out_dir.mkdir(parents=True, exist_ok=True)
    single = len(traces) == 1
    for name, trace in traces.items():
        filename = "trace.csv" if single else f"trace_{name}.csv"
        (config.out_dir / filename).write_text(
            trace_csv(trace, config.emit_per_restart), encoding="utf-8"
        )
    summary = _summary_text(config, h, traces, resources)
    (config.out_dir / "summary.txt").write_text(summary, encoding="utf-8")
    if config.plot:
        from .plots import save_convergence_plot

        ground = h.ground_energy() if h.n <= _MAX_DIAG_QUBITS else None
        save_convergence_plot(
            traces,
            config.out_dir / "convergence.png",
            ground_energy=ground,
            per_restart=config.emit_per_restart,
        )
    sys.stdout.write(summary)
    return 0


def cmd_resources(args) -> int:
    try:
        j_values = [int(tok) for tok in args.j.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"--j must be a comma-separated integer list, got {args.j!r}") from None
    if not j_values:
        raise ConfigError("--j must name at least one term count")
    try:
        shots = ShotConfig(n_shots=args.shots)
        template = RandomHamSpec(n=args.n, j=j_values[0], mu=args.mu, sigma=args.sigma,
                                 seed=args.seed)
        reports = scaling_sweep(args.n, args.l, j_values, shots, template)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.include_iterations is not None:
        if args.include_iterations < 1:
            raise ConfigError("--include-iterations must be >= 1")
        for rep in reports:
            rep.r_dm *= args.include_iterations
            rep.r_qndm *= args.include_iterations
    out = Path(args.out)
    out.write_text(scaling_csv(reports), encoding="utf-8")
    if args.plot:
        from .plots import save_scaling_plot

        save_scaling_plot(reports, out.with_suffix(".png"))
    for rep in reports:
        print(
            f"J={rep.j}: r_dm={rep.r_dm} r_qndm={rep.r_qndm} "
            f"ratio={rep.ratio:.4g} reduction={rep.reduction:.4g} regime={rep.regime.value}"
        )
    return 0


# -- argument parsing ----------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _resolve_threads(cli_value: int | None) -> int:
    if cli_value is not None:
        return max(1, cli_value)
    env = os.environ.get("VQA_LAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"VQA_LAB_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vqa-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-ham", help="write a random Hamiltonian file")
    gen.add_argument("--n", type=int, required=True, help="qubit count")
    gen.add_argument("--j", type=int, required=True, help="term count")
    gen.add_argument("--mu", type=float, default=1.0, help="coefficient mean")
    gen.add_argument("--sigma", type=float, default=0.1, help="coefficient std dev")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", required=True, help="output file path")
    gen.add_argument("--allow-identity", action="store_true",
                     help="permit the all-identity string")
    gen.set_defaults(func=cmd_gen_ham)

    run = sub.add_parser("run", help="run an experiment from a JSON config")
    run.add_argument("config", help="path to the experiment config")
    run.add_argument("--threads", type=int, default=None,
                     help="concurrent restarts (default: all cores, or VQA_LAB_THREADS)")
    run.set_defaults(func=cmd_run)

    res = sub.add_parser("resources", help="gate totals across term counts")
    res.add_argument("--n", type=int, required=True)
    res.add_argument("--l", type=int, required=True, help="ansatz layers")
    res.add_argument("--j", required=True, help="comma-separated term counts")
    res.add_argument("--shots", type=int, required=True)
    res.add_argument("--mu", type=float, default=1.0)
    res.add_argument("--sigma", type=float, default=0.1)
    res.add_argument("--seed", type=int, default=0)
    res.add_argument("--include-iterations", type=int, default=None,
                     help="multiply totals by an iteration count")
    res.add_argument("--out", default="scaling.csv")
    res.add_argument("--plot", action=argparse.BooleanOptionalAction, default=True)
    res.set_defaults(func=cmd_resources)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failures: missing files, bad data
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
