"""VQE loop: Ry ansatz + exact statevector expectation + SPSA, over several trials."""

from __future__ import annotations

import dataclasses
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ansatz import AnsatzSpec, AnsatzTemplate, bind, build as build_ansatz, random_parameters
from .eigensolver import eigh
from .models import PAPER_RESULTS, ModelSpec, build as build_model
from .pauli import PauliSum, reconstruct
from .simulator import Circuit, expectation, run
from .spsa import OptimizationTrace, SpsaConfig, minimize

__all__ = ["VqeResult", "make_objective", "trial_seeds", "run_vqe", "wheeler_dewitt_report"]


def make_objective(hamiltonian: PauliSum, template: AnsatzTemplate):
    """``theta -> <psi(theta)|H|psi(theta)>`` on the exact statevector."""
    if hamiltonian.num_qubits != template.num_qubits:
        raise ValueError(
            f"Hamiltonian acts on {hamiltonian.num_qubits} qubits, ansatz on {template.num_qubits}"
        )

    def objective(theta):
        return expectation(run(bind(template, theta)), hamiltonian)

    return objective


def trial_seeds(seed: int, trials: int) -> list[tuple[int, int]]:
    """Deterministic ``(init_seed, spsa_seed)`` pairs spawned from the master seed."""
    children = np.random.SeedSequence(seed).spawn(trials)
    return [tuple(int(s) for s in child.generate_state(2)) for child in children]


@dataclass
class VqeResult:
    energy_mean: float
    energy_std: float
    best_energy: float
    best_theta: np.ndarray
    trials: int
    trial_energies: list[float]
    traces: list[OptimizationTrace] = field(repr=False)
    exact_min: float
    exact_nearest_zero: float
    exact_real_min: float
    seed: int
    ansatz: AnsatzSpec
    optimizer: SpsaConfig
    best_circuit: Circuit = field(repr=False)
    conventions: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "energy_mean": self.energy_mean,
            "energy_std": self.energy_std,
            "energy_std_definition": "sample standard deviation (ddof=1) of per-trial best energies",
            "best_energy": self.best_energy,
            "best_theta": [float(t) for t in self.best_theta],
            "trials": self.trials,
            "trial_energies": list(self.trial_energies),
            "exact_min": self.exact_min,
            "exact_nearest_zero": self.exact_nearest_zero,
            "exact_real_min": self.exact_real_min,
            "seed": self.seed,
            "ansatz": dataclasses.asdict(self.ansatz),
            "optimizer": dataclasses.asdict(self.optimizer),
            "calibrated_a": [t.a for t in self.traces],
            "conventions": self.conventions,
        }

    def traces_csv(self) -> str:
        lines = ["trial,iteration,energy"]
        for i, trace in enumerate(self.traces):
            for k, e in zip(trace.iterations, trace.estimates):
                lines.append(f"{i},{k},{float(e)!r}")
        return "\n".join(lines) + "\n"


def run_vqe(
    hamiltonian: PauliSum,
    ansatz: AnsatzSpec,
    opt: SpsaConfig | None = None,
    trials: int = 10,
    seed: int = 0,
    *,
    n_jobs: int = 1,
    conventions: dict | None = None,
) -> VqeResult:
    """Run ``trials`` independent SPSA optimizations and aggregate them.

    Results are reduced in trial order, so ``n_jobs`` never changes the output.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    opt = opt or SpsaConfig()
    template = build_ansatz(ansatz)
    objective = make_objective(hamiltonian, template)

    def one_trial(seeds):
        init_seed, spsa_seed = seeds
        theta0 = random_parameters(ansatz, np.random.default_rng(init_seed))
        return minimize(objective, theta0, dataclasses.replace(opt, seed=spsa_seed))

    seeds = trial_seeds(seed, trials)
    if n_jobs == 1:
        outcomes = [one_trial(s) for s in seeds]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs if n_jobs > 0 else None) as pool:
            outcomes = list(pool.map(one_trial, seeds))

    energies = [float(o.fun) for o in outcomes]
    best = int(np.argmin(energies))
    matrix = reconstruct(hamiltonian)
    spectrum = eigh(matrix)
    return VqeResult(
        energy_mean=float(np.mean(energies)),
        energy_std=float(np.std(energies, ddof=1)) if trials > 1 else 0.0,
        best_energy=energies[best],
        best_theta=outcomes[best].theta,
        trials=trials,
        trial_energies=energies,
        traces=[o.trace for o in outcomes],
        exact_min=spectrum.min,
        exact_nearest_zero=spectrum.nearest_zero,
        # Ry/CNOT circuits only reach real amplitudes: their floor is min eig of Re(H)
        exact_real_min=float(eigh(matrix.real).min),
        seed=seed,
        ansatz=ansatz,
        optimizer=opt,
        best_circuit=bind(template, outcomes[best].theta),
        conventions=dict(conventions or {}),
    )


def _rel_diff(ours: float, theirs: float) -> float:
    return abs(ours - theirs) / abs(theirs) if theirs else math.inf


def wheeler_dewitt_report(
    spec: ModelSpec,
    ansatz: AnsatzSpec | None = None,
    opt: SpsaConfig | None = None,
    trials: int = 10,
    seed: int = 0,
    *,
    zero_threshold: float = 1e-3,
    n_jobs: int = 1,
) -> tuple[dict, VqeResult]:
    """Exact and VQE solutions for one model, set against the reference numbers.

    The constraint ``H psi = 0`` is judged by the eigenvalue nearest zero;
    the report records it as ``constraint_compatible`` but draws no conclusion.
    """
    start = time.perf_counter()
    model = build_model(spec)
    ansatz = ansatz or AnsatzSpec(spec.num_qubits)
    result = run_vqe(model.pauli, ansatz, opt, trials, seed, n_jobs=n_jobs, conventions=model.conventions)
    spectrum = eigh(model.matrix)
    eigenvalues = spectrum.eigenvalues
    record = {
        "model": spec.kind,
        "params": dict(spec.params),
        "conventions": model.conventions,
        "num_qubits": spec.num_qubits,
        "num_pauli_terms": len(model.pauli),
        "hermitian": True,
        "spectrum_real": bool(np.all(np.isfinite(eigenvalues))),
        "exact_min": spectrum.min,
        "exact_nearest_zero": spectrum.nearest_zero,
        "exact_real_min": result.exact_real_min,
        "vqe_best": result.best_energy,
        "vqe_mean": result.energy_mean,
        "vqe_std": result.energy_std,
        "variational_bound_ok": result.best_energy >= spectrum.min - 1e-9,
        "zero_threshold": zero_threshold,
        "constraint_compatible": abs(spectrum.nearest_zero) < zero_threshold,
        "trials": trials,
        "seed": seed,
    }
    reference = PAPER_RESULTS.get(spec.kind)
    if reference:
        record["paper"] = dict(reference)
        record["rel_diff"] = {
            "exact_min_vs_paper_exact": _rel_diff(spectrum.min, reference["exact"]),
            "exact_nearest_zero_vs_paper_exact": _rel_diff(spectrum.nearest_zero, reference["exact"]),
            "vqe_mean_vs_paper_vqe": _rel_diff(result.energy_mean, reference["vqe"]),
        }
    record["wall_time_s"] = time.perf_counter() - start
    return record, result
