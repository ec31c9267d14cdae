import dataclasses

import numpy as np
import pytest

from qcosmo.ansatz import AnsatzSpec
from qcosmo.eigensolver import eigh
from qcosmo.models import ModelSpec, build, paper_instance
from qcosmo.pauli import PauliSum, decompose
from qcosmo.spsa import SpsaConfig
from qcosmo.vqe import run_vqe, trial_seeds, wheeler_dewitt_report

from conftest import random_hermitian

FAST = SpsaConfig(max_iterations=150)


def test_single_z_reaches_minus_one():
    r = run_vqe(PauliSum(((1.0, "Z"),), 1), AnsatzSpec(1, 1), SpsaConfig(max_iterations=300), trials=3, seed=1)
    assert r.best_energy == pytest.approx(-1, abs=1e-3)
    assert r.exact_min == pytest.approx(-1)


def test_constant_hamiltonian():
    r = run_vqe(PauliSum(((1.0, "II"),), 2), AnsatzSpec(2, 1), FAST, trials=4, seed=0)
    assert r.trial_energies == pytest.approx([1.0] * 4, abs=1e-12)
    assert r.energy_std == pytest.approx(0, abs=1e-12)
    assert r.best_energy == pytest.approx(1)


def test_oscillator_converges():
    model = build(ModelSpec("oscillator1d", dft_index_base=0))
    r = run_vqe(model.pauli, AnsatzSpec(2, 3), SpsaConfig(max_iterations=500), trials=2, seed=4)
    assert abs(r.best_energy - r.exact_min) / abs(r.exact_min) < 0.05


def test_real_amplitude_floor_bounds_complex_hamiltonian():
    # Ry/CNOT circuits produce real states, which cannot beat min eig of Re(H)
    model = build(ModelSpec("oscillator1d"))
    r = run_vqe(model.pauli, AnsatzSpec(2, 3), SpsaConfig(max_iterations=300), trials=2, seed=0)
    assert r.exact_real_min > r.exact_min + 0.1
    assert r.best_energy >= r.exact_real_min - 1e-9


def test_variational_bound_random(rng):
    for _ in range(5):
        h = decompose(random_hermitian(rng, 16), 0.0)
        r = run_vqe(h, AnsatzSpec(4, 2), SpsaConfig(max_iterations=60), trials=1, seed=int(rng.integers(1000)))
        assert r.best_energy >= eigh(h.to_matrix()).min - 1e-9


def test_deterministic_and_parallel_invariant():
    h = build(ModelSpec("oscillator1d")).pauli
    a = run_vqe(h, AnsatzSpec(2, 2), FAST, trials=3, seed=5)
    b = run_vqe(h, AnsatzSpec(2, 2), FAST, trials=3, seed=5)
    c = run_vqe(h, AnsatzSpec(2, 2), FAST, trials=3, seed=5, n_jobs=3)
    for other in (b, c):
        assert other.to_dict() == a.to_dict()
        assert other.traces_csv() == a.traces_csv()


def test_trial_seeds_distinct():
    seeds = trial_seeds(7, 10)
    assert len(set(seeds)) == 10
    assert seeds == trial_seeds(7, 10)
    assert trial_seeds(7, 3) == seeds[:3]


def test_depth_helps_on_oscillator():
    h = build(ModelSpec("oscillator1d", dft_index_base=0)).pauli
    cfg = SpsaConfig(max_iterations=200)

    def median_best(depth):
        return np.median([run_vqe(h, AnsatzSpec(2, depth), cfg, trials=1, seed=s).best_energy for s in range(10)])

    assert median_best(3) <= median_best(0) + 1e-9


def test_result_serialization():
    r = run_vqe(PauliSum(((1.0, "Z"),), 1), AnsatzSpec(1, 0), SpsaConfig(max_iterations=20), trials=2, seed=0)
    d = r.to_dict()
    assert d["trials"] == 2 and len(d["trial_energies"]) == 2
    assert d["ansatz"] == dataclasses.asdict(AnsatzSpec(1, 0))
    assert r.traces_csv().splitlines()[0] == "trial,iteration,energy"
    assert len(r.traces_csv().splitlines()) == 41
    assert r.best_circuit.to_qasm().startswith("OPENQASM 2.0;")


def test_mismatched_qubits():
    with pytest.raises(ValueError):
        run_vqe(PauliSum(((1.0, "Z"),), 1), AnsatzSpec(2, 0), FAST)
    with pytest.raises(ValueError):
        run_vqe(PauliSum(((1.0, "Z"),), 1), AnsatzSpec(1, 0), FAST, trials=0)


def test_wheeler_dewitt_report_fields():
    record, result = wheeler_dewitt_report(
        paper_instance("string-dilaton"), opt=SpsaConfig(max_iterations=40), trials=2, seed=1
    )
    assert record["model"] == "string-dilaton"
    assert record["paper"]["exact"] == 6.159038648121874e-5
    assert record["paper"]["vqe"] == 0.10669043206316431
    assert record["variational_bound_ok"]
    assert record["exact_min"] <= record["vqe_best"]
    assert record["constraint_compatible"] == (abs(record["exact_nearest_zero"]) < 1e-3)
    assert set(record["rel_diff"]) == {
        "exact_min_vs_paper_exact",
        "exact_nearest_zero_vs_paper_exact",
        "vqe_mean_vs_paper_vqe",
    }
    assert record["conventions"]["dft_index_base"] == 1
    assert result.trials == 2
