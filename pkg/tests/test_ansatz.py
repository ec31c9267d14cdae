import math

import numpy as np
import pytest
from scipy.optimize import minimize as scipy_minimize

from qcosmo.ansatz import AnsatzSpec, bind, build, random_parameters
from qcosmo.pauli import decompose
from qcosmo.simulator import expectation, run, zero_state

from conftest import random_hermitian


def test_counts_full_entanglement():
    n, d = 4, 3
    circuit = bind(build(AnsatzSpec(n, d, "full")), np.zeros(n * (d + 1)))
    assert AnsatzSpec(n, d).parameter_count == 16
    assert circuit.count("RY") == 16
    assert circuit.count("CNOT") == d * n * (n - 1) // 2 == 18


def test_counts_linear_and_degenerate():
    assert bind(build(AnsatzSpec(4, 2, "linear")), np.zeros(12)).count("CNOT") == 6
    c = bind(build(AnsatzSpec(2, 0)), [0.1, 0.2])
    assert c.count("CNOT") == 0 and c.count("RY") == 2
    c = bind(build(AnsatzSpec(1, 5)), np.zeros(6))
    assert c.count("RY") == 6 and c.count("CNOT") == 0


def test_layer_layout():
    kinds = [g.kind for g in bind(build(AnsatzSpec(2, 1)), np.arange(4.0)).gates]
    assert kinds == ["RY", "RY", "CNOT", "RY", "RY"]
    angles = [g.angle for g in bind(build(AnsatzSpec(2, 1)), np.arange(4.0)).gates if g.kind == "RY"]
    assert angles == [0, 1, 2, 3]


def test_bind_examples():
    template = build(AnsatzSpec(3, 2))
    np.testing.assert_allclose(run(bind(template, np.zeros(9))), zero_state(3))
    np.testing.assert_allclose(run(bind(build(AnsatzSpec(1, 0)), [math.pi])), [0, 1], atol=1e-15)
    theta = np.linspace(-1, 1, 9)
    assert bind(template, theta) == bind(template, theta)
    with pytest.raises(ValueError):
        bind(template, np.zeros(8))


def test_spec_validation():
    with pytest.raises(ValueError):
        AnsatzSpec(2, -1)
    with pytest.raises(ValueError):
        AnsatzSpec(2, 1, "ring")


def test_random_parameters_range():
    theta = random_parameters(AnsatzSpec(4, 3), np.random.default_rng(0))
    assert theta.shape == (16,)
    assert np.all(np.abs(theta) <= math.pi)


def test_reaches_bell_state():
    template = build(AnsatzSpec(2, 1, "full"))
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)

    def infidelity(theta):
        return 1 - abs(np.vdot(bell, run(bind(template, theta)))) ** 2

    best = min(
        (scipy_minimize(infidelity, x0, method="BFGS") for x0 in np.random.default_rng(1).uniform(-3, 3, (5, 4))),
        key=lambda r: r.fun,
    )
    assert 1 - best.fun >= 1 - 1e-6


def test_parameter_shift_matches_finite_differences(rng):
    spec = AnsatzSpec(3, 2)
    template = build(spec)
    h = decompose(random_hermitian(rng, 8), 0.0)

    def energy(theta):
        return expectation(run(bind(template, theta)), h)

    for _ in range(3):
        theta = rng.uniform(-math.pi, math.pi, spec.parameter_count)
        step = 1e-5
        for i in range(spec.parameter_count):
            e = np.zeros_like(theta)
            e[i] = 1
            shift = (energy(theta + math.pi / 2 * e) - energy(theta - math.pi / 2 * e)) / 2
            fd = (energy(theta + step * e) - energy(theta - step * e)) / (2 * step)
            assert fd == pytest.approx(shift, abs=1e-6)
