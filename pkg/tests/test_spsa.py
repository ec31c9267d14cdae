import math

import numpy as np
import pytest

from qcosmo.exceptions import NonFiniteObjective, ZeroGradientRegion
from qcosmo.spsa import SpsaConfig, calibrate_step, gains, minimize, spsa_gradient


def sphere(theta):
    return float(np.sum(np.asarray(theta) ** 2))


def test_sphere_converges():
    result = minimize(sphere, [1.0, 1.0], SpsaConfig(max_iterations=300))
    assert np.linalg.norm(result.theta) < 0.1
    assert result.fun == pytest.approx(sphere(result.theta))
    assert len(result.trace) == 300


def test_constant_objective_never_moves():
    theta0 = np.array([0.3, -1.2, 2.0])
    result = minimize(lambda t: 4.2, theta0, SpsaConfig(max_iterations=50))
    np.testing.assert_array_equal(result.theta, theta0)
    for _, snap in result.trace.snapshots:
        np.testing.assert_array_equal(snap, theta0)
    assert result.fun == 4.2


def test_deterministic_per_seed():
    cfg = SpsaConfig(max_iterations=120, seed=11)
    a = minimize(sphere, [0.5, -0.7, 1.5], cfg)
    b = minimize(sphere, [0.5, -0.7, 1.5], cfg)
    assert a.trace.estimates == b.trace.estimates
    np.testing.assert_array_equal(a.theta, b.theta)
    c = minimize(sphere, [0.5, -0.7, 1.5], SpsaConfig(max_iterations=120, seed=12))
    assert c.trace.estimates != a.trace.estimates


def test_returns_best_checked_iterate():
    calls = []

    def noisy(theta):
        calls.append(theta.copy())
        return sphere(theta)

    result = minimize(noisy, [2.0, 2.0], SpsaConfig(max_iterations=55, check_every=10))
    checked = [f for _, f in result.trace.checks]
    assert result.fun == min(checked)
    assert [k for k, _ in result.trace.checks] == [0, 10, 20, 30, 40, 50, 55]


def test_calibration_scales_with_steepness():
    cfg = SpsaConfig(seed=3)
    steep = calibrate_step(lambda t: 1e6 * sphere(t), [1.0, 1.0], cfg)
    assert steep < cfg.a
    assert steep == calibrate_step(lambda t: 1e6 * sphere(t), [1.0, 1.0], cfg)
    gentle = calibrate_step(sphere, [1.0, 1.0], cfg)
    assert steep == pytest.approx(gentle * 1e-6, rel=1e-9)


def test_calibration_hits_target_update():
    # for linear f in 1-D every probe sees |f+ - f-| / 2c = slope, so a_0 |g| = target exactly
    cfg = SpsaConfig(max_iterations=100, seed=0)
    a = calibrate_step(lambda t: 3.0 * float(t[0]), np.zeros(1), cfg)
    a0 = a / (1 + cfg.stability) ** cfg.alpha
    assert a0 * 3 == pytest.approx(cfg.target_update, rel=1e-12)


def test_calibration_zero_gradient():
    with pytest.raises(ZeroGradientRegion):
        calibrate_step(lambda t: 1.0, [0.0, 0.0], SpsaConfig())


def test_gradient_estimate_unbiased_for_quadratic():
    a = np.array([[3.0, 0.4], [0.4, 1.5]])
    b = np.array([0.2, -0.7])

    def f(t):
        return 0.5 * t @ a @ t + b @ t

    theta = np.array([0.8, -0.3])
    estimates = [spsa_gradient(f, theta, 1e-3, d) for d in ([1, 1], [1, -1])]
    np.testing.assert_allclose(np.mean(estimates, axis=0), a @ theta + b, atol=1e-4)


def test_gains_strictly_decrease():
    cfg = SpsaConfig(max_iterations=500)
    seq = [gains(cfg, k) for k in range(500)]
    assert all(x[0] > y[0] and x[1] > y[1] for x, y in zip(seq, seq[1:]))
    assert cfg.stability == 5.0
    assert gains(cfg, 0) == (cfg.a / 6**0.602, cfg.c)


def test_non_finite_objective():
    with pytest.raises(NonFiniteObjective):
        minimize(lambda t: math.nan, [0.0], SpsaConfig(max_iterations=5, calibrate=False))


def test_trace_csv():
    result = minimize(sphere, [1.0], SpsaConfig(max_iterations=3))
    lines = result.trace.to_csv().splitlines()
    assert lines[0] == "iteration,energy"
    assert len(lines) == 4


def test_config_validation():
    with pytest.raises(ValueError):
        SpsaConfig(a=0)
    with pytest.raises(ValueError):
        SpsaConfig(A=-1)
