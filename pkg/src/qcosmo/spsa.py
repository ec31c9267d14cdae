"""Simultaneous perturbation stochastic approximation (SPSA).

Each iteration draws a Rademacher vector ``delta`` and estimates the whole
gradient from two evaluations::

    g_i = (f(theta + c_k delta) - f(theta - c_k delta)) / (2 c_k delta_i)
    theta <- theta - a_k g

with gains ``a_k = a / (k + 1 + A)**alpha`` and ``c_k = c / (k + 1)**gamma``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple

import numpy as np

from .exceptions import NonFiniteObjective, ZeroGradientRegion

__all__ = [
    "SpsaConfig",
    "OptimizationTrace",
    "SpsaResult",
    "gains",
    "spsa_gradient",
    "calibrate_step",
    "minimize",
]

Objective = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class SpsaConfig:
    max_iterations: int = 1000
    a: float = 0.2
    c: float = 0.1
    alpha: float = 0.602
    gamma: float = 0.101
    A: float | None = None  # None -> 0.01 * max_iterations
    seed: int = 0
    calibrate: bool = True
    target_update: float = 2 * math.pi / 10
    calibration_probes: int = 25
    check_every: int = 10

    def __post_init__(self):
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")
        if not (self.a > 0 and self.c > 0):
            raise ValueError("gains a and c must be positive")
        if self.A is not None and self.A < 0:
            raise ValueError("stability constant A must be >= 0")
        if self.check_every < 1 or self.calibration_probes < 1:
            raise ValueError("check_every and calibration_probes must be >= 1")

    @property
    def stability(self) -> float:
        return 0.01 * self.max_iterations if self.A is None else float(self.A)


def gains(config: SpsaConfig, k: int) -> tuple[float, float]:
    """Step and perturbation gains ``(a_k, c_k)`` at iteration ``k`` (0-based)."""
    a_k = config.a / (k + 1 + config.stability) ** config.alpha
    c_k = config.c / (k + 1) ** config.gamma
    return a_k, c_k


@dataclass
class OptimizationTrace:
    """Per-iteration objective estimates plus periodic parameter snapshots."""

    iterations: list[int] = field(default_factory=list)
    estimates: list[float] = field(default_factory=list)
    snapshots: list[tuple[int, np.ndarray]] = field(default_factory=list)
    checks: list[tuple[int, float]] = field(default_factory=list)
    a: float = float("nan")

    def __len__(self) -> int:
        return len(self.iterations)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["iteration", "energy"])
        for k, e in zip(self.iterations, self.estimates):
            writer.writerow([k, repr(float(e))])
        return buf.getvalue()


class SpsaResult(NamedTuple):
    theta: np.ndarray
    fun: float
    trace: OptimizationTrace


def _evaluate(objective: Objective, theta: np.ndarray) -> float:
    value = float(objective(theta))
    if not math.isfinite(value):
        raise NonFiniteObjective(f"objective returned {value}")
    return value


def _rademacher(rng: np.random.Generator, size: int) -> np.ndarray:
    return 2.0 * rng.integers(0, 2, size=size) - 1.0


def spsa_gradient(objective: Objective, theta, c_k: float, delta) -> np.ndarray:
    """Two-evaluation simultaneous-perturbation gradient estimate."""
    theta = np.asarray(theta, dtype=float)
    delta = np.asarray(delta, dtype=float)
    f_plus = _evaluate(objective, theta + c_k * delta)
    f_minus = _evaluate(objective, theta - c_k * delta)
    return (f_plus - f_minus) / (2.0 * c_k * delta)


def calibrate_step(
    objective: Objective,
    theta0,
    config: SpsaConfig,
    rng: np.random.Generator | None = None,
) -> float:
    """Choose ``a`` so the mean first-step update magnitude equals ``target_update``."""
    theta0 = np.asarray(theta0, dtype=float)
    if rng is None:
        rng = np.random.default_rng(config.seed)
    c0 = config.c
    total = 0.0
    for _ in range(config.calibration_probes):
        delta = _rademacher(rng, theta0.size)
        f_plus = _evaluate(objective, theta0 + c0 * delta)
        f_minus = _evaluate(objective, theta0 - c0 * delta)
        total += abs(f_plus - f_minus) / (2.0 * c0)
    mean = total / config.calibration_probes
    if mean == 0.0:
        raise ZeroGradientRegion("all calibration probes gave a zero gradient estimate")
    return config.target_update * (1.0 + config.stability) ** config.alpha / mean


def minimize(objective: Objective, theta0, config: SpsaConfig | None = None) -> SpsaResult:
    """Minimize ``objective`` starting at ``theta0``.

    The returned point is the best of the final iterate and the iterates
    checked every ``check_every`` steps; SPSA iterates jitter, so the last
    one is rarely the best one seen.
    """
    config = config or SpsaConfig()
    theta = np.array(theta0, dtype=float).reshape(-1)
    if not np.all(np.isfinite(theta)):
        raise ValueError("theta0 must be finite")
    rng = np.random.default_rng(config.seed)
    if config.calibrate:
        try:
            config = replace(config, a=calibrate_step(objective, theta, config, rng))
        except ZeroGradientRegion:
            # flat start: nothing to scale against, keep the configured gain
            pass

    trace = OptimizationTrace(a=config.a)
    best_theta = theta.copy()
    best_f = math.inf
    for k in range(config.max_iterations):
        if k % config.check_every == 0:
            f_mid = _evaluate(objective, theta)
            trace.checks.append((k, f_mid))
            trace.snapshots.append((k, theta.copy()))
            if f_mid < best_f:
                best_f, best_theta = f_mid, theta.copy()
        a_k, c_k = gains(config, k)
        delta = _rademacher(rng, theta.size)
        f_plus = _evaluate(objective, theta + c_k * delta)
        f_minus = _evaluate(objective, theta - c_k * delta)
        grad = (f_plus - f_minus) / (2.0 * c_k * delta)
        theta = theta - a_k * grad
        trace.iterations.append(k)
        trace.estimates.append(0.5 * (f_plus + f_minus))

    f_final = _evaluate(objective, theta)
    trace.checks.append((config.max_iterations, f_final))
    if f_final <= best_f:
        best_f, best_theta = f_final, theta.copy()
    return SpsaResult(best_theta, best_f, trace)
