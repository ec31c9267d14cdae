"""Ry variational form: RY layers interleaved with CNOT entanglers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import check_theta
from .simulator import Circuit, Gate

__all__ = ["AnsatzSpec", "AnsatzTemplate", "build", "bind", "random_parameters"]

ENTANGLEMENTS = ("full", "linear")


@dataclass(frozen=True)
class AnsatzSpec:
    num_qubits: int
    depth: int = 3
    entanglement: str = "full"

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be >= 1")
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.entanglement not in ENTANGLEMENTS:
            raise ValueError(f"entanglement must be one of {ENTANGLEMENTS}")

    @property
    def parameter_count(self) -> int:
        return self.num_qubits * (self.depth + 1)


@dataclass(frozen=True)
class AnsatzTemplate:
    """Gate skeleton; ``slots[i]`` is ``("RY", qubit, param_index)`` or ``("CNOT", control, target)``."""

    spec: AnsatzSpec
    slots: tuple[tuple[str, int, int], ...]

    @property
    def num_qubits(self) -> int:
        return self.spec.num_qubits

    @property
    def parameter_count(self) -> int:
        return self.spec.parameter_count


def _entangler(n: int, entanglement: str) -> list[tuple[int, int]]:
    if entanglement == "linear":
        return [(q, q + 1) for q in range(n - 1)]
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def build(spec: AnsatzSpec) -> AnsatzTemplate:
    """Initial RY layer, then ``depth`` repetitions of [CNOT block, RY layer]."""
    n = spec.num_qubits
    slots = []
    k = 0
    for layer in range(spec.depth + 1):
        if layer:
            slots.extend(("CNOT", c, t) for c, t in _entangler(n, spec.entanglement))
        for q in range(n):
            slots.append(("RY", q, k))
            k += 1
    return AnsatzTemplate(spec, tuple(slots))


def bind(template: AnsatzTemplate, theta) -> Circuit:
    theta = check_theta(theta, template.parameter_count)
    gates = []
    for kind, a, b in template.slots:
        if kind == "RY":
            gates.append(Gate("RY", a, angle=float(theta[b])))
        else:
            gates.append(Gate("CNOT", b, control=a))
    return Circuit(template.num_qubits, tuple(gates))


def random_parameters(spec: AnsatzSpec, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw from [-pi, pi) for every parameter."""
    return rng.uniform(-np.pi, np.pi, size=spec.parameter_count)
