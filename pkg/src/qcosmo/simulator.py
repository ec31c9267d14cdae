"""Exact statevector simulator for few-qubit circuits.

States are 1-D complex arrays of length ``2**n``. Qubit 0 is the most
significant bit of the basis index, so ``|q0 q1 ...>`` reads left to right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exceptions import QubitMismatch
from .pauli import PauliSum

__all__ = [
    "MAX_QUBITS",
    "Gate",
    "Circuit",
    "zero_state",
    "apply",
    "run",
    "expectation",
    "sample",
    "reduced_purity",
]

MAX_QUBITS = 12
NORM_TOL = 1e-10

ROTATIONS = ("RX", "RY", "RZ")
FIXED = ("H", "X", "Y", "Z")
GATE_KINDS = ROTATIONS + FIXED + ("CNOT",)

_FIXED_MATRICES = {
    "H": np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def _rotation(kind: str, theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    if kind == "RY":
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    if kind == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    return np.array([[c - 1j * s, 0], [0, c + 1j * s]], dtype=np.complex128)


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    control: int | None = None
    angle: float | None = None

    def __post_init__(self):
        kind = self.kind.upper()
        if kind == "CX":
            kind = "CNOT"
        if kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if self.target < 0:
            raise ValueError("qubit indices must be non-negative")
        if kind == "CNOT":
            if self.control is None or self.control < 0:
                raise ValueError("CNOT requires a control qubit")
            if self.control == self.target:
                raise ValueError("control and target must differ")
        elif self.control is not None:
            raise ValueError(f"{kind} takes no control qubit")
        if kind in ROTATIONS:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{kind} requires a finite angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ValueError(f"{kind} takes no angle")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,) if self.control is None else (self.control, self.target)

    def matrix(self) -> np.ndarray:
        """2x2 unitary on the target (CNOT: the X applied when the control is set)."""
        if self.kind in ROTATIONS:
            return _rotation(self.kind, self.angle)
        if self.kind == "CNOT":
            return _FIXED_MATRICES["X"]
        return _FIXED_MATRICES[self.kind]

    def inverse(self) -> "Gate":
        if self.kind in ROTATIONS:
            return Gate(self.kind, self.target, angle=-self.angle)
        return self

    def qasm(self) -> str:
        if self.kind == "CNOT":
            return f"cx q[{self.control}],q[{self.target}];"
        if self.kind in ROTATIONS:
            return f"{self.kind.lower()}({self.angle!r}) q[{self.target}];"
        return f"{self.kind.lower()} q[{self.target}];"


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in 1..{MAX_QUBITS}")
        gates = tuple(self.gates)
        for g in gates:
            if max(g.qubits) >= self.num_qubits:
                raise ValueError(f"{g} addresses a qubit outside 0..{self.num_qubits - 1}")
        object.__setattr__(self, "gates", gates)

    def __len__(self):
        return len(self.gates)

    def count(self, kind: str) -> int:
        return sum(g.kind == kind.upper() for g in self.gates)

    def to_qasm(self) -> str:
        """OpenQASM 2.0 listing of the circuit."""
        lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{self.num_qubits}];"]
        lines.extend(g.qasm() for g in self.gates)
        return "\n".join(lines) + "\n"


def zero_state(num_qubits: int) -> np.ndarray:
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ValueError(f"num_qubits must be in 1..{MAX_QUBITS}, got {num_qubits}")
    psi = np.zeros(2**num_qubits, dtype=np.complex128)
    psi[0] = 1.0
    return psi


def _num_qubits(state: np.ndarray) -> int:
    n = state.size.bit_length() - 1
    if state.ndim != 1 or state.size != 2**n or n < 1:
        raise ValueError(f"state length {state.size} is not 2**n")
    return n


def apply(state, gate: Gate) -> np.ndarray:
    """Return a new state with ``gate`` applied; the input is not modified."""
    state = np.asarray(state, dtype=np.complex128)
    n = _num_qubits(state)
    if max(gate.qubits) >= n:
        raise ValueError(f"{gate} addresses a qubit outside 0..{n - 1}")
    psi = state.reshape((2,) * n)
    if gate.kind == "CNOT":
        out = psi.copy()
        idx = [slice(None)] * n
        idx[gate.control] = 1
        sub = out[tuple(idx)]
        # target axis index shifts down by one if the control axis precedes it
        t_axis = gate.target - (gate.control < gate.target)
        out[tuple(idx)] = np.flip(sub, axis=t_axis)
        return out.reshape(-1)
    out = np.tensordot(gate.matrix(), psi, axes=([1], [gate.target]))
    return np.moveaxis(out, 0, gate.target).reshape(-1)


def run(circuit: Circuit) -> np.ndarray:
    psi = zero_state(circuit.num_qubits)
    for gate in circuit.gates:
        psi = apply(psi, gate)
    return psi


@lru_cache(maxsize=256)
def _compiled(terms: tuple[tuple[float, str], ...], n: int):
    """Per-term flip permutation and phase arrays for vectorized expectations."""
    dim = 2**n
    basis = np.arange(dim)
    perms = np.empty((len(terms), dim), dtype=np.intp)
    phases = np.empty((len(terms), dim), dtype=np.complex128)
    for t, (_, label) in enumerate(terms):
        xmask = zmask = 0
        ny = 0
        for q, ch in enumerate(label):
            bit = 1 << (n - 1 - q)
            if ch in "XY":
                xmask |= bit
            if ch in "ZY":
                zmask |= bit
            ny += ch == "Y"
        parity = np.array([bin(b & zmask).count("1") & 1 for b in basis])
        # P|b> = i^nY (-1)^{popcount(b & z)} |b ^ x>
        perms[t] = basis ^ xmask
        phases[t] = (1j**ny) * (1 - 2 * parity)
    coeffs = np.array([c for c, _ in terms], dtype=float)
    return perms, phases, coeffs


def expectation(state, observable: PauliSum) -> float:
    """Exact ``<psi|H|psi>`` summed term by term over the Pauli strings."""
    state = np.asarray(state, dtype=np.complex128)
    n = _num_qubits(state)
    if observable.num_qubits != n:
        raise QubitMismatch(f"observable acts on {observable.num_qubits} qubits, state has {n}")
    if not observable.terms:
        return 0.0
    perms, phases, coeffs = _compiled(observable.terms, n)
    per_term = np.sum(state[perms].conj() * phases * state, axis=1)
    value = complex(coeffs @ per_term)
    scale = max(1.0, float(np.sum(np.abs(coeffs))))
    if abs(value.imag) > 1e-10 * scale:
        raise ArithmeticError(f"expectation has imaginary part {value.imag:.3e}")
    return value.real


def sample(state, shots: int, seed: int) -> dict[str, int]:
    """Multinomial measurement counts keyed by big-endian bitstrings."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    state = np.asarray(state, dtype=np.complex128)
    n = _num_qubits(state)
    probs = np.abs(state) ** 2
    probs /= probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, probs)
    return {format(i, f"0{n}b"): int(c) for i, c in enumerate(draws) if c}


def reduced_purity(state, qubit: int) -> float:
    """Purity tr(rho^2) of a single qubit's reduced density matrix."""
    state = np.asarray(state, dtype=np.complex128)
    n = _num_qubits(state)
    psi = np.moveaxis(state.reshape((2,) * n), qubit, 0).reshape(2, -1)
    rho = psi @ psi.conj().T
    return float(np.real(np.trace(rho @ rho)))
