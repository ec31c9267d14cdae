"""Grid Hamiltonians: oscillator calibration cases and four minisuperspace models.

Every cosmological model has two degrees of freedom. Variable one lives on
tensor slot 0 (the leading qubits) and variable two on slot 1.

=====================  ==========  ==========  ==========================================
kind                   slot 0      slot 1      Hamiltonian
=====================  ==========  ==========  ==========================================
``bianchi-ix``         a           beta        -p_a^2 + p_b^2/(a^2+eps) + L a^4 - a^2 + g + 8 a^2 b^2
``higher-derivative``  x           y           -p_x^2/4 + p_y^2/4 - (y^2-x^2)/4 + x^2 (x-y)^2/(8 bt)
``string-dilaton``     z           Phi         -p_z^2/12 + p_Phi^2/16 + 2 L exp(-4 Phi)
``kaluza-klein``       q1          q2          N/(24 pi^2) [k (q1 - q2) + p_1^2 - p_2^2]
=====================  ==========  ==========  ==========================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, NamedTuple

import numpy as np

from ._validation import check_operator
from .exceptions import ConfigError, MissingParameter, NonFiniteValue
from .grid import Grid, embed, function_of_position, momentum_operator, position_operator
from .pauli import DEFAULT_PRUNE, PauliSum, decompose

__all__ = [
    "MODEL_KINDS",
    "COSMOLOGICAL_KINDS",
    "PAPER_PARAMETERS",
    "PAPER_RESULTS",
    "ModelSpec",
    "BuiltModel",
    "build",
    "paper_instance",
    "normalize_kind",
]

COSMOLOGICAL_KINDS = ("bianchi-ix", "higher-derivative", "string-dilaton", "kaluza-klein")
MODEL_KINDS = ("oscillator1d", "oscillator2d") + COSMOLOGICAL_KINDS + ("z-test",)

REQUIRED = {
    "oscillator1d": (),
    "oscillator2d": (),
    "bianchi-ix": ("lambda", "gamma"),
    "higher-derivative": ("beta_tilde",),
    "string-dilaton": ("lambda",),
    "kaluza-klein": ("k",),
    "z-test": (),
}
OPTIONAL_DEFAULTS = {"kaluza-klein": {"lapse": 1.0}}

VARIABLES = {
    "oscillator1d": ("x",),
    "oscillator2d": ("x", "y"),
    "bianchi-ix": ("a", "beta"),
    "higher-derivative": ("x", "y"),
    "string-dilaton": ("z", "Phi"),
    "kaluza-klein": ("q1", "q2"),
    "z-test": ("qubit",),
}

PAPER_PARAMETERS = {
    "bianchi-ix": {"lambda": 2.480000000000011, "gamma": 0.99},
    "higher-derivative": {"beta_tilde": 0.042808219},
    "string-dilaton": {"lambda": 0.581},
    "kaluza-klein": {"k": 1e-6, "lapse": 1.0},
}

# reference (VQE mean, VQE +-, exact eigensolver) triples
PAPER_RESULTS = {
    "bianchi-ix": {"vqe": 0.4829572576220993, "vqe_std": 0.12032107873580308, "exact": 2.0707928270104423e-5},
    "higher-derivative": {"vqe": -0.07876069717108591, "vqe_std": 1.3971389629283328, "exact": -1.6494040350599992},
    "string-dilaton": {"vqe": 0.10669043206316431, "vqe_std": 0.02731991298884283, "exact": 6.159038648121874e-5},
    "kaluza-klein": {"vqe": -0.03330932911207404, "vqe_std": 0.19977149262935648, "exact": -1.5714280000014587},
}

_ALIASES = {
    "oscillator1d": "oscillator1d",
    "oscillator2d": "oscillator2d",
    "bianchiix": "bianchi-ix",
    "higherderivative": "higher-derivative",
    "stringdilaton": "string-dilaton",
    "kaluzaklein": "kaluza-klein",
    "ztest": "z-test",
}


def normalize_kind(kind: str) -> str:
    """Map ``"BianchiIX"``, ``"bianchi_ix"`` etc. onto the canonical kind name."""
    key = "".join(ch for ch in str(kind).lower() if ch.isalnum())
    if key not in _ALIASES:
        raise ConfigError(f"unknown model {kind!r}; valid kinds: {', '.join(MODEL_KINDS)}")
    return _ALIASES[key]


@dataclass(frozen=True)
class ModelSpec:
    """Model kind, parameters and grid conventions.

    ``spacing=None`` resolves to sqrt(2 pi)/N. ``dft_index_base=1`` labels
    DFT rows/columns 1..N, which is the labelling under which the 1-D
    oscillator decomposes into the reference IY/XY strings; ``0`` gives a
    real-valued, spectrally identical Hamiltonian.
    """

    kind: str
    params: Mapping[str, float] = field(default_factory=dict)
    qubits_per_dim: int = 2
    spacing: float | None = None
    offset: float = 0.0
    epsilon: float = 1e-4
    dft_index_base: int = 1
    prune_threshold: float = DEFAULT_PRUNE

    def __post_init__(self):
        kind = normalize_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        params = dict(OPTIONAL_DEFAULTS.get(kind, {}))
        params.update({str(k): float(v) for k, v in dict(self.params).items()})
        object.__setattr__(self, "params", MappingProxyType(params))
        if self.qubits_per_dim < 1:
            raise ConfigError("qubits_per_dim must be >= 1")
        if self.epsilon < 0:
            raise ConfigError("epsilon must be >= 0")
        if self.dft_index_base not in (0, 1):
            raise ConfigError("dft_index_base must be 0 or 1")
        try:
            self.grid
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def grid(self) -> Grid:
        return Grid.from_qubits(self.qubits_per_dim, self.spacing, self.offset)

    @property
    def num_dims(self) -> int:
        return len(VARIABLES[self.kind])

    @property
    def num_qubits(self) -> int:
        if self.kind == "z-test":
            return 1
        return self.num_dims * self.qubits_per_dim

    def param(self, name: str) -> float:
        try:
            value = self.params[name]
        except KeyError:
            raise MissingParameter(f"model {self.kind!r} requires parameter {name!r}") from None
        if not math.isfinite(value):
            raise ConfigError(f"parameter {name!r} must be finite")
        return value

    def conventions(self) -> dict:
        grid = self.grid
        return {
            "kind": self.kind,
            "variables": list(VARIABLES[self.kind]),
            "params": dict(self.params),
            "qubits_per_dim": self.qubits_per_dim,
            "num_points": grid.num_points,
            "spacing": grid.spacing,
            "offset": grid.offset,
            "epsilon": self.epsilon,
            "dft_index_base": self.dft_index_base,
            "prune_threshold": self.prune_threshold,
            "qubit_order": "big-endian (qubit 0 = most significant bit, slot 0 = leading qubits)",
        }


class BuiltModel(NamedTuple):
    matrix: np.ndarray
    pauli: PauliSum
    conventions: dict


def _operators(spec: ModelSpec):
    grid = spec.grid
    x = position_operator(grid)
    p = momentum_operator(grid, spec.dft_index_base)
    return grid, x, p


def _oscillator_1d(x, p):
    return x @ x / 2 + p @ p / 2


def _matrix(spec: ModelSpec) -> np.ndarray:
    kind = spec.kind
    if kind == "z-test":
        return np.diag([1.0, -1.0]).astype(np.complex128)
    grid, x, p = _operators(spec)
    p2 = p @ p
    dim = grid.num_points
    eye = np.eye(dim, dtype=np.complex128)

    def slot(op, i):
        return embed(op, i, 2)

    if kind == "oscillator1d":
        return _oscillator_1d(x, p)
    if kind == "oscillator2d":
        h = _oscillator_1d(x, p)
        return slot(h, 0) + slot(h, 1)
    if kind == "bianchi-ix":
        lam, gam, eps = spec.param("lambda"), spec.param("gamma"), spec.epsilon
        inv_a2 = function_of_position(grid, lambda a: 1.0 / (a * a + eps))
        potential = function_of_position(grid, lambda a: lam * a**4 - a**2 + gam)
        x2 = x @ x
        return (
            -slot(p2, 0)
            + np.kron(inv_a2, p2)
            + np.kron(potential, eye)
            + 8.0 * np.kron(x2, x2)
        )
    if kind == "higher-derivative":
        bt = spec.param("beta_tilde")
        if bt == 0:
            raise NonFiniteValue("beta_tilde = 0 makes the coupling x^2 (x-y)^2 / (8 beta_tilde) singular")
        xs, ys = slot(x, 0), slot(x, 1)
        diff = xs - ys
        return (
            -slot(p2, 0) / 4
            + slot(p2, 1) / 4
            - (ys @ ys - xs @ xs) / 4
            + xs @ xs @ diff @ diff / (8.0 * bt)
        )
    if kind == "string-dilaton":
        lam = spec.param("lambda")
        expo = function_of_position(grid, lambda phi: 2.0 * lam * math.exp(-4.0 * phi))
        return -slot(p2, 0) / 12 + slot(p2, 1) / 16 + slot(expo, 1)
    if kind == "kaluza-klein":
        k, lapse = spec.param("k"), spec.param("lapse")
        q1, q2 = slot(x, 0), slot(x, 1)
        return lapse / (24 * math.pi**2) * (k * (q1 - q2) + slot(p2, 0) - slot(p2, 1))
    raise ConfigError(f"unhandled model kind {kind!r}")  # pragma: no cover


def build(spec: ModelSpec) -> BuiltModel:
    """Assemble the Hermitian matrix of ``spec`` and its Pauli decomposition."""
    for name in REQUIRED[spec.kind]:
        spec.param(name)
    matrix = _matrix(spec)
    if not np.all(np.isfinite(matrix)):
        raise NonFiniteValue(f"{spec.kind} Hamiltonian has non-finite entries")
    # entries are exact up to O(eps) rounding from the DFT products
    matrix = (matrix + matrix.conj().T) / 2
    check_operator(matrix)
    return BuiltModel(matrix, decompose(matrix, spec.prune_threshold), spec.conventions())


def paper_instance(kind: str, **overrides) -> ModelSpec:
    """Spec preloaded with the reference parameters and default grid conventions."""
    kind = normalize_kind(kind)
    if kind not in PAPER_PARAMETERS:
        raise ConfigError(f"no reference parameters for {kind!r}; choose from {', '.join(COSMOLOGICAL_KINDS)}")
    return ModelSpec(kind, dict(PAPER_PARAMETERS[kind]), **overrides)
