"""Pauli-basis decomposition of Hermitian operators.

A Pauli string is a label such as ``"XY"``; the leftmost label acts on
qubit 0 (the leftmost Kronecker factor). Coefficients come from the trace
inner product ``c_P = tr(P H) / 2**n``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from ._validation import check_operator, num_qubits_for
from .exceptions import NotHermitian

__all__ = [
    "PAULI_LABELS",
    "PauliSum",
    "pauli_matrix",
    "decompose",
    "reconstruct",
    "tensor_extend",
]

PAULI_LABELS = "IXYZ"
DEFAULT_PRUNE = 1e-10
IMAG_TOL = 1e-10

_SINGLE = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def _check_label(label: str) -> str:
    label = str(label).upper()
    if not label or any(ch not in PAULI_LABELS for ch in label):
        raise ValueError(f"invalid Pauli string {label!r}")
    return label


@lru_cache(maxsize=None)
def _pauli_matrix_cached(label: str) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for ch in label:
        out = np.kron(out, _SINGLE[ch])
    out.setflags(write=False)
    return out


def pauli_matrix(label: str) -> np.ndarray:
    """Dense matrix of a Pauli string (a read-only cached array)."""
    return _pauli_matrix_cached(_check_label(label))


@dataclass(frozen=True)
class PauliSum:
    """Real-weighted sum of Pauli strings.

    ``terms`` is a tuple of ``(coeff, label)`` pairs kept sorted by label
    (I < X < Y < Z) with duplicates merged.
    """

    terms: tuple[tuple[float, str], ...] = ()
    num_qubits: int = 1
    prune_threshold: float = field(default=DEFAULT_PRUNE, compare=False)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be >= 1")
        merged: dict[str, float] = {}
        for coeff, label in self.terms:
            label = _check_label(label)
            if len(label) != self.num_qubits:
                raise ValueError(
                    f"string {label!r} has {len(label)} labels, expected {self.num_qubits}"
                )
            c = complex(coeff)
            if abs(c.imag) > IMAG_TOL:
                raise NotHermitian(f"coefficient of {label} has imaginary part {c.imag:.3e}")
            merged[label] = merged.get(label, 0.0) + c.real
        terms = tuple(
            (float(c), lab)
            for lab, c in sorted(merged.items())
            if abs(c) > self.prune_threshold
        )
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_dict(cls, mapping: dict[str, float], prune_threshold: float = DEFAULT_PRUNE) -> "PauliSum":
        if not mapping:
            raise ValueError("cannot infer num_qubits from an empty mapping")
        n = len(next(iter(mapping)))
        return cls(tuple((c, lab) for lab, c in mapping.items()), n, prune_threshold)

    def to_dict(self) -> dict[str, float]:
        return {label: coeff for coeff, label in self.terms}

    @property
    def labels(self) -> list[str]:
        return [label for _, label in self.terms]

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([c for c, _ in self.terms], dtype=float)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if not isinstance(other, PauliSum):
            return NotImplemented
        if other.num_qubits != self.num_qubits:
            raise ValueError("cannot add PauliSums on different qubit counts")
        return PauliSum(
            self.terms + other.terms,
            self.num_qubits,
            min(self.prune_threshold, other.prune_threshold),
        )

    def scale(self, factor: float) -> "PauliSum":
        return PauliSum(tuple((factor * c, lab) for c, lab in self.terms), self.num_qubits, self.prune_threshold)

    def to_matrix(self) -> np.ndarray:
        return reconstruct(self)

    # -- interchange format: JSON array of {"coeff": float, "paulis": "XY.."}
    def to_records(self) -> list[dict]:
        return [{"coeff": c, "paulis": lab} for c, lab in self.terms]

    @classmethod
    def from_records(cls, records: Iterable[dict], num_qubits: int | None = None) -> "PauliSum":
        records = list(records)
        if num_qubits is None:
            if not records:
                raise ValueError("num_qubits is required for an empty term list")
            num_qubits = len(records[0]["paulis"])
        return cls(tuple((float(r["coeff"]), r["paulis"]) for r in records), num_qubits, 0.0)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_records(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "PauliSum":
        data = json.loads(text)
        if isinstance(data, dict):
            data = data["terms"]
        return cls.from_records(data)

    def table(self) -> str:
        """Human-readable term table, one ``coeff ( A ⊗ B )`` row per term."""
        rows = []
        for c, lab in self.terms:
            rows.append(f"{c:+.6g}\t( {' ⊗ '.join(lab)} )")
        return "\n".join(rows)


def decompose(op, prune_threshold: float = DEFAULT_PRUNE) -> PauliSum:
    """Expand a Hermitian matrix in the Pauli basis.

    Raises NotHermitian if any coefficient has an imaginary part above 1e-10.
    """
    if prune_threshold < 0:
        raise ValueError("prune_threshold must be >= 0")
    arr = check_operator(op, hermitian=False)
    n = num_qubits_for(arr.shape[0])
    norm = 2.0**n
    terms = []
    for letters in itertools.product(PAULI_LABELS, repeat=n):
        label = "".join(letters)
        # tr(P H) = sum_ij P_ji H_ij
        c = np.sum(_pauli_matrix_cached(label).T * arr) / norm
        if abs(c.imag) > IMAG_TOL:
            raise NotHermitian(f"coefficient of {label} has imaginary part {c.imag:.3e}")
        terms.append((c.real, label))
    return PauliSum(tuple(terms), n, prune_threshold)


def reconstruct(psum: PauliSum) -> np.ndarray:
    dim = 2**psum.num_qubits
    out = np.zeros((dim, dim), dtype=np.complex128)
    for c, label in psum.terms:
        out += c * _pauli_matrix_cached(label)
    return out


def tensor_extend(psum: PauliSum, slot: int, total_dims: int) -> PauliSum:
    """Pad every string with identity labels so it acts on ``slot`` of ``total_dims``."""
    if not 0 <= slot < total_dims:
        raise ValueError(f"slot {slot} out of range for {total_dims} slots")
    pad = "I" * psum.num_qubits
    terms = tuple(
        (c, pad * slot + label + pad * (total_dims - slot - 1)) for c, label in psum.terms
    )
    return PauliSum(terms, psum.num_qubits * total_dims, psum.prune_threshold)
