"""Discretized position/momentum operators on a 2**n point grid.

Operators are plain ``numpy`` complex arrays. Basis index ``j`` of a
multi-slot operator is read big-endian: slot 0 is the leftmost Kronecker
factor and qubit 0 is the most significant bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._validation import num_qubits_for
from .exceptions import NonFiniteValue

__all__ = [
    "Grid",
    "default_spacing",
    "position_operator",
    "dft_matrix",
    "momentum_operator",
    "function_of_position",
    "embed",
]


def default_spacing(num_points: int) -> float:
    """sqrt(2*pi)/N, the spacing that reproduces the reference oscillator table."""
    return math.sqrt(2.0 * math.pi) / num_points


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D grid with ``num_points = 2**num_qubits`` points.

    ``point(j) = (j - N/2 + offset) * spacing``. An offset of 0.5 gives a
    half-integer grid that avoids the origin.
    """

    num_points: int = 4
    spacing: float | None = None
    offset: float = 0.0

    def __post_init__(self):
        num_qubits_for(self.num_points)
        if self.num_points < 2:
            raise ValueError("num_points must be at least 2")
        if self.spacing is None:
            object.__setattr__(self, "spacing", default_spacing(self.num_points))
        if not (math.isfinite(self.spacing) and self.spacing > 0):
            raise ValueError(f"spacing must be positive and finite, got {self.spacing}")
        if not math.isfinite(self.offset):
            raise ValueError("offset must be finite")

    @classmethod
    def from_qubits(cls, num_qubits: int, spacing: float | None = None, offset: float = 0.0) -> "Grid":
        return cls(2**num_qubits, spacing, offset)

    @property
    def num_qubits(self) -> int:
        return num_qubits_for(self.num_points)

    def point(self, j: int) -> float:
        return (j - self.num_points / 2 + self.offset) * self.spacing

    @property
    def points(self) -> np.ndarray:
        j = np.arange(self.num_points)
        return (j - self.num_points / 2 + self.offset) * self.spacing


def position_operator(grid: Grid) -> np.ndarray:
    return np.diag(grid.points.astype(np.complex128))


def dft_matrix(num_points: int, index_base: int = 0) -> np.ndarray:
    """Unitary DFT matrix ``F[j, k] = exp(2 pi i j k / N) / sqrt(N)``.

    ``index_base`` shifts the row/column labels: with ``index_base=1`` the
    labels run 1..N instead of 0..N-1. The two choices differ by a diagonal
    phase, so momentum operators built from either share one spectrum.
    """
    num_qubits_for(num_points)
    if index_base not in (0, 1):
        raise ValueError("index_base must be 0 or 1")
    j = np.arange(num_points) + index_base
    # reduce j*k mod N first so large N keeps full phase precision
    phase = 2.0 * np.pi * (np.outer(j, j) % num_points) / num_points
    return np.exp(1j * phase) / math.sqrt(num_points)


def momentum_operator(grid: Grid, index_base: int = 0) -> np.ndarray:
    """``F^-1 x F`` with ``F = dft_matrix(N, index_base)``."""
    f = dft_matrix(grid.num_points, index_base)
    p = f.conj().T @ position_operator(grid) @ f
    # symmetrize away the O(eps) rounding so downstream Hermitian checks are exact
    return (p + p.conj().T) / 2


def function_of_position(grid: Grid, f: Callable[[float], float]) -> np.ndarray:
    """Diagonal operator ``diag(f(point(j)))``.

    Raises NonFiniteValue when ``f`` is singular on the grid, e.g. ``1/a**2``
    on a grid that contains the origin.
    """
    values = []
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for x in grid.points:
            try:
                v = float(f(float(x)))
            except (ZeroDivisionError, OverflowError, ValueError) as exc:
                raise NonFiniteValue(f"f({x!r}) is not finite: {exc}") from exc
            if not math.isfinite(v):
                raise NonFiniteValue(f"f({x!r}) = {v} is not finite")
            values.append(v)
    return np.diag(np.asarray(values, dtype=np.complex128))


def embed(op, dim_index: int, num_dims: int) -> np.ndarray:
    """Kronecker ``I x ... x op x ... x I`` with ``op`` in slot ``dim_index``."""
    if not 0 <= dim_index < num_dims:
        raise ValueError(f"dim_index {dim_index} out of range for {num_dims} slots")
    op = np.asarray(op, dtype=np.complex128)
    eye = np.eye(op.shape[0], dtype=np.complex128)
    out = np.ones((1, 1), dtype=np.complex128)
    for slot in range(num_dims):
        out = np.kron(out, op if slot == dim_index else eye)
    return out
