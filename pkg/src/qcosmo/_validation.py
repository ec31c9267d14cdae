"""Input validation helpers, in the spirit of ``sklearn.utils.validation``."""

from __future__ import annotations

import numpy as np

from .exceptions import NotHermitian

HERMITIAN_ATOL = 1e-12


def num_qubits_for(dim: int) -> int:
    """Return n such that ``dim == 2**n``; raise ValueError otherwise."""
    dim = int(dim)
    if dim < 1 or dim & (dim - 1):
        raise ValueError(f"dimension {dim} is not a power of 2")
    return dim.bit_length() - 1


def check_operator(
    op, *, hermitian: bool = True, atol: float = HERMITIAN_ATOL, power_of_two: bool = True
) -> np.ndarray:
    """Validate a square (by default 2**n x 2**n) operator and return it as complex128.

    With ``hermitian=True`` the check is ``|A - A^H| <= atol * max(1, |A|_max)``
    entrywise, so large-magnitude Hamiltonians are not rejected for rounding.
    """
    arr = np.asarray(op, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if power_of_two:
        num_qubits_for(arr.shape[0])
    if not np.all(np.isfinite(arr)):
        raise ValueError("operator contains non-finite entries")
    if hermitian:
        scale = max(1.0, float(np.max(np.abs(arr))))
        dev = float(np.max(np.abs(arr - arr.conj().T)))
        if dev > atol * scale:
            raise NotHermitian(f"operator deviates from Hermitian by {dev:.3e}")
    return arr


def check_theta(theta, size: int) -> np.ndarray:
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.size != size:
        raise ValueError(f"expected {size} parameters, got {theta.size}")
    if not np.all(np.isfinite(theta)):
        raise ValueError("parameters must be finite")
    return theta


def check_hamiltonian(X, prune_threshold: float = 1e-10):
    """Accept a PauliSum, a Hermitian matrix or a ModelSpec; return ``(matrix, PauliSum)``."""
    from .models import ModelSpec, build
    from .pauli import PauliSum, decompose, reconstruct

    if isinstance(X, ModelSpec):
        built = build(X)
        return built.matrix, built.pauli
    if isinstance(X, PauliSum):
        return reconstruct(X), X
    matrix = check_operator(X)
    return matrix, decompose(matrix, prune_threshold)
