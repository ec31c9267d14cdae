"""Dense complex-Hermitian eigensolver.

Householder reflections reduce the matrix to Hermitian tridiagonal form, a
diagonal phase makes the off-diagonal real, and implicit-shift QL sweeps
finish the job. Matrices here are at most a few hundred wide, so the code
favours clarity over blocking.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_operator
from .exceptions import NoConvergence

__all__ = [
    "EigResult",
    "eigh",
    "eigvalsh",
    "min_eigenvalue",
    "nearest_zero_eigenvalue",
    "tridiagonalize",
]

MAX_QL_ITERATIONS = 60
HERMITIAN_TOL = 1e-10
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class EigResult:
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def nearest_zero(self) -> float:
        return float(self.eigenvalues[np.argmin(np.abs(self.eigenvalues))])

    def to_json(self, **kwargs) -> str:
        return json.dumps([float(v) for v in self.eigenvalues], **kwargs)


def tridiagonalize(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(d, e, Q)`` with ``A = Q T Q^H`` and T real symmetric tridiagonal.

    ``d`` is the diagonal, ``e[i] = T[i, i+1]`` (``e[-1] = 0``) and ``Q`` is unitary.
    """
    t = np.array(a, dtype=np.complex128)
    n = t.shape[0]
    q = np.eye(n, dtype=np.complex128)
    for k in range(n - 2):
        x = t[k + 1 :, k].copy()
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            continue
        # alpha = -e^{i arg x0} |x| avoids cancellation in v = x - alpha e1
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        alpha = -phase * xnorm
        v = x
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        # P = I - 2 v v^H acting on rows/cols k+1.. ; T <- P T P
        block = t[k + 1 :, :]
        block -= 2.0 * np.outer(v, v.conj() @ block)
        block = t[:, k + 1 :]
        block -= 2.0 * np.outer(block @ v, v.conj())
        qb = q[:, k + 1 :]
        qb -= 2.0 * np.outer(qb @ v, v.conj())

    d = np.real(np.diag(t)).copy()
    off = np.diag(t, 1)  # T[i, i+1]
    # D^H T D with D = diag(phases) turns every T[i, i+1] into |T[i, i+1]|
    phases = np.ones(n, dtype=np.complex128)
    for i in range(n - 1):
        mag = abs(off[i])
        # T[i, i+1] -> conj(ph_i) T[i, i+1] ph_{i+1}; pick ph_{i+1} to cancel the phase
        phases[i + 1] = phases[i] * (np.conj(off[i]) / mag if mag > 0 else 1.0)
    e = np.zeros(n)
    e[: n - 1] = np.abs(off)
    return d, e, q * phases[np.newaxis, :]


def _tql(d: np.ndarray, e: np.ndarray, z: np.ndarray) -> None:
    """Implicit-shift QL on a real symmetric tridiagonal matrix, in place.

    Rotations are accumulated into the columns of ``z``.
    """
    n = d.size
    for l in range(n):
        iterations = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            iterations += 1
            if iterations > MAX_QL_ITERATIONS:
                raise NoConvergence(f"QL iteration did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi1 = z[:, i + 1].copy()
                z[:, i + 1] = s * z[:, i] + c * zi1
                z[:, i] = c * z[:, i] - s * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0


def _orthonormalize(vectors: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt on the columns, done twice for stability."""
    out = vectors.copy()
    for _ in range(2):
        for j in range(out.shape[1]):
            for i in range(j):
                out[:, j] -= (out[:, i].conj() @ out[:, j]) * out[:, i]
            out[:, j] /= np.linalg.norm(out[:, j])
    return out


def _canonical_phase(v: np.ndarray) -> tuple[np.ndarray, int]:
    """Rotate ``v`` so its largest component is real positive; return that index."""
    k = int(np.argmax(np.abs(v) - 1e-12 * np.arange(v.size)))
    return v * (abs(v[k]) / v[k]), k


def eigh(op) -> EigResult:
    """Full spectrum of a Hermitian matrix.

    Eigenvalues ascend. Within a degenerate cluster the eigenvectors are
    re-orthonormalized and ordered by the index of their largest component.
    """
    a = check_operator(op, hermitian=True, atol=HERMITIAN_TOL, power_of_two=False)
    a = (a + a.conj().T) / 2
    n = a.shape[0]
    if n == 1:
        return EigResult(np.real(a[0]).copy(), np.ones((1, 1), dtype=np.complex128))
    d, e, z = tridiagonalize(a)
    _tql(d, e, z)

    order = np.argsort(d, kind="stable")
    vals = d[order]
    vecs = z[:, order]
    scale = max(1.0, float(np.max(np.abs(vals))))
    start = 0
    for stop in range(1, n + 1):
        if stop < n and vals[stop] - vals[stop - 1] <= DEGENERACY_TOL * scale:
            continue
        if stop - start > 1:
            vecs[:, start:stop] = _orthonormalize(vecs[:, start:stop])
        cols = [_canonical_phase(vecs[:, j]) for j in range(start, stop)]
        # stable sort keeps QL order for equal keys; only reorders inside a cluster
        cols.sort(key=lambda item: item[1])
        for offset, (v, _) in enumerate(cols):
            vecs[:, start + offset] = v
        start = stop
    return EigResult(vals, vecs)


def eigvalsh(op) -> np.ndarray:
    return eigh(op).eigenvalues


def min_eigenvalue(op) -> float:
    return eigh(op).min


def nearest_zero_eigenvalue(op) -> float:
    return eigh(op).nearest_zero
