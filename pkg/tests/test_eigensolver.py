import numpy as np
import pytest

from qcosmo.eigensolver import eigh, min_eigenvalue, nearest_zero_eigenvalue, tridiagonalize
from qcosmo.exceptions import NotHermitian
from qcosmo.grid import Grid, momentum_operator, position_operator
from qcosmo.pauli import pauli_matrix

from conftest import random_hermitian


def faddeev_leverrier(a):
    """Characteristic polynomial coefficients (highest degree first) from matrix products only."""
    n = a.shape[0]
    coeffs = [1.0 + 0j]
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ m) / k)
    return np.array(coeffs)


def bisect_smallest_root(coeffs, lo, hi, steps=200):
    # smallest sign change on a fine scan, then bisection
    xs = np.linspace(lo, hi, 20001)
    vals = np.polyval(coeffs.real, xs)
    i = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0][0]
    a, b = xs[i], xs[i + 1]
    for _ in range(steps):
        mid = (a + b) / 2
        if np.sign(np.polyval(coeffs.real, mid)) == np.sign(np.polyval(coeffs.real, a)):
            a = mid
        else:
            b = mid
    return (a + b) / 2


def test_small_examples():
    np.testing.assert_allclose(eigh(np.diag([3.0, -1, 2, 0])).eigenvalues, [-1, 0, 2, 3])
    r = eigh(pauli_matrix("Y"))
    np.testing.assert_allclose(r.eigenvalues, [-1, 1], atol=1e-15)
    assert abs(np.vdot(r.eigenvectors[:, 0], r.eigenvectors[:, 1])) < 1e-15


def test_min_and_nearest_zero():
    d = np.diag([-2, 0.001, 5, 9])
    assert min_eigenvalue(d) == -2
    assert nearest_zero_eigenvalue(d) == 0.001
    d = np.diag([1.0, 2, 3, 4])
    assert min_eigenvalue(d) == 1 and nearest_zero_eigenvalue(d) == 1


def test_oscillator_min_against_characteristic_polynomial():
    g = Grid(4)
    x, p = position_operator(g), momentum_operator(g, 1)
    h = x @ x / 2 + p @ p / 2
    coeffs = faddeev_leverrier(h)
    assert np.max(np.abs(coeffs.imag)) < 1e-12
    oracle = bisect_smallest_root(coeffs, -1.0, 3.0)
    assert min_eigenvalue(h) == pytest.approx(oracle, abs=1e-10)
    assert oracle == pytest.approx(0.12325227395869817, abs=1e-12)


def test_random_suite(rng):
    for _ in range(200):
        n = int(rng.integers(2, 17))
        h = random_hermitian(rng, n)
        r = eigh(h)
        v, lam = r.eigenvectors, r.eigenvalues
        norm = np.linalg.norm(h, 2)
        assert np.all(np.diff(lam) >= 0)
        assert np.max(np.linalg.norm(h @ v - v * lam, axis=0)) < 1e-10 * norm
        assert np.max(np.abs(v.conj().T @ v - np.eye(n))) < 1e-10
        assert np.sum(lam) == pytest.approx(np.trace(h).real, abs=1e-8)
        assert np.sum(lam**2) == pytest.approx(np.sum(np.abs(h) ** 2), abs=1e-8)


def test_two_by_two_closed_form(rng):
    for _ in range(50):
        a, d = rng.normal(size=2)
        b = complex(*rng.normal(size=2))
        mean, rad = (a + d) / 2, np.sqrt(((a - d) / 2) ** 2 + abs(b) ** 2)
        got = eigh(np.array([[a, b], [b.conjugate(), d]])).eigenvalues
        np.testing.assert_allclose(got, [mean - rad, mean + rad], atol=1e-12)


def test_unitary_conjugation_invariance(rng):
    for n in (3, 8, 16):
        h = random_hermitian(rng, n)
        u, _ = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        np.testing.assert_allclose(eigh(u.conj().T @ h @ u).eigenvalues, eigh(h).eigenvalues, atol=1e-9)


def test_degenerate_clusters_are_orthonormal_and_ordered():
    h = np.kron(np.diag([1.0, 2.0]), np.eye(4))  # two 4-fold clusters
    r = eigh(h)
    np.testing.assert_allclose(r.eigenvalues, [1] * 4 + [2] * 4)
    np.testing.assert_allclose(r.eigenvectors.conj().T @ r.eigenvectors, np.eye(8), atol=1e-12)
    peaks = [int(np.argmax(np.abs(r.eigenvectors[:, j]))) for j in range(8)]
    assert peaks[:4] == sorted(peaks[:4]) and peaks[4:] == sorted(peaks[4:])
    r2 = eigh(h)
    np.testing.assert_array_equal(r.eigenvectors, r2.eigenvectors)


def test_tridiagonalize_reconstructs(rng):
    h = random_hermitian(rng, 7)
    d, e, q = tridiagonalize(h)
    t = np.diag(d) + np.diag(e[:-1], 1) + np.diag(e[:-1], -1)
    np.testing.assert_allclose(q @ t @ q.conj().T, h, atol=1e-12)
    assert np.all(e >= 0)


def test_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_spectrum_json_and_scalar():
    r = eigh(np.array([[5.0]]))
    assert r.min == 5 and r.to_json() == "[5.0]"
