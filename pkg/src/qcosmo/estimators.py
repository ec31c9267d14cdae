"""scikit-learn style wrappers around the functional API.

``fit`` takes a Hamiltonian (PauliSum, Hermitian matrix or ModelSpec) in
place of a design matrix. Hyperparameters live in ``__init__`` and are
exposed through ``get_params``/``set_params``; fitted state ends in ``_``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_hamiltonian, check_operator
from .ansatz import AnsatzSpec
from .eigensolver import eigh
from .pauli import DEFAULT_PRUNE, PauliSum, decompose, reconstruct
from .simulator import run
from .spsa import SpsaConfig
from .vqe import run_vqe

__all__ = ["PauliDecomposer", "ExactEigensolver", "VQE"]


class PauliDecomposer(TransformerMixin, BaseEstimator):
    """Matrix -> PauliSum transformer; ``inverse_transform`` reconstructs.

    :param prune_threshold: drop terms with ``|coeff|`` at or below this value
    """

    def __init__(self, prune_threshold=DEFAULT_PRUNE):
        self.prune_threshold = prune_threshold

    def fit(self, X, y=None):
        self.num_qubits_ = int(np.log2(check_operator(X, hermitian=False).shape[0]))
        return self

    def transform(self, X):
        check_is_fitted(self, "num_qubits_")
        return decompose(X, self.prune_threshold)

    def inverse_transform(self, X):
        return reconstruct(X)


class ExactEigensolver(BaseEstimator):
    """Full diagonalization; mirrors the VQE estimator's fitted attributes."""

    def fit(self, X, y=None):
        matrix, _ = check_hamiltonian(X)
        result = eigh(matrix)
        self.eigenvalues_ = result.eigenvalues
        self.eigenvectors_ = result.eigenvectors
        self.energy_ = result.min
        self.nearest_zero_ = result.nearest_zero
        return self

    def score(self, X, y=None):
        """Negative minimum eigenvalue, so higher is better as sklearn expects."""
        check_is_fitted(self, "energy_")
        return -self.energy_


class VQE(BaseEstimator):
    """Variational quantum eigensolver with an Ry ansatz and SPSA.

    After ``fit``: ``energy_`` (best trial energy), ``energy_mean_``,
    ``energy_std_``, ``theta_``, ``circuit_``, ``state_`` and the full
    ``result_`` record.
    """

    def __init__(
        self,
        depth=3,
        entanglement="full",
        max_iterations=1000,
        a=0.2,
        c=0.1,
        alpha=0.602,
        gamma=0.101,
        stability=None,
        calibrate=True,
        trials=10,
        random_state=0,
        n_jobs=1,
    ):
        self.depth = depth
        self.entanglement = entanglement
        self.max_iterations = max_iterations
        self.a = a
        self.c = c
        self.alpha = alpha
        self.gamma = gamma
        self.stability = stability
        self.calibrate = calibrate
        self.trials = trials
        self.random_state = random_state
        self.n_jobs = n_jobs

    def _spsa_config(self) -> SpsaConfig:
        return SpsaConfig(
            max_iterations=self.max_iterations,
            a=self.a,
            c=self.c,
            alpha=self.alpha,
            gamma=self.gamma,
            A=self.stability,
            calibrate=self.calibrate,
        )

    def fit(self, X, y=None):
        _, pauli = check_hamiltonian(X)
        if not isinstance(self.random_state, (int, np.integer)):
            raise ValueError("random_state must be an integer seed")
        spec = AnsatzSpec(pauli.num_qubits, self.depth, self.entanglement)
        result = run_vqe(pauli, spec, self._spsa_config(), self.trials, int(self.random_state), n_jobs=self.n_jobs)
        self.hamiltonian_ = pauli
        self.result_ = result
        self.energy_ = result.best_energy
        self.energy_mean_ = result.energy_mean
        self.energy_std_ = result.energy_std
        self.theta_ = result.best_theta
        self.circuit_ = result.best_circuit
        self.state_ = run(result.best_circuit)
        return self

    def score(self, X=None, y=None):
        check_is_fitted(self, "energy_")
        return -self.energy_
