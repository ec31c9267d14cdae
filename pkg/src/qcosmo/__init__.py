"""Minisuperspace Wheeler-DeWitt Hamiltonians on qubit grids, solved exactly and by VQE."""

from .ansatz import AnsatzSpec
from .eigensolver import EigResult, eigh, min_eigenvalue, nearest_zero_eigenvalue
from .estimators import VQE, ExactEigensolver, PauliDecomposer
from .grid import Grid, dft_matrix, embed, function_of_position, momentum_operator, position_operator
from .models import ModelSpec, build, paper_instance
from .pauli import PauliSum, decompose, reconstruct, tensor_extend
from .simulator import Circuit, Gate, expectation, run, sample, zero_state
from .spsa import SpsaConfig, minimize
from .vqe import VqeResult, run_vqe, wheeler_dewitt_report

__version__ = "0.1.0"

__all__ = [
    "AnsatzSpec",
    "Circuit",
    "EigResult",
    "ExactEigensolver",
    "Gate",
    "Grid",
    "ModelSpec",
    "PauliDecomposer",
    "PauliSum",
    "SpsaConfig",
    "VQE",
    "VqeResult",
    "build",
    "decompose",
    "dft_matrix",
    "eigh",
    "embed",
    "expectation",
    "function_of_position",
    "min_eigenvalue",
    "minimize",
    "momentum_operator",
    "nearest_zero_eigenvalue",
    "paper_instance",
    "position_operator",
    "reconstruct",
    "run",
    "run_vqe",
    "sample",
    "tensor_extend",
    "wheeler_dewitt_report",
    "zero_state",
]
