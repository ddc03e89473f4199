"""Numerical substrate: kernels, seeded randomness, eigensolvers and PCA."""

from .eigen import (
    EigenSpectrum,
    eigenbasis,
    eigenpair_residual,
    eigenvalues,
    inverse_iteration,
    unique_moduli,
)
from .kernels import (
    add,
    as_matrix,
    log_softmax_rows,
    matmul,
    mul,
    relu,
    sigmoid,
    softmax_rows,
    tanh,
    transpose,
)
from .pca import pca_project, symmetric_eigen
from .rng import Rng

__all__ = [
    "EigenSpectrum",
    "Rng",
    "add",
    "as_matrix",
    "eigenbasis",
    "eigenpair_residual",
    "eigenvalues",
    "inverse_iteration",
    "log_softmax_rows",
    "matmul",
    "mul",
    "pca_project",
    "relu",
    "sigmoid",
    "softmax_rows",
    "symmetric_eigen",
    "tanh",
    "transpose",
    "unique_moduli",
]
