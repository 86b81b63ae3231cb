"""Numerical kernels: symmetric eigensolvers and Gauss-Legendre quadrature.

Thin, contract-checked wrappers around LAPACK (``numpy.linalg.eigh``,
``scipy.linalg.eigh_tridiagonal``) and ``numpy.polynomial.legendre.leggauss``.
Every decomposition is validated against the output contract (descending
eigenvalues, orthonormal columns, small residual) before it is returned, so a
silent solver defect cannot propagate into downstream verification.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .config import TOL


class NumericalFailure(RuntimeError):
    """An iterative kernel failed to converge or broke its output contract."""


class IllConditionedError(NumericalFailure):
    """Requested quantity is not resolvable in double precision."""


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes/weights on (-1, 1)."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return len(self.nodes)

    def scaled(self, halfwidth: float, center: float = 0.0) -> "QuadratureRule":
        """Rule for the interval [center - halfwidth, center + halfwidth]."""
        return QuadratureRule(center + halfwidth * self.nodes, halfwidth * self.weights)


@dataclass(frozen=True)
class SymTridiag:
    """Symmetric tridiagonal matrix given by its diagonal and off-diagonal."""

    diagonal: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        if len(self.offdiag) != max(len(self.diagonal) - 1, 0):
            raise ValueError("offdiag must have length n-1")

    @property
    def order(self) -> int:
        return len(self.diagonal)

    def dense(self) -> np.ndarray:
        n = self.order
        A = np.zeros((n, n))
        A[np.arange(n), np.arange(n)] = self.diagonal
        if n > 1:
            A[np.arange(n - 1), np.arange(1, n)] = self.offdiag
            A[np.arange(1, n), np.arange(n - 1)] = self.offdiag
        return A


@dataclass(frozen=True)
class EigenSystem:
    """Full spectral decomposition, eigenvalues descending.

    ``vectors[:, i]`` is the orthonormal eigenvector for ``values[i]``;
    ``residual_bound`` is the measured max column residual |A v - lambda v|.
    """

    values: np.ndarray
    vectors: np.ndarray
    method: str = "eigh"
    residual_bound: float = field(default=0.0)


def check_symmetric(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if A.shape[0] < 1:
        raise ValueError("matrix order must be >= 1")
    if not (A == A.T).all():
        raise ValueError("matrix must be exactly symmetric")
    return A


def _validated_system(A: np.ndarray, values: np.ndarray, vectors: np.ndarray,
                      method: str) -> EigenSystem:
    order = np.argsort(values, kind="stable")[::-1]
    values = values[order]
    vectors = vectors[:, order]
    n = len(values)
    gram_defect = np.max(np.abs(vectors.T @ vectors - np.eye(n)))
    if gram_defect > TOL.orthonormality:
        raise NumericalFailure(
            f"eigenvector orthonormality defect {gram_defect:.3e} exceeds "
            f"{TOL.orthonormality:.1e}")
    resid = np.max(np.linalg.norm(A @ vectors - vectors * values, axis=0))
    scale = max(np.max(np.abs(values)), 1e-300)
    if resid > TOL.eigen_residual * scale:
        raise NumericalFailure(
            f"eigen residual {resid:.3e} exceeds {TOL.eigen_residual:.1e} * |A|")
    return EigenSystem(values=values, vectors=vectors, method=method,
                       residual_bound=float(resid))


def eig_sym(A: np.ndarray) -> EigenSystem:
    """Spectral decomposition of a real symmetric matrix, descending order."""
    A = check_symmetric(A)
    try:
        values, vectors = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:  # LAPACK message carries the index
        raise NumericalFailure(f"symmetric eigensolver failed: {exc}") from exc
    return _validated_system(A, values, vectors, "eigh")


def eig_symtridiag(T: SymTridiag) -> EigenSystem:
    """Spectral decomposition of a symmetric tridiagonal matrix."""
    if T.order == 1:
        return EigenSystem(values=np.array([float(T.diagonal[0])]),
                           vectors=np.array([[1.0]]), method="tridiag",
                           residual_bound=0.0)
    try:
        values, vectors = eigh_tridiagonal(np.asarray(T.diagonal, dtype=float),
                                           np.asarray(T.offdiag, dtype=float))
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"tridiagonal eigensolver failed: {exc}") from exc
    return _validated_system(T.dense(), values, vectors, "tridiag")


def spectral_norm_sym(A: np.ndarray) -> float:
    """Largest |eigenvalue| of a symmetric matrix."""
    A = check_symmetric(A)
    try:
        values = np.linalg.eigvalsh(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"symmetric eigensolver failed: {exc}") from exc
    return float(np.max(np.abs(values)))


def gauss_legendre(order: int) -> QuadratureRule:
    """Gauss-Legendre rule on [-1, 1], exact for polynomials up to 2*order-1."""
    if int(order) != order or order < 1:
        raise ValueError(f"order must be an integer >= 1, got {order}")
    nodes, weights = np.polynomial.legendre.leggauss(int(order))
    # leggauss refines companion-matrix roots with one Newton step; its failure
    # mode is a malformed rule, so validate instead of trusting it blindly.
    if not (np.diff(nodes) > 0).all():
        raise NumericalFailure("quadrature nodes are not strictly increasing")
    if np.max(np.abs(nodes + nodes[::-1])) > TOL.node_symmetry:
        raise NumericalFailure("quadrature nodes are not symmetric about 0")
    if (weights <= 0).any() or abs(weights.sum() - 2.0) > TOL.weight_sum:
        raise NumericalFailure("quadrature weights are invalid")
    if nodes[0] <= -1.0 or nodes[-1] >= 1.0:
        raise NumericalFailure("quadrature nodes left (-1, 1)")
    return QuadratureRule(nodes, weights)


def snapped_floor(x: float, snap: float = 1e-9) -> int:
    """floor(x), treating values within ``snap`` of an integer as exact.

    Products such as 2*N*W evaluate to e.g. 35.99999999999999 in double
    precision when the intended value is 36; a plain floor would be off by one.
    """
    r = round(x)
    if abs(x - r) <= snap:
        return int(r)
    return int(np.floor(x))
