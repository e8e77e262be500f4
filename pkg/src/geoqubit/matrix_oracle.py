"""Complex-matrix ground truth for the multi-qubit algebra.

Everything here is built from the four 2x2 Pauli matrices and Kronecker
products; nothing calls the geometric-algebra code, so the two routes stay
independent.  Qubit 1 is the leftmost tensor factor.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-13
JACOBI_SWEEPS = 100


class OracleError(ValueError):
    pass


def n_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise OracleError(f"dimension {dim} is not a power of 2")
    return n


@lru_cache(maxsize=None)
def product_basis(n: int) -> np.ndarray:
    """Stack of all ``4**n`` product-operator matrices, index digits base 4."""
    mats = np.ones((1, 1, 1), dtype=complex)
    for _ in range(n):
        mats = np.einsum("aij,bkl->abikjl", mats, np.asarray(PAULI)).reshape(
            mats.shape[0] * 4, mats.shape[1] * 2, mats.shape[2] * 2
        )
    mats.setflags(write=False)
    return mats


def represent_coeffs(coeffs: Sequence[complex], n: int) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex)
    if c.shape != (4 ** n,):
        raise OracleError("coefficient vector must have length 4**n")
    return np.tensordot(c, product_basis(n), axes=1)


def unrepresent_coeffs(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise OracleError("expected a square matrix")
    n = n_qubits(M.shape[0])
    # tr(P_a^dagger M) / 2^n, the Pauli products being Hermitian
    return np.einsum("aji,ij->a", product_basis(n), M) / M.shape[0]


def represent(a) -> np.ndarray:
    """Matrix of a :class:`~geoqubit.multiqubit.CorrelatedElement`."""
    return represent_coeffs(a.coeffs, a.n)


def unrepresent(M: np.ndarray):
    from .multiqubit import CorrelatedElement

    c = unrepresent_coeffs(M)
    return CorrelatedElement(n_qubits(np.shape(M)[0]), c)


def hermitian_eigen(M: np.ndarray, tol: float = JACOBI_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.

    Each pivot first removes the phase of the off-diagonal entry, then applies
    a real plane rotation.  Eigenvalues are returned ascending, with the
    eigenvectors as columns.
    """
    A = np.array(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise OracleError("expected a square matrix")
    scale = max(1.0, float(np.abs(A).max(initial=0.0)))
    if np.abs(A - A.conj().T).max(initial=0.0) > HERMITIAN_TOL * scale:
        raise OracleError("matrix is not Hermitian")
    A = (A + A.conj().T) / 2
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    upper = np.triu_indices(n, 1)
    for _ in range(JACOBI_SWEEPS):
        off = np.sqrt(2.0) * np.linalg.norm(A[upper])
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = abs(A[p, q])
                if b < 1e-300:
                    continue
                ph = A[p, q] / b
                theta = 0.5 * np.arctan2(2 * b, (A[q, q] - A[p, p]).real)
                c, s = np.cos(theta), np.sin(theta)
                # G = diag(1, conj(ph)) applied on (p, q), then the real rotation
                g = np.array([[c, s], [-s * np.conj(ph), c * np.conj(ph)]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ g
                A[idx, :] = g.conj().T @ A[idx, :]
                V[:, idx] = V[:, idx] @ g
                A[p, q] = A[q, p] = 0.0
    else:
        raise OracleError("Jacobi iteration did not converge")
    w = np.diag(A).real
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def _as_matrix_map(ch) -> Callable[[np.ndarray], np.ndarray]:
    if hasattr(ch, "matrix_map"):
        return ch.matrix_map()
    if callable(ch):
        return ch
    ks = [np.asarray(k, dtype=complex) for k in ch]
    return lambda X: sum(k @ X @ k.conj().T for k in ks)


def choi_matrix(ch) -> np.ndarray:
    """``sum_ij Omega(|i><j|) (x) |i><j|`` for a single-qubit map.

    ``ch`` may be a list of 2x2 Kraus matrices, a callable on 2x2 matrices,
    or any object providing ``matrix_map()``.
    """
    f = _as_matrix_map(ch)
    out = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            E = np.zeros((2, 2), dtype=complex)
            E[i, j] = 1.0
            out += np.kron(np.asarray(f(E), dtype=complex), E)
    return out
