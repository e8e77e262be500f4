import numpy as np
import pytest

from conftest import random_element, random_hermitian
from geoqubit.matrix_oracle import (
    PAULI,
    OracleError,
    choi_matrix,
    hermitian_eigen,
    n_qubits,
    product_basis,
    represent,
    represent_coeffs,
    unrepresent,
)
from geoqubit.multiqubit import CorrelatedElement, density_from_ensemble, expectation, sigma


def test_represent_examples():
    assert np.array_equal(represent(sigma(1, 1, "z")), np.diag([1, -1]))
    iota = sigma(1, 1, "x") * sigma(1, 1, "y") * sigma(1, 1, "z")
    assert np.allclose(represent(iota), 1j * np.eye(2))
    # qubit 1 is the leftmost factor
    assert np.array_equal(represent(sigma(2, 1, "x")), np.kron(PAULI[1], PAULI[0]))


def test_multiplicative_and_dagger(rng):
    for n in (1, 2, 3):
        for _ in range(20):
            a, b = random_element(n, rng), random_element(n, rng)
            assert np.allclose(represent(a * b), represent(a) @ represent(b), atol=1e-12)
            assert np.allclose(represent(a.dagger), represent(a).conj().T, atol=1e-13)


def test_unrepresent(rng):
    assert unrepresent(np.eye(4)).allclose(CorrelatedElement.scalar(2, 1.0))
    perm = np.sqrt(1j) * np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    from geoqubit.gates import cnot

    assert unrepresent(perm).allclose(cnot(1, 2), 1e-14)
    for n in (1, 2, 3):
        M = rng.normal(size=(2 ** n, 2 ** n)) + 1j * rng.normal(size=(2 ** n, 2 ** n))
        assert np.allclose(represent(unrepresent(M)), M, atol=1e-12)
    with pytest.raises(OracleError):
        unrepresent(np.eye(3))
    with pytest.raises(OracleError):
        represent_coeffs(np.zeros(5), 1)


def test_n_qubits():
    assert n_qubits(8) == 3
    with pytest.raises(OracleError):
        n_qubits(6)


def test_product_basis_is_orthogonal():
    B = product_basis(2)
    G = np.einsum("aij,bij->ab", B.conj(), B)
    assert np.allclose(G, 4 * np.eye(16))


def test_hermitian_eigen_examples():
    w, V = hermitian_eigen(np.diag([1.0, -1.0]))
    assert np.allclose(w, [-1, 1])
    pt = 0.25 * (np.eye(4) - np.kron(PAULI[1], PAULI[1]) + np.kron(PAULI[2], PAULI[2]) - np.kron(PAULI[3], PAULI[3]))
    w, _ = hermitian_eigen(pt)
    assert np.allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)
    with pytest.raises(OracleError):
        hermitian_eigen(np.array([[0, 1], [0, 0]]))


def test_hermitian_eigen_residual(rng):
    for d in (2, 3, 4, 8, 16):
        for _ in range(5):
            A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            H = A + A.conj().T
            w, V = hermitian_eigen(H)
            assert np.all(np.diff(w) >= 0)
            assert np.abs(H @ V - V * w).max() <= 1e-10
            assert np.allclose(V.conj().T @ V, np.eye(d), atol=1e-12)
            assert np.allclose(w, np.linalg.eigvalsh(H), atol=1e-10)


def test_trace_identity(rng):
    from conftest import random_ket
    from geoqubit.multiqubit import spinor_from_ket

    for n in (1, 2, 3):
        rho = density_from_ensemble([0.3, 0.7], [spinor_from_ket(random_ket(n, rng)) for _ in range(2)])
        M = represent(rho.value)
        assert abs(np.trace(M) - 1) < 1e-12
        O = random_hermitian(n, rng)
        assert abs(expectation(O, rho) - np.trace(represent(O) @ M).real) < 1e-12


def test_choi_examples():
    C = choi_matrix([np.eye(2)])
    w, _ = hermitian_eigen(C)
    assert abs(np.trace(C) - 2) < 1e-15 and np.allclose(w, [0, 0, 0, 2])
    pd = [np.sqrt(0.5) * np.eye(2), np.sqrt(0.5) * np.diag([1, 0]), np.sqrt(0.5) * np.diag([0, 1])]
    assert hermitian_eigen(choi_matrix(pd))[0][0] >= -1e-12

    def flip_z(X):  # diagonal map (1, 1, -1)
        c = [np.trace(P @ X) / 2 for P in PAULI]
        return c[0] * PAULI[0] + c[1] * PAULI[1] + c[2] * PAULI[2] - c[3] * PAULI[3]

    assert hermitian_eigen(choi_matrix(flip_z))[0][0] < -0.5
