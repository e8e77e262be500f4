import numpy as np
import pytest

from geoqubit.ga_core import Multivector
from geoqubit.matrix_oracle import unrepresent
from geoqubit.multiqubit import CorrelatedElement, Ket


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_mv(sig, rng, scale=1.0, grades=None):
    coeffs = {}
    for m in range(1 << sig.dim):
        if grades is None or bin(m).count("1") in grades:
            coeffs[m] = scale * rng.normal()
    return Multivector(sig, coeffs)


def random_vector(sig, rng):
    return random_mv(sig, rng, grades={1})


def random_element(n, rng):
    return CorrelatedElement(n, rng.normal(size=4 ** n) + 1j * rng.normal(size=4 ** n))


def random_ket(n, rng):
    a = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return Ket(a / np.linalg.norm(a))


def random_unitary_matrix(d, rng):
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_unitary(n, rng):
    return unrepresent(random_unitary_matrix(2 ** n, rng))


def random_hermitian(n, rng):
    return CorrelatedElement(n, rng.normal(size=4 ** n))


def _inv_sqrt(S):
    w, V = np.linalg.eigh(S)
    return (V / np.sqrt(w)) @ V.conj().T


def random_kraus_matrices(rng, k=3):
    return [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(k)]


def random_normal_channel(rng, k=3):
    """Kraus set with sum K^dagger K = 1 (generally not unital)."""
    from geoqubit.channels import KrausChannel

    ks = random_kraus_matrices(rng, k)
    T = _inv_sqrt(sum(K.conj().T @ K for K in ks))
    return KrausChannel.from_matrices([K @ T for K in ks])


def random_unital_only_channel(rng, k=3):
    """Kraus set with sum K K^dagger = 1 (generally not normal)."""
    from geoqubit.channels import KrausChannel

    ks = random_kraus_matrices(rng, k)
    T = _inv_sqrt(sum(K @ K.conj().T for K in ks))
    return KrausChannel.from_matrices([T @ K for K in ks])


def random_normal_unital_channel(rng, k=3):
    """Random mixture of unitaries, normal and unital."""
    from geoqubit.channels import KrausChannel

    p = rng.dirichlet(np.ones(k))
    return KrausChannel.from_matrices([np.sqrt(pi) * random_unitary_matrix(2, rng) for pi in p])


# acceptance results, filled by test_acceptance.py and printed after the run
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s[2:])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{name} {'PASS' if ok else 'FAIL'}  {detail}")
