"""Two-qubit spinor factorization and the tangler.

A normalised two-qubit spinor is written ``Psi = R^1 S^2 T P D`` with

* ``R^1 = exp(iota phi sz^1/2) exp(-iota theta sy^1/2) exp(iota (tau/2 + pi/4) sz^1)``
* ``S^2 = exp(iota varphi sz^2/2) exp(-iota vartheta sy^2/2)``
* ``T   = cos(varsigma/2) - sin(varsigma/2) sy^1 sy^2 K``  (the tangler)
* ``P   = exp(-omega K/2)``, a pure phase since ``K`` acts from the right.

On kets this is

    e^{i chi} [ cos(s/2) e^{i tau/2} u1 (x) w1 + sin(s/2) e^{-i tau/2} u2 (x) w2 ]

with ``u1 = (cos(theta/2) e^{i phi/2}, sin(theta/2) e^{-i phi/2})``, ``u2`` its
conjugate partner ``(sin(theta/2) e^{i phi/2}, -cos(theta/2) e^{-i phi/2})``
(likewise ``w`` with ``vartheta, varphi``) and ``omega = pi/2 - 2 chi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gates import rotation
from .multiqubit import (
    CorrelatedElement,
    Ket,
    QubitError,
    Spinor,
    contract,
    directional_correlator,
    imaginary_unit,
    ket_from_spinor,
    sigma,
)

DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class SchmidtFactors:
    theta: float
    phi: float
    vartheta: float
    varphi: float
    varsigma: float
    tau: float
    phase: float = 0.0

    @property
    def singular_values(self) -> tuple[float, float]:
        return math.cos(self.varsigma / 2), math.sin(self.varsigma / 2)

    @property
    def omega(self) -> float:
        """Angle of the phase factor ``P = exp(-omega K/2)``."""
        return math.pi / 2 - 2 * self.phase


def _wrap(a: float) -> float:
    """Angle in (-pi, pi]."""
    a = math.remainder(a, 2 * math.pi)
    return math.pi if a == -math.pi else a


def _pair(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    e = np.exp(0.5j * phi)
    return np.array([c * e, s / e]), np.array([s * e, -c / e])


def _angles(x: np.ndarray) -> tuple[float, float]:
    """``theta, phi`` with ``x`` proportional to the first vector of :func:`_pair`."""
    a0, a1 = abs(x[0]), abs(x[1])
    theta = 2 * math.atan2(a1, a0)
    if a0 < DEGENERATE_TOL or a1 < DEGENERATE_TOL:
        return theta, 0.0
    return theta, _wrap(float(np.angle(x[0]) - np.angle(x[1])))


def amplitude_matrix(psi) -> np.ndarray:
    """``A[i, j] = psi_{ij}`` with qubit 1 as the row index."""
    k = psi if isinstance(psi, Ket) else ket_from_spinor(psi)
    if k.n != 2:
        raise QubitError("Schmidt decomposition is for two qubits")
    return np.asarray(k.amplitudes).reshape(2, 2)


def svd2(A: np.ndarray) -> tuple[float, float, np.ndarray]:
    """Singular values and leading left singular vector of a 2x2 complex matrix.

    Closed form: the eigenproblem of ``A A^dagger`` is a single plane rotation.
    ``s2`` comes from ``|det A| / s1`` so it keeps full relative precision.
    """
    H = A @ A.conj().T
    a, d, b = H[0, 0].real, H[1, 1].real, H[0, 1]
    half = 0.5 * (a - d)
    r = math.hypot(half, abs(b))
    lam1 = 0.5 * (a + d) + r
    s1 = math.sqrt(max(lam1, 0.0))
    s2 = abs(np.linalg.det(A)) / s1 if s1 > 0 else 0.0
    if r < DEGENERATE_TOL * max(1.0, lam1):
        return s1, s2, np.array([1.0 + 0j, 0.0])
    # eigenvector of [[a, b], [b*, d]] for lam1, from whichever row is better conditioned
    if half >= 0:
        v = np.array([lam1 - d, np.conj(b)])
    else:
        v = np.array([b, lam1 - a])
    return s1, s2, v / np.linalg.norm(v)


def schmidt_decompose(psi) -> SchmidtFactors:
    """Factor a two-qubit spinor (or ket) through the singular values of its amplitudes."""
    A = amplitude_matrix(psi)
    nrm = float(np.linalg.norm(A))
    if nrm == 0:
        raise QubitError("cannot decompose the zero state")
    A = A / nrm
    s1, s2, x1 = svd2(A)
    theta, phi = _angles(x1)
    u1, u2 = _pair(theta, phi)
    y1 = A.T @ u1.conj()
    vartheta, varphi = _angles(y1 / np.linalg.norm(y1))
    w1, w2 = _pair(vartheta, varphi)
    z1 = u1.conj() @ A @ w1.conj()
    z2 = u2.conj() @ A @ w2.conj()
    varsigma = 2 * math.atan2(s2, s1)
    if s2 < DEGENERATE_TOL:
        tau = 0.0
    else:
        tau = _wrap(float(np.angle(z1) - np.angle(z2)))
    chi = _wrap(float(np.angle(z1)) - tau / 2)
    return SchmidtFactors(theta, phi, vartheta, varphi, varsigma, tau, chi)


def reconstruct_ket(f: SchmidtFactors) -> Ket:
    """Ket-level expansion of the factors."""
    u1, u2 = _pair(f.theta, f.phi)
    w1, w2 = _pair(f.vartheta, f.varphi)
    c, s = f.singular_values
    psi = c * np.exp(0.5j * f.tau) * np.kron(u1, w1) + s * np.exp(-0.5j * f.tau) * np.kron(u2, w2)
    return Ket(np.exp(1j * f.phase) * psi)


def tangler(varsigma: float) -> CorrelatedElement:
    K = imaginary_unit(2)
    X = sigma(2, 1, "y") * sigma(2, 2, "y") * K
    return math.cos(varsigma / 2) - math.sin(varsigma / 2) * X


def phase_factor(omega: float) -> CorrelatedElement:
    K = imaginary_unit(2)
    return math.cos(omega / 2) - math.sin(omega / 2) * K


def reconstruct(f: SchmidtFactors) -> Spinor:
    """The product ``R^1 S^2 T P D``."""
    R = rotation(1, "z", -f.phi, 2) * rotation(1, "y", f.theta, 2) * rotation(1, "z", -(f.tau + math.pi / 2), 2)
    S = rotation(2, "z", -f.varphi, 2) * rotation(2, "y", f.vartheta, 2)
    psi = R * S * tangler(f.varsigma) * phase_factor(f.omega) * directional_correlator(2)
    return Spinor(psi, check=False)


def tangle_invariant(psi: Spinor) -> tuple[float, float]:
    """``(varsigma, omega)`` from ``Psi~ Psi`` and the reduced polarization.

    ``Psi~ Psi = 1 - sin(varsigma) (cos(omega) X + sin(omega) Y)`` with
    ``X = sy^1 sy^2 K`` and ``Y = sy^1 sy^2 D``; ``cos(varsigma)`` is the
    length of either qubit's reduced polarization vector.
    """
    if psi.n != 2:
        raise QubitError("the tangler is defined for two qubits")
    G = psi.value.dagger * psi.value
    c = G.coeffs.reshape(4, 4)
    # X = -(xy + yx)/2 and Y = (yy - xx)/2 in product-operator labels
    a = -(c[1, 2] + c[2, 1]).real
    b = (c[2, 2] - c[1, 1]).real
    sin_s = math.hypot(a, b)
    rho = psi.density()
    p = 2 * np.asarray(contract(rho, 2).value.coeffs[1:]).real
    cos_s = float(np.linalg.norm(p))
    varsigma = math.atan2(sin_s, cos_s)
    omega = math.atan2(-b, -a) if sin_s > DEGENERATE_TOL else 0.0
    return varsigma, omega


def tangler_squared(psi: Spinor) -> CorrelatedElement:
    """``P (Psi~ Psi) P~``, equal to ``T^2 = 1 - sin(varsigma) X`` in the D-reduced algebra."""
    _, omega = tangle_invariant(psi)
    P = phase_factor(omega)
    return P * (psi.value.dagger * psi.value) * P.dagger


def is_product_state(psi, tol: float = 1e-8) -> bool:
    """True when the smaller singular value ``sin(varsigma/2)`` is at most ``tol``."""
    A = amplitude_matrix(psi)
    A = A / np.linalg.norm(A)
    _, s2, _ = svd2(A)
    return bool(s2 <= tol)
