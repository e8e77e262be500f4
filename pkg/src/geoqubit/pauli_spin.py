"""Single-qubit geometry in the Pauli algebra G3.

Spinors are unit even elements (rotors), densities are scalar-plus-vector
elements ``(1 + p)/2``.  Complex numbers appear only at the boundary
(Cayley-Klein pairs, stereographic ratios); internally the imaginary unit is
the trivector ``iota = sx sy sz`` or, in the sx-sy plane, the bivector
``K = sx sy``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ga_core import Multivector, Signature, exp_bivector, reverse

G3 = Signature(3, 0, ("sx", "sy", "sz"))
AXES = ("x", "y", "z")

SX, SY, SZ = G3.gen("sx"), G3.gen("sy"), G3.gen("sz")
IOTA = SX * SY * SZ
ONE = G3.scalar(1.0)
# bivector basis: I = sy^sz, J = sz^sx, K = sx^sy
BIV_I = SY * SZ
BIV_J = SZ * SX
BIV_K = SX * SY

UNIT_TOL = 1e-12


def sigma(axis: str) -> Multivector:
    return {"x": SX, "y": SY, "z": SZ}[axis]


def vec(x: Sequence[float]) -> Multivector:
    return G3.vector(list(x))


def coords(v: Multivector) -> np.ndarray:
    return v.vector_coords()


def _check_vector(x: Multivector, name: str = "argument"):
    if x.sig != G3:
        raise ValueError(f"{name} must live in G3")
    if x.grades() - {1}:
        raise ValueError(f"{name} must be a vector")


@dataclass(frozen=True)
class Rotor:
    """Unit quaternion ``cos(t/2) - iota r sin(t/2)`` in the even subalgebra of G3."""

    value: Multivector

    def __post_init__(self):
        v = self.value
        if v.sig != G3 or v.grades() - {0, 2}:
            raise ValueError("rotor must be an even element of G3")
        n = v * reverse(v)
        if not (n - 1.0).is_zero(UNIT_TOL):
            raise ValueError("rotor is not unit: R ~R != 1")

    def __mul__(self, other: "Rotor") -> "Rotor":
        return Rotor(self.value * other.value)

    def __neg__(self) -> "Rotor":
        return Rotor(-self.value)

    @property
    def dagger(self) -> "Rotor":
        return Rotor(reverse(self.value))

    def quaternion(self) -> np.ndarray:
        """Euler-Rodrigues pair ``[cos(t/2), sin(t/2) r]`` as a 4-array."""
        return _quat(self.value)

    def axis_angle(self) -> tuple[np.ndarray, float]:
        """Axis and angle in [0, 2pi]; axis defaults to z when the angle vanishes."""
        q = self.quaternion()
        s = float(np.linalg.norm(q[1:]))
        theta = 2.0 * math.atan2(s, q[0])
        if s < 1e-12:
            return np.array([0.0, 0.0, 1.0]), theta
        return q[1:] / s, theta


def _quat(v: Multivector) -> np.ndarray:
    # v = a - (bx I + by J + bz K) and I*I = J*J = K*K = -1
    return np.array([v.scalar, (v * BIV_I).scalar, (v * BIV_J).scalar, (v * BIV_K).scalar])


def _rotor_from_quaternion(q: Sequence[float]) -> Multivector:
    a, bx, by, bz = (float(t) for t in q)
    return a - (bx * BIV_I + by * BIV_J + bz * BIV_K)


def reflect(a: Multivector, x: Multivector) -> Multivector:
    """Reflection of ``x`` in the plane orthogonal to ``a``: ``-a x a^-1``."""
    _check_vector(a, "a")
    _check_vector(x, "x")
    n2 = (a * a).scalar
    if n2 < UNIT_TOL:
        raise ValueError("cannot reflect in the plane of a zero vector")
    return -(a * x * a) / n2


def rotor_from_axis_angle(axis, theta: float) -> Rotor:
    r = axis if isinstance(axis, Multivector) else (sigma(axis) if isinstance(axis, str) else vec(axis))
    _check_vector(r, "axis")
    if abs((r * r).scalar - 1.0) > UNIT_TOL:
        raise ValueError("rotation axis must be a unit vector")
    return Rotor(exp_bivector(IOTA * r * (-theta / 2.0)))


def rotor_from_vectors(u: Multivector, v: Multivector) -> Rotor:
    """Rotor ``v u`` taking the ``u`` direction toward ``v`` by twice their angle."""
    _check_vector(u, "u")
    _check_vector(v, "v")
    nu = math.sqrt((u * u).scalar)
    nv = math.sqrt((v * v).scalar)
    return Rotor(v * u / (nu * nv))


def rotate(R: Rotor, x: Multivector) -> Multivector:
    return (R.value * x * reverse(R.value)).grade(1)


@dataclass(frozen=True)
class CayleyKlein:
    psi1: complex
    psi2: complex

    def __post_init__(self):
        object.__setattr__(self, "psi1", complex(self.psi1))
        object.__setattr__(self, "psi2", complex(self.psi2))

    def matrix(self) -> np.ndarray:
        """The SU(2) matrix ``[[psi1, -psi2*], [psi2, psi1*]]``."""
        a, b = self.psi1, self.psi2
        return np.array([[a, -b.conjugate()], [b, a.conjugate()]])

    def ket(self) -> np.ndarray:
        return np.array([self.psi1, self.psi2])


def cayley_klein_of_rotor(R: Rotor) -> CayleyKlein:
    """First column of the SU(2) matrix representing ``R``.

    With ``R = a - (bx I + by J + bz K)``, ``psi1 = a - i bz`` and
    ``psi2 = by - i bx``, so ``1 -> |0>`` and ``-iota sy -> |1>``.
    """
    a, bx, by, bz = R.quaternion()
    return CayleyKlein(complex(a, -bz), complex(by, -bx))


def rotor_of_cayley_klein(ck: CayleyKlein) -> Rotor:
    n = abs(ck.psi1) ** 2 + abs(ck.psi2) ** 2
    if abs(n - 1.0) > UNIT_TOL:
        raise ValueError("Cayley-Klein pair is not normalised")
    a, bz = ck.psi1.real, -ck.psi1.imag
    by, bx = ck.psi2.real, -ck.psi2.imag
    return Rotor(_rotor_from_quaternion([a, bx, by, bz]))


@dataclass(frozen=True)
class QubitDensity:
    """``scalar + p`` with ``|p| <= 1``; the scalar is 1/2 for a normalised state."""

    p: np.ndarray
    scalar: float = 0.5

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float).reshape(3)
        if np.linalg.norm(p) > 1.0 + UNIT_TOL:
            raise ValueError("polarization vector longer than 1")
        object.__setattr__(self, "p", p)

    @property
    def value(self) -> Multivector:
        return self.scalar * (1.0 + vec(self.p))

    @property
    def polarization(self) -> float:
        return float(np.linalg.norm(self.p))

    def is_pure(self, tol: float = 1e-10) -> bool:
        return abs(self.polarization - 1.0) <= tol

    def matrix(self) -> np.ndarray:
        px, py, pz = self.p
        return 0.5 * np.array([[1 + pz, px - 1j * py], [px + 1j * py, 1 - pz]])


def density_from_rotor(R: Rotor) -> QubitDensity:
    """Pure state ``R E+ ~R = (1 + R sz ~R)/2``."""
    return QubitDensity(coords(rotate(R, SZ)))


def density_from_ensemble(weights: Sequence[float], rotors: Sequence[Rotor]) -> QubitDensity:
    w = np.asarray(weights, dtype=float)
    if len(w) != len(rotors) or np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be nonnegative, sum to 1, one per rotor")
    ps = np.array([density_from_rotor(R).p for R in rotors])
    return QubitDensity(w @ ps)


def expectation_1q(axis, rho: QubitDensity) -> float:
    """Component of the polarization along an axis name or unit vector.

    This is ``2 <s_mu rho>_0``, i.e. ``tr(s_mu rho)`` in the matrix picture.
    """
    s = sigma(axis) if isinstance(axis, str) else vec(axis)
    return 2.0 * (s * rho.value).scalar


def stereographic_ratio(p) -> complex:
    """Projection of a unit polarization vector from ``-sz`` onto the sx-sy plane.

    The projected vector is multiplied on the left by ``sx`` giving
    ``a + b K``; it is returned as ``a + b j`` and equals ``psi2/psi1``.
    """
    pv = p if isinstance(p, Multivector) else vec(p)
    c = coords(pv)
    if abs(np.linalg.norm(c) - 1.0) > 1e-10:
        raise ValueError("stereographic_ratio needs a unit vector")
    denom = 1.0 + c[2]
    if denom < 1e-12:
        raise ZeroDivisionError("south pole -sz projects to infinity")
    planar = (c[0] * SX + c[1] * SY) / denom
    w = SX * planar
    return complex(w.scalar, -(w * BIV_K).scalar)


def mobius(matrix: np.ndarray, z: complex) -> complex:
    """Action of ``matrix`` on the ratio ``z = psi2/psi1`` of a ket it multiplies."""
    (a, b), (c, d) = matrix
    return (c + d * z) / (a + b * z)


def rotation_matrix(R: Rotor) -> np.ndarray:
    """3x3 matrix whose columns are the images of ``sx, sy, sz`` under ``R``."""
    return np.column_stack([coords(rotate(R, s)) for s in (SX, SY, SZ)])


def rotor_from_matrix(M: np.ndarray) -> Rotor:
    """Rotor inducing a proper rotation matrix (one of the two signs)."""
    M = np.asarray(M, dtype=float)
    if abs(np.linalg.det(M) - 1.0) > 1e-9 or np.abs(M.T @ M - np.eye(3)).max() > 1e-9:
        raise ValueError("matrix is not a proper rotation")
    # unit quaternion from the largest diagonal combination
    tr = np.trace(M)
    cands = [1 + tr, 1 + M[0, 0] - M[1, 1] - M[2, 2], 1 - M[0, 0] + M[1, 1] - M[2, 2], 1 - M[0, 0] - M[1, 1] + M[2, 2]]
    k = int(np.argmax(cands))
    s = 2.0 * math.sqrt(cands[k])
    if k == 0:
        w, x, y, z = s / 4, (M[2, 1] - M[1, 2]) / s, (M[0, 2] - M[2, 0]) / s, (M[1, 0] - M[0, 1]) / s
    elif k == 1:
        w, x, y, z = (M[2, 1] - M[1, 2]) / s, s / 4, (M[0, 1] + M[1, 0]) / s, (M[0, 2] + M[2, 0]) / s
    elif k == 2:
        w, x, y, z = (M[0, 2] - M[2, 0]) / s, (M[0, 1] + M[1, 0]) / s, s / 4, (M[1, 2] + M[2, 1]) / s
    else:
        w, x, y, z = (M[1, 0] - M[0, 1]) / s, (M[0, 2] + M[2, 0]) / s, (M[1, 2] + M[2, 1]) / s, s / 4
    q = np.array([w, x, y, z])
    q /= np.linalg.norm(q)
    # R = cos(t/2) - iota n sin(t/2) = a - (bx I + by J + bz K)
    return Rotor(_rotor_from_quaternion(q))
