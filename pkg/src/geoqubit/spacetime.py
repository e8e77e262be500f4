"""Dirac algebra G(1,3) and its relation to the Pauli algebra.

The even subalgebra of G(1,3) is identified with G3 through
``s_mu <-> g_mu g_t``.  That gives the frame-relative split of events,
velocities and the Faraday bivector, and the boost of a single-qubit
density written as a timelike vector.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ga_core import (
    GradeError,
    Multivector,
    Signature,
    basis_blades,
    exp_bivector,
    inner_product,
    outer_product,
    reverse,
)
from .pauli_spin import G3, AXES

DIRAC = Signature(1, 3, ("gt", "gx", "gy", "gz"), time="gt")
GT, GX, GY, GZ = (DIRAC.gen(n) for n in DIRAC.labels)
IOTA_D = GT * GX * GY * GZ

_SPATIAL = {"x": GX, "y": GY, "z": GZ}
FRAME_TOL = 1e-12


def gamma(axis: str) -> Multivector:
    return _SPATIAL[axis] if axis != "t" else GT


def _build_tables():
    sig_images = [gamma(a) * GT for a in AXES]
    images = {}
    for mask in basis_blades(G3):
        img = DIRAC.scalar(1.0)
        for i in range(3):
            if mask >> i & 1:
                img = img * sig_images[i]
        images[mask] = img
    even = [m for m in basis_blades(DIRAC) if bin(m).count("1") % 2 == 0]
    mat = np.array([[images[m][e] for e in even] for m in basis_blades(G3)])
    return images, even, np.linalg.inv(mat)


_EMBED, _EVEN_MASKS, _EXTRACT = _build_tables()


def pauli_embed(a: Multivector) -> Multivector:
    """Image of a G3 element in the even part of G(1,3)."""
    if a.sig != G3:
        raise ValueError("pauli_embed takes a G3 element")
    out = DIRAC.scalar(0.0)
    for m, v in a.items():
        out = out + v * _EMBED[m]
    return out


def pauli_extract(a: Multivector) -> Multivector:
    """Inverse of :func:`pauli_embed` on the even subalgebra."""
    if a.sig != DIRAC:
        raise ValueError("pauli_extract takes a G(1,3) element")
    if any(bin(m).count("1") % 2 for m, _ in a.items()):
        raise GradeError("pauli_extract needs an even element")
    row = np.array([a[e] for e in _EVEN_MASKS])
    return Multivector(G3, dict(enumerate(row @ _EXTRACT)))


def _check_frame(gt: Multivector):
    if gt.grades() - {1}:
        raise GradeError("frame vector must be grade 1")
    n = (gt * gt).scalar
    if abs(n - 1.0) > FRAME_TOL:
        raise ValueError("frame vector must be unit timelike (g_t^2 = 1)")
    if inner_product(gt, GT).scalar <= 0:
        raise ValueError("frame vector must be future pointing")


def _to_rest(gt: Multivector) -> Multivector:
    """Boost rotor ``L`` with ``L gt ~L = g_t``."""
    return (1.0 + GT * gt) / math.sqrt(2.0 * (1.0 + inner_product(gt, GT).scalar))


def _relative(x: Multivector, gt: Multivector) -> Multivector:
    # express an element of the gt-relative even algebra in G3 coordinates
    if gt is GT or (gt - GT).is_zero(1e-15):
        return pauli_extract(x)
    L = _to_rest(gt)
    return pauli_extract(L * x * reverse(L))


@dataclass(frozen=True)
class Event:
    e: Multivector

    def __post_init__(self):
        if self.e.sig != DIRAC or self.e.grades() - {1}:
            raise GradeError("an event is a grade-1 element of G(1,3)")


@dataclass(frozen=True)
class Faraday:
    F: Multivector

    def __post_init__(self):
        if self.F.sig != DIRAC or self.F.grades() - {2}:
            raise GradeError("the Faraday field is a bivector of G(1,3)")


def _vec(e) -> Multivector:
    return e.e if isinstance(e, Event) else e


def spacetime_split(e, gt: Multivector = GT) -> tuple[float, Multivector]:
    """Time ``e.gt`` and place ``e^gt`` (as a G3 vector) of an event."""
    _check_frame(gt)
    e = _vec(e)
    t = inner_product(e, gt).scalar
    s = _relative(outer_product(e, gt), gt)
    return t, s


def relative_velocity(v, gt: Multivector = GT) -> Multivector:
    _check_frame(gt)
    v = _vec(v)
    d = inner_product(v, gt).scalar
    if abs(d) < FRAME_TOL:
        raise ZeroDivisionError("velocity has no component along the frame")
    return _relative(outer_product(v, gt), gt) / d


def faraday_split(F, gt: Multivector = GT) -> tuple[Multivector, Multivector]:
    """Electric and magnetic vectors with ``F = E + iota B`` in the frame ``gt``."""
    _check_frame(gt)
    F = F.F if isinstance(F, Faraday) else F
    if F.grades() - {2}:
        raise GradeError("faraday_split needs a bivector")
    E = inner_product(F, gt) * gt
    iB = outer_product(F, gt) * gt
    E3 = _relative(E, gt)
    B3 = -(_relative(iB, gt) * (G3.gen(0) * G3.gen(1) * G3.gen(2)))
    return E3.grade(1), B3.grade(1)


def lorentz_force(m: float, q: float, F, v) -> Multivector:
    """Proper acceleration ``(q/m) F.v``."""
    if m <= 0:
        raise ValueError("rest mass must be positive")
    F = F.F if isinstance(F, Faraday) else F
    return inner_product(F, _vec(v)).grade(1) * (q / m)


def boost_polarization(alpha: float, lam: float) -> float:
    """Apparent polarization along the boost axis after a boost of rapidity ``lam``."""
    if abs(alpha) > 1.0 + 1e-15:
        raise ValueError("polarization must lie in [-1, 1]")
    c, s = math.cosh(lam), math.sinh(lam)
    return (alpha * c - s) / (c - alpha * s)


def rapidity(speed: float) -> float:
    if abs(speed) >= 1.0:
        raise ValueError("speed must be below 1 (c = 1)")
    return math.atanh(speed)


@dataclass(frozen=True)
class RelativisticDensity:
    """Timelike vector ``rho_vec`` with ``rho = rho_vec g_t`` in the rest frame."""

    value: Multivector

    def __post_init__(self):
        v = self.value
        if v.sig != DIRAC or v.grades() - {1}:
            raise GradeError("relativistic density is a grade-1 element")
        if (v * v).scalar <= 0:
            raise ValueError("relativistic density must be timelike")
        if inner_product(v, GT).scalar <= 0:
            raise ValueError("relativistic density must be future pointing")

    @classmethod
    def from_polarization(cls, p) -> "RelativisticDensity":
        p = np.asarray(p, dtype=float).reshape(3)
        if np.linalg.norm(p) > 1.0 + 1e-15:
            raise ValueError("polarization vector longer than 1")
        return cls(0.5 * (GT + DIRAC.vector(p, labels=("gx", "gy", "gz"))))

    def frame_density(self, gt: Multivector = GT) -> Multivector:
        """Normalised G3 density ``(1 + p)/2`` seen in the frame ``gt``."""
        _check_frame(gt)
        d = inner_product(self.value, gt).scalar
        return 0.5 * _relative(self.value * gt, gt) / d

    def polarization(self, gt: Multivector = GT) -> np.ndarray:
        return 2.0 * self.frame_density(gt).grade(1).vector_coords()


def boost_density(rho: RelativisticDensity, lam: float, axis: str = "z") -> RelativisticDensity:
    """``L rho ~L`` with ``L = exp(-lam s_axis / 2)`` and ``s_axis = g_axis g_t``."""
    L = exp_bivector(gamma(axis) * GT * (-lam / 2.0))
    out = (L * rho.value * reverse(L)).grade(1)
    assert (out * out).scalar > 0, "boost produced a non-timelike density"
    return RelativisticDensity(out)
