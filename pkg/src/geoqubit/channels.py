"""Operator-sum quantum operations.

Single-qubit Kraus operators are read as complex quaternions ``A + iota B``
with ``A = alpha + iota a`` and ``B = beta + iota b``; normality and
unitality then reduce to a few vector identities, and a diagonal normal
unital map is completely positive exactly when its eigenvalue triple lies in
the tetrahedron spanned by ``(1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1)``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ga_core import Multivector, outer_product
from .matrix_oracle import PAULI, choi_matrix, hermitian_eigen, represent
from .multiqubit import (
    CorrelatedElement,
    DensityOperator,
    QubitError,
    e_minus,
    e_plus,
    sigma,
)
from .pauli_spin import G3, IOTA, SX, SY, SZ, coords, rotor_from_matrix, vec

CHANNEL_TOL = 1e-10
CP_TOL = 1e-10
BARY_TOL = 1e-12

TETRAHEDRON = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)


class ChannelError(ValueError):
    pass


@dataclass(frozen=True)
class KrausChannel:
    n: int
    ops: tuple[CorrelatedElement, ...]

    def __post_init__(self):
        ops = tuple(self.ops)
        if not ops:
            raise ChannelError("a Kraus channel needs at least one operator")
        if any(Q.n != self.n for Q in ops):
            raise ChannelError("Kraus operators must act on the channel's qubits")
        object.__setattr__(self, "ops", ops)

    @classmethod
    def from_matrices(cls, mats: Sequence[np.ndarray]) -> "KrausChannel":
        from .matrix_oracle import unrepresent

        ops = tuple(unrepresent(np.asarray(m, dtype=complex)) for m in mats)
        return cls(ops[0].n, ops)

    def kraus_matrices(self) -> list[np.ndarray]:
        return [represent(Q) for Q in self.ops]

    def matrix_map(self):
        ks = self.kraus_matrices()
        return lambda X: sum(k @ X @ k.conj().T for k in ks)

    def __call__(self, x: CorrelatedElement) -> CorrelatedElement:
        out = CorrelatedElement(self.n)
        for Q in self.ops:
            out = out + Q * x * Q.dagger
        return out


def apply_channel(ch: KrausChannel, rho):
    """``sum_k Q_k rho Q_k~``; a density input gives a validated density back."""
    v = rho.value if isinstance(rho, DensityOperator) else rho
    if v.n != ch.n:
        raise ChannelError("channel and state have different qubit counts")
    out = ch(v)
    if isinstance(rho, DensityOperator):
        return DensityOperator(out)
    return out


def check_normal(ch: KrausChannel, tol: float = CHANNEL_TOL) -> bool:
    """``sum_k Q_k~ Q_k = 1``, i.e. the scalar part is preserved."""
    s = sum((Q.dagger * Q for Q in ch.ops), CorrelatedElement(ch.n))
    return s.allclose(1.0, tol)


def check_unital(ch: KrausChannel, tol: float = CHANNEL_TOL) -> bool:
    """``sum_k Q_k Q_k~ = 1``, i.e. ``Omega(1) = 1``."""
    s = sum((Q * Q.dagger for Q in ch.ops), CorrelatedElement(ch.n))
    return s.allclose(1.0, tol)


def check_unital_probe(ch: KrausChannel, tol: float = CHANNEL_TOL) -> bool:
    return ch(CorrelatedElement.scalar(ch.n, 1.0)).allclose(1.0, tol)


# -- complex quaternions -------------------------------------------------------

@dataclass(frozen=True)
class QuaternionPair:
    """``Q = (alpha + iota a) + iota (beta + iota b)`` for one Kraus operator."""

    alpha: float
    a: np.ndarray
    beta: float
    b: np.ndarray

    @property
    def A(self) -> Multivector:
        return self.alpha + IOTA * vec(self.a)

    @property
    def B(self) -> Multivector:
        return self.beta + IOTA * vec(self.b)

    def element(self) -> Multivector:
        return self.A + IOTA * self.B


def _g3_of(Q) -> Multivector:
    if isinstance(Q, Multivector):
        if Q.sig != G3:
            raise ChannelError("quaternion split needs a G3 element")
        return Q
    if Q.n != 1:
        raise ChannelError("quaternion split is defined for one qubit")
    return Q.to_g3()


def quaternion_decompose(Q) -> QuaternionPair:
    """Split by grade: ``A`` is the even part, ``iota B`` the odd part."""
    q = _g3_of(Q)
    A = q.even()
    B = -(IOTA * (q - A))
    a = coords(-(IOTA * A.grade(2)))
    b = coords(-(IOTA * B.grade(2)))
    return QuaternionPair(A.scalar, a, B.scalar, b)


def channel_quaternions(ch: KrausChannel) -> list[QuaternionPair]:
    return [quaternion_decompose(Q) for Q in ch.ops]


def _sums(pairs: Sequence[QuaternionPair]):
    al = np.array([p.alpha for p in pairs])
    be = np.array([p.beta for p in pairs])
    a = np.array([p.a for p in pairs]).reshape(-1, 3)
    b = np.array([p.b for p in pairs]).reshape(-1, 3)
    return al, be, a, b


def quaternion_conditions(pairs: Sequence[QuaternionPair], tol: float = CHANNEL_TOL) -> dict[str, bool]:
    """The three vector conditions; ``cond1a & cond1b`` is unital, ``cond1b & cond2`` normal."""
    al, be, a, b = _sums(pairs)
    lhs = (al[:, None] * b - be[:, None] * a).sum(0)
    cross = np.cross(a, b).sum(0)
    norm = float((al ** 2 + be ** 2 + (a ** 2).sum(1) + (b ** 2).sum(1)).sum())
    return {
        "cond1a": bool(np.abs(lhs - cross).max() <= tol),
        "cond1b": abs(norm - 1.0) <= tol,
        "cond2": bool(np.abs(lhs + cross).max() <= tol),
    }


def check_normal_quaternion(ch: KrausChannel, tol: float = CHANNEL_TOL) -> bool:
    c = quaternion_conditions(channel_quaternions(ch), tol)
    return c["cond1b"] and c["cond2"]


def check_unital_quaternion(ch: KrausChannel, tol: float = CHANNEL_TOL) -> bool:
    c = quaternion_conditions(channel_quaternions(ch), tol)
    return c["cond1a"] and c["cond1b"]


# -- affine form -----------------------------------------------------------------

@dataclass(frozen=True)
class AffineMap1Q:
    """``Omega((1 + r)/2) = (1 + t + sum_mu r_mu s_mu)/2``."""

    t: np.ndarray
    S: np.ndarray  # columns are s_x, s_y, s_z

    def __post_init__(self):
        object.__setattr__(self, "t", np.asarray(self.t, dtype=float).reshape(3))
        object.__setattr__(self, "S", np.asarray(self.S, dtype=float).reshape(3, 3))

    @classmethod
    def diagonal(cls, lam: Sequence[float]) -> "AffineMap1Q":
        return cls(np.zeros(3), np.diag(np.asarray(lam, dtype=float)))

    @property
    def s(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.S[:, 0], self.S[:, 1], self.S[:, 2]

    def is_diagonal(self, tol: float = CHANNEL_TOL) -> bool:
        return bool(np.abs(self.S - np.diag(np.diag(self.S))).max() <= tol)

    def apply(self, r: Sequence[float]) -> np.ndarray:
        return self.t + self.S @ np.asarray(r, dtype=float)

    def matrix_map(self):
        """Complex-linear extension to 2x2 matrices (for the Choi test)."""
        def f(X):
            x = [np.trace(P @ X) / 2 for P in PAULI]
            out = x[0] * (PAULI[0] + sum(ti * P for ti, P in zip(self.t, PAULI[1:])))
            for mu in range(3):
                out = out + x[mu + 1] * sum(sk * P for sk, P in zip(self.S[:, mu], PAULI[1:]))
            return out
        return f


def affine_form_probe(ch: KrausChannel) -> AffineMap1Q:
    """``t`` and ``s_mu`` read off from ``Omega(1)`` and ``Omega(s_mu)``."""
    if ch.n != 1:
        raise ChannelError("affine form is for single-qubit channels")
    one = ch(CorrelatedElement.scalar(1, 1.0))
    t = one.coeffs[1:].real
    S = np.column_stack([ch(sigma(1, 1, mu)).coeffs[1:].real for mu in "xyz"])
    return AffineMap1Q(t, S)


def affine_form_quaternion(ch: KrausChannel) -> AffineMap1Q:
    """``t = -2 sum(alpha b - beta a - a x b)``, ``s_mu = sum(A s_mu A~ + B s_mu B~)``."""
    pairs = channel_quaternions(ch)
    al, be, a, b = _sums(pairs)
    t = -2.0 * (al[:, None] * b - be[:, None] * a - np.cross(a, b)).sum(0)
    cols = []
    for s in (SX, SY, SZ):
        acc = G3.scalar(0.0)
        for p in pairs:
            A, B = p.A, p.B
            acc = acc + A * s * ~A + B * s * ~B
        cols.append(coords(acc))
    return AffineMap1Q(t, np.column_stack(cols))


def affine_form(ch: KrausChannel, tol: float = CHANNEL_TOL) -> AffineMap1Q:
    """Affine form of a normal single-qubit channel, checked by two routes."""
    if ch.n != 1:
        raise ChannelError("affine form is for single-qubit channels")
    if not check_normal(ch, tol):
        raise ChannelError("affine form needs a normal channel")
    q = affine_form_quaternion(ch)
    p = affine_form_probe(ch)
    if np.abs(q.t - p.t).max() > tol or np.abs(q.S - p.S).max() > tol:
        raise ChannelError("quaternion and probe routes disagree")
    return q


def diagonal_eigenvalues(ch: KrausChannel, tol: float = 1e-10) -> np.ndarray:
    """``lambda_mu = 1 + 2 sum_k ((s_mu ^ a_k)^2 + (s_mu ^ b_k)^2)`` for a diagonal channel."""
    if not affine_form_probe(ch).is_diagonal(tol):
        raise ChannelError("channel is not diagonal in the Pauli basis")
    pairs = channel_quaternions(ch)
    lam = []
    for s in (SX, SY, SZ):
        acc = 0.0
        for p in pairs:
            wa = outer_product(s, vec(p.a))
            wb = outer_product(s, vec(p.b))
            acc += (wa * wa).scalar + (wb * wb).scalar
        lam.append(1.0 + 2.0 * acc)
    return np.array(lam)


def _proper_svd(M: np.ndarray):
    U, s, Vt = np.linalg.svd(M)
    d = np.sign(np.linalg.det(U) * np.linalg.det(Vt))
    if d < 0:
        s = s.copy()
        s[-1] = -s[-1]
        U = U.copy()
        U[:, -1] = -U[:, -1]
    if np.linalg.det(U) < 0:
        U = -U
        Vt = -Vt
    return U, s, Vt


def diagonalize_channel(ch: KrausChannel) -> tuple[KrausChannel, np.ndarray]:
    """Rotate a unital channel to diagonal form, ``R1 Q_k R2``, with signed singular values.

    Uses the SVD of the 3x3 matrix of ``s_mu`` vectors, with both factors
    forced into SO(3) so they come from rotors.
    """
    aff = affine_form_probe(ch)
    U, s, Vt = _proper_svd(aff.S)
    R1 = CorrelatedElement.from_g3(rotor_from_matrix(U.T).value)
    R2 = CorrelatedElement.from_g3(rotor_from_matrix(Vt.T).value)
    rotated = KrausChannel(1, tuple(R1 * Q * R2 for Q in ch.ops))
    return rotated, s


@dataclass(frozen=True)
class TetrahedronResult:
    inside: bool
    barycentric: np.ndarray
    margin: float

    def __bool__(self):
        return self.inside


def tetrahedron_check(lam: Sequence[float], tol: float = BARY_TOL) -> TetrahedronResult:
    """Barycentric coordinates of ``lam`` over ``p0, px, py, pz``."""
    lam = np.asarray(lam, dtype=float).reshape(3)
    A = np.vstack([TETRAHEDRON.T, np.ones(4)])
    c = np.linalg.solve(A, np.append(lam, 1.0))
    m = float(c.min())
    return TetrahedronResult(m >= -tol, c, m)


def partial_transpose(rho, q: int) -> CorrelatedElement:
    """Negate every term containing ``s_y^q`` (two qubits only)."""
    v = rho.value if isinstance(rho, DensityOperator) else rho
    if v.n != 2:
        raise ChannelError("partial transpose is implemented for two qubits")
    if q not in (1, 2):
        raise QubitError(f"qubit index {q} outside 1..2")
    t = v.coeffs.reshape(4, 4).copy()
    if q == 1:
        t[2, :] *= -1
    else:
        t[:, 2] *= -1
    return CorrelatedElement(2, t.reshape(-1))


def phase_damping(p: float) -> KrausChannel:
    """``rho -> (1-p) rho + p E+ rho E+ + p E- rho E-``."""
    if not 0.0 <= p <= 1.0:
        raise ChannelError("damping probability must lie in [0, 1]")
    ops = [math.sqrt(1 - p) * CorrelatedElement.scalar(1, 1.0),
           math.sqrt(p) * e_plus(1, 1), math.sqrt(p) * e_minus(1, 1)]
    return KrausChannel(1, tuple(ops))


def amplitude_damping(g: float) -> KrausChannel:
    """Normal but not unital: ``{E+ + sqrt(1-g) E-, sqrt(g) (s_x + i s_y)/2}``."""
    if not 0.0 <= g <= 1.0:
        raise ChannelError("damping probability must lie in [0, 1]")
    k0 = e_plus(1, 1) + math.sqrt(1 - g) * e_minus(1, 1)
    k1 = math.sqrt(g) * (sigma(1, 1, "x") + 1j * sigma(1, 1, "y")) / 2
    return KrausChannel(1, (k0, k1))


def cp_check_choi(ch, tol: float = CP_TOL) -> tuple[bool, float]:
    """Complete positivity from the smallest Choi eigenvalue."""
    w, _ = hermitian_eigen(choi_matrix(ch))
    m = float(w[0])
    return m >= -tol, m


# -- channel file ----------------------------------------------------------------

_TERM = re.compile(r"^term\s+(.*?)\s*:\s*(\S+)\s+(\S+)\s*$")
_FACTOR = re.compile(r"^(?:σ|s|sigma)?([0xyz1])\^?(\d+)?$")


def _parse_factor(tok: str):
    m = _FACTOR.match(tok)
    if not m:
        raise ChannelError(f"bad operator factor {tok!r}")
    mu, q = m.group(1), m.group(2)
    if mu in "01":
        return None
    if q is None:
        raise ChannelError(f"factor {tok!r} needs a qubit index (e.g. sx^1)")
    return mu, int(q)


def parse_channel(text: str, n_qubits: int | None = None):
    """Read a Kraus channel (or an affine single-qubit map) from text.

    Kraus operators are blocks separated by ``kraus`` lines or blank lines,
    each holding lines ``term sx^1 sz^2 : re im``.  An ``affine`` block with
    lines ``t x y z`` and ``sx|sy|sz x y z`` describes a one-qubit affine map.
    """
    blocks: list[list[tuple[list, complex]]] = []
    affine: dict[str, np.ndarray] = {}
    mode = None
    cur: list | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            cur = None
            continue
        low = line.lower()
        try:
            if low.startswith("qubits"):
                n_qubits = int(line.split()[1])
            elif low == "kraus":
                mode, cur = "kraus", None
            elif low == "affine":
                mode = "affine"
            elif mode == "affine":
                key, *nums = line.split()
                if key not in ("t", "sx", "sy", "sz") or len(nums) != 3:
                    raise ChannelError("affine lines are 't|sx|sy|sz x y z'")
                affine[key] = np.array([float(x) for x in nums])
            else:
                m = _TERM.match(line)
                if not m:
                    raise ChannelError(f"cannot parse {line!r}")
                factors = [f for f in (_parse_factor(t) for t in m.group(1).split()) if f]
                if cur is None:
                    cur = []
                    blocks.append(cur)
                cur.append((factors, complex(float(m.group(2)), float(m.group(3)))))
        except (ValueError, IndexError) as exc:
            raise ChannelError(f"line {lineno}: {exc}") from None
    if mode == "affine":
        if blocks:
            raise ChannelError("a channel file holds either Kraus operators or an affine map")
        if set(affine) != {"t", "sx", "sy", "sz"}:
            raise ChannelError("affine block needs t, sx, sy and sz lines")
        return AffineMap1Q(affine["t"], np.column_stack([affine["sx"], affine["sy"], affine["sz"]]))
    if not blocks:
        raise ChannelError("no Kraus operators found")
    top = max((q for blk in blocks for fs, _ in blk for _, q in fs), default=1)
    n = n_qubits or top
    if top > n:
        raise ChannelError(f"operator on qubit {top} but only {n} qubits")
    ops = []
    for blk in blocks:
        c = np.zeros(4 ** n, dtype=complex)
        for factors, val in blk:
            digits = ["0"] * n
            for mu, q in factors:
                if q < 1:
                    raise ChannelError("qubit indices are 1-based")
                if digits[q - 1] != "0":
                    raise ChannelError(f"qubit {q} appears twice in one term")
                digits[q - 1] = mu
            idx = int("".join(str("0xyz".index(d)) for d in digits), 4)
            c[idx] += val
        ops.append(CorrelatedElement(n, c))
    return KrausChannel(n, tuple(ops))
