"""N-qubit states and operators in the correlated product algebra.

An element of ``G3^(x)N / C`` is stored as ``4**N`` complex coefficients over
the product-operator basis ``s_mu1^1 ... s_muN^N`` (digits ``0, x, y, z`` =
``0, 1, 2, 3``, qubit 1 most significant).  After correlation all the
``iota^q`` coincide and square to ``-1``, so a complex coefficient ``a + ib``
stands for ``a + b iota``.

The product is computed from the structure constants of G3 itself (obtained
from :mod:`geoqubit.ga_core`), one qubit at a time.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .ga_core import Multivector, Signature, basis_blades
from .pauli_spin import G3, IOTA, ONE, SX, SY, SZ

DIGITS = "0xyz"
TOL = 1e-10

_G3_BASIS = (ONE, SX, SY, SZ)


class QubitError(ValueError):
    pass


def _g3_coeffs(mv: Multivector) -> np.ndarray:
    """Complex coordinates of a G3 element on ``(1, sx, sy, sz)`` with ``iota -> i``."""
    out = np.zeros(4, dtype=complex)
    for k, P in enumerate(_G3_BASIS):
        re = (mv * P).scalar
        im = -(mv * IOTA * P).scalar
        out[k] = complex(re, im)
    return out


def _structure_tensor() -> np.ndarray:
    T = np.zeros((4, 4, 4), dtype=complex)
    for a, Pa in enumerate(_G3_BASIS):
        for b, Pb in enumerate(_G3_BASIS):
            T[a, b] = _g3_coeffs(Pa * Pb)
    return T


STRUCTURE = _structure_tensor()


def _phase_exponents() -> np.ndarray:
    # every product of two basis elements is i**e times the basis element a ^ b
    e = np.zeros((4, 4), dtype=np.int8)
    for a in range(4):
        for b in range(4):
            row = STRUCTURE[a, b]
            nz = np.flatnonzero(np.abs(row) > 1e-12)
            assert list(nz) == [a ^ b], "unexpected G3 structure constants"
            e[a, b] = round(np.angle(row[a ^ b]) / (np.pi / 2)) % 4
    return e


_E1 = _phase_exponents()
_IPOW = np.array([1, 1j, -1, -1j])
_CHUNK = 1 << 20


@lru_cache(maxsize=8)
def _phase_table(n: int) -> np.ndarray:
    """``F[c, b]``: exponent of ``i`` in ``P_(c^b) P_b = i**F P_c``."""
    E = np.zeros((1, 1), dtype=np.int8)
    for _ in range(n):
        E = ((E[:, None, :, None] + _E1[None, :, None, :]) % 4).astype(np.int8)
        E = E.reshape(E.shape[0] * 4, E.shape[2] * 4)
    idx = np.arange(4 ** n)
    F = E[idx[:, None] ^ idx[None, :], idx[None, :]]
    F.setflags(write=False)
    return F


@lru_cache(maxsize=None)
def _weights(n: int) -> np.ndarray:
    w = np.zeros(1, dtype=int)
    for _ in range(n):
        w = (w[:, None] + np.array([0, 1, 1, 1])[None, :]).ravel()
    return w


def label_index(label: str) -> int:
    idx = 0
    for ch in label:
        d = DIGITS.find(ch)
        if d < 0:
            raise QubitError(f"bad product-operator label {label!r}")
        idx = 4 * idx + d
    return idx


def index_label(idx: int, n: int) -> str:
    out = []
    for _ in range(n):
        idx, d = divmod(idx, 4)
        out.append(DIGITS[d])
    return "".join(reversed(out))


class CorrelatedElement:
    """Element of the correlated N-qubit algebra.  Immutable."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Sequence[complex] | None = None):
        if n < 1:
            raise QubitError("need at least one qubit")
        c = np.zeros(4 ** n, dtype=complex) if coeffs is None else np.array(coeffs, dtype=complex)
        if c.shape != (4 ** n,):
            raise QubitError(f"expected {4 ** n} coefficients, got {c.shape}")
        c.setflags(write=False)
        self.n = n
        self.coeffs = c

    # -- constructors --------------------------------------------------------
    @classmethod
    def scalar(cls, n: int, value: complex = 1.0) -> "CorrelatedElement":
        c = np.zeros(4 ** n, dtype=complex)
        c[0] = value
        return cls(n, c)

    @classmethod
    def from_labels(cls, terms: Mapping[str, complex], n: int | None = None) -> "CorrelatedElement":
        if n is None:
            n = len(next(iter(terms)))
        c = np.zeros(4 ** n, dtype=complex)
        for lab, v in terms.items():
            if len(lab) != n:
                raise QubitError(f"label {lab!r} does not have {n} digits")
            c[label_index(lab)] += v
        return cls(n, c)

    @classmethod
    def pauli(cls, n: int, q: int, mu: str | int) -> "CorrelatedElement":
        """``s_mu^q`` on qubit ``q`` (1-indexed)."""
        _check_qubit(q, n)
        d = DIGITS.index(mu) if isinstance(mu, str) else int(mu)
        c = np.zeros(4 ** n, dtype=complex)
        c[d * 4 ** (n - q)] = 1.0
        return cls(n, c)

    @classmethod
    def from_g3(cls, mv: Multivector) -> "CorrelatedElement":
        if mv.sig != G3:
            raise QubitError("from_g3 needs a G3 element")
        return cls(1, _g3_coeffs(mv))

    def to_g3(self) -> Multivector:
        if self.n != 1:
            raise QubitError("to_g3 is for single-qubit elements")
        out = G3.scalar(0.0)
        for k, P in enumerate(_G3_BASIS):
            c = self.coeffs[k]
            out = out + P * c.real + IOTA * P * c.imag
        return out

    # -- arithmetic ----------------------------------------------------------
    def _other(self, other) -> "CorrelatedElement":
        if isinstance(other, CorrelatedElement):
            if other.n != self.n:
                raise QubitError("elements have different qubit counts")
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return CorrelatedElement.scalar(self.n, complex(other))
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return CorrelatedElement(self.n, self.coeffs + o.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return CorrelatedElement(self.n, self.coeffs - o.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CorrelatedElement(self.n, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return CorrelatedElement(self.n, self.coeffs * complex(other))
        o = self._other(other)
        if o is NotImplemented:
            return o
        return CorrelatedElement(self.n, _mul(self.coeffs, o.coeffs, self.n))

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return CorrelatedElement(self.n, self.coeffs * complex(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return CorrelatedElement(self.n, self.coeffs / complex(other))
        return NotImplemented

    # -- involutions and projections ----------------------------------------
    @property
    def dagger(self) -> "CorrelatedElement":
        """Reverse; the Pauli products are Hermitian so only ``iota`` flips."""
        return CorrelatedElement(self.n, self.coeffs.conj())

    @property
    def hat(self) -> "CorrelatedElement":
        """Inversion in the origin: every ``s_mu^q -> -s_mu^q`` and ``iota -> -iota``."""
        sign = np.where(_weights(self.n) % 2, -1.0, 1.0)
        return CorrelatedElement(self.n, self.coeffs.conj() * sign)

    def even(self) -> "CorrelatedElement":
        return CorrelatedElement(self.n, (self.coeffs + self.hat.coeffs) / 2)

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0].real)

    def coeff(self, label: str) -> complex:
        return complex(self.coeffs[label_index(label)])

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def allclose(self, other, tol: float = TOL) -> bool:
        o = self._other(other)
        return bool(np.abs(self.coeffs - o.coeffs).max() <= tol)

    def is_hermitian(self, tol: float = TOL) -> bool:
        return bool(np.abs(self.coeffs.imag).max() <= tol)

    def is_even(self, tol: float = TOL) -> bool:
        return bool(np.abs(self.coeffs - self.hat.coeffs).max() <= tol)

    def terms(self, tol: float = 1e-14) -> dict[str, complex]:
        return {index_label(i, self.n): complex(v) for i, v in enumerate(self.coeffs) if abs(v) > tol}

    def __repr__(self):
        parts = [f"{v:.6g}*{k}" for k, v in self.terms(1e-12).items()]
        return f"CorrelatedElement(n={self.n}, " + (" + ".join(parts) or "0") + ")"

    def __eq__(self, other):
        if not isinstance(other, CorrelatedElement):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None


def _mul(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    F = _phase_table(n)
    m = 4 ** n
    idx = np.arange(m)
    out = np.empty(m, dtype=complex)
    step = max(1, _CHUNK // m)
    for lo in range(0, m, step):
        rows = idx[lo:lo + step]
        # out[c] = sum_b a[c ^ b] b[b] i**F[c, b]
        out[lo:lo + step] = (a[rows[:, None] ^ idx[None, :]] * _IPOW[F[rows]]) @ b
    return out


def _check_qubit(q: int, n: int):
    if not 1 <= q <= n:
        raise QubitError(f"qubit index {q} outside 1..{n}")


def kron(*xs: CorrelatedElement) -> CorrelatedElement:
    """Product of elements acting on disjoint groups of qubits, listed in order."""
    c = np.ones(1, dtype=complex)
    for x in xs:
        c = np.kron(c, x.coeffs)
    return CorrelatedElement(sum(x.n for x in xs), c)


def on_qubit(x: CorrelatedElement, q: int, n: int) -> CorrelatedElement:
    """Place a single-qubit element on qubit ``q`` of an ``n``-qubit register."""
    if x.n != 1:
        raise QubitError("on_qubit takes a single-qubit element")
    _check_qubit(q, n)
    one = CorrelatedElement.scalar(1)
    return kron(*([one] * (q - 1) + [x] + [one] * (n - q)))


def sigma(n: int, q: int, mu: str) -> CorrelatedElement:
    return CorrelatedElement.pauli(n, q, mu)


def e_plus(n: int, q: int) -> CorrelatedElement:
    return (1.0 + sigma(n, q, "z")) / 2


def e_minus(n: int, q: int) -> CorrelatedElement:
    return (1.0 - sigma(n, q, "z")) / 2


def e_plus_all(n: int) -> CorrelatedElement:
    c = np.ones(1, dtype=complex)
    for _ in range(n):
        c = np.kron(c, [0.5, 0, 0, 0.5])
    return CorrelatedElement(n, c)


def correlator(n: int) -> CorrelatedElement:
    """``C = prod_q (1 - iota^1 iota^q)/2``; it is the unit of the correlated ideal."""
    if n < 1:
        raise QubitError("correlator needs N >= 1")
    out = CorrelatedElement.scalar(n, 1.0)
    iota = CorrelatedElement.scalar(n, 1j)
    for _ in range(2, n + 1):
        out = out * ((1.0 - iota * iota) / 2)
    return out


def directional_correlator(n: int) -> CorrelatedElement:
    """``D = prod_{q>1} (1 - iota s_z^1 iota s_z^q)/2``."""
    if n < 1:
        raise QubitError("directional correlator needs N >= 1")
    out = CorrelatedElement.scalar(n, 1.0)
    for q in range(2, n + 1):
        iz1 = 1j * sigma(n, 1, "z")
        izq = 1j * sigma(n, q, "z")
        out = out * ((1.0 - iz1 * izq) / 2)
    return out


def imaginary_unit(n: int) -> CorrelatedElement:
    """``K = iota s_z^1 D``, the right-acting imaginary unit of the spinor ideal."""
    return 1j * sigma(n, 1, "z") * directional_correlator(n)


# -- kets and spinors ---------------------------------------------------------

@dataclass(frozen=True)
class Ket:
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex).reshape(-1)
        n = a.size.bit_length() - 1
        if a.size < 2 or 1 << n != a.size:
            raise QubitError("ket length must be a power of 2 (at least 2)")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def n(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @classmethod
    def basis(cls, bits: str) -> "Ket":
        a = np.zeros(2 ** len(bits), dtype=complex)
        a[int(bits, 2)] = 1.0
        return cls(a)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "Ket":
        nrm = self.norm()
        if nrm == 0:
            raise QubitError("cannot normalise the zero ket")
        return Ket(self.amplitudes / nrm)


# first column of each single-qubit basis matrix: s_0, s_x, s_y, s_z acting on |0>
_COLUMN0 = np.array([[1, 0], [0, 1], [0, 1j], [1, 0]], dtype=complex)
# |0><0| = (1 + s_z)/2 and |1><0| = (s_x - i s_y)/2
_DYAD_FROM0 = np.array([[0.5, 0, 0, 0.5], [0, 0.5, -0.5j, 0]], dtype=complex)


def _per_qubit_map(x: np.ndarray, mat: np.ndarray, n: int, din: int, dout: int) -> np.ndarray:
    t = x.reshape((din,) * n)
    for ax in range(n):
        t = np.moveaxis(np.tensordot(t, mat, axes=([ax], [0])), -1, ax)
    return t.reshape(dout ** n)


class Spinor:
    """Element of the reduced even subalgebra ``(G3+)^(x)N / D``."""

    __slots__ = ("value",)

    def __init__(self, value: CorrelatedElement, check: bool = True, tol: float = TOL):
        if check:
            if not value.is_even(tol):
                raise QubitError("spinor must lie in the even subalgebra")
            D = directional_correlator(value.n)
            if not (value * D).allclose(value, tol):
                raise QubitError("spinor is not reduced by D (value * D != value)")
        self.value = value

    @property
    def n(self) -> int:
        return self.value.n

    def norm2(self) -> float:
        """Squared norm of the corresponding ket, ``2^(N-1) <Psi Psi~>_0``."""
        return 2 ** (self.n - 1) * float(np.vdot(self.value.coeffs, self.value.coeffs).real)

    def times_k(self) -> "Spinor":
        """Right multiplication by ``K``; corresponds to multiplying the ket by ``i``."""
        return Spinor(self.value * imaginary_unit(self.n), check=False)

    def density(self) -> "DensityOperator":
        return density_from_ensemble([1.0], [self])

    def same_state(self, other: "Spinor", tol: float = TOL) -> bool:
        """Equality up to global phase, tested through the induced densities."""
        return self.density().value.allclose(other.density().value, tol)

    def allclose(self, other: "Spinor", tol: float = TOL) -> bool:
        return self.value.allclose(other.value, tol)

    def __repr__(self):
        return f"Spinor({self.value!r})"


def ket_from_spinor(psi: Spinor) -> Ket:
    """First matrix column of ``Psi``, evaluated per qubit."""
    n = psi.n
    return Ket(_per_qubit_map(np.asarray(psi.value.coeffs), _COLUMN0, n, 4, 2))


def spinor_from_ket(k: Ket) -> Spinor:
    """``2 <L>_+`` where ``L = sum_j psi_j |j><0...0|`` built from the dyads above."""
    n = k.n
    L = CorrelatedElement(n, _per_qubit_map(np.asarray(k.amplitudes), _DYAD_FROM0, n, 2, 4))
    return Spinor(2 * L.even(), check=False)


def _check_unitary(U: CorrelatedElement, tol: float = 1e-10):
    if not (U * U.dagger).allclose(1.0, tol):
        raise QubitError("operator is not unitary (U U~ != 1)")


def apply_unitary(U: CorrelatedElement, psi: Spinor, check: bool = True) -> Spinor:
    """``U o Psi = 2 <U Psi E+>_+``."""
    if U.n != psi.n:
        raise QubitError("operator and spinor have different qubit counts")
    if check:
        _check_unitary(U)
    return Spinor(2 * (U * psi.value * e_plus_all(psi.n)).even(), check=False)


def apply_basis(mu: str, q: int, psi: Spinor) -> Spinor:
    """``s_mu^q o Psi = s_mu^q Psi s_z^q``; ``mu = '0'`` is the identity."""
    n = psi.n
    _check_qubit(q, n)
    if mu == "0":
        return psi
    if mu not in "xyz" or len(mu) != 1:
        raise QubitError(f"bad axis {mu!r}")
    return Spinor(sigma(n, q, mu) * psi.value * sigma(n, q, "z"), check=False)


def apply_iota(psi: Spinor) -> Spinor:
    """``iota o Psi = iota Psi s_z^1``."""
    return Spinor(1j * psi.value * sigma(psi.n, 1, "z"), check=False)


# -- densities ----------------------------------------------------------------

class DensityOperator:
    """Hermitian element with scalar part ``2**-N``."""

    __slots__ = ("value",)

    def __init__(self, value: CorrelatedElement, check: bool = True, tol: float = TOL):
        if check:
            if not value.is_hermitian(tol):
                raise QubitError("density operator must be reversion symmetric")
            if abs(value.scalar_part - 2.0 ** -value.n) > tol:
                raise QubitError("density operator must have scalar part 2^-N")
        self.value = value

    @property
    def n(self) -> int:
        return self.value.n

    def __repr__(self):
        return f"DensityOperator({self.value!r})"


def density_from_ensemble(weights: Sequence[float], spinors: Sequence[Spinor]) -> DensityOperator:
    w = np.asarray(weights, dtype=float)
    if len(w) != len(spinors) or len(w) == 0:
        raise QubitError("need one weight per spinor")
    if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise QubitError("weights must be nonnegative and sum to 1")
    n = spinors[0].n
    Ep = e_plus_all(n)
    parts = []
    for wi, s in zip(w, spinors):
        if s.n != n:
            raise QubitError("spinors have different qubit counts")
        if abs(s.norm2() - 1.0) > 1e-10:
            raise QubitError("ensemble spinors must be normalised")
        parts.append(wi * (s.value * Ep * s.value.dagger).coeffs)
    # pairwise reduction keeps the summation order fixed
    while len(parts) > 1:
        parts = [parts[i] + parts[i + 1] if i + 1 < len(parts) else parts[i] for i in range(0, len(parts), 2)]
    c = parts[0].copy()
    c.imag[np.abs(c.imag) < 1e-15] = 0.0
    return DensityOperator(CorrelatedElement(n, c))


def thermal_density(n: int, alpha: float) -> DensityOperator:
    """High-temperature form ``2^-N (1 + alpha sum_q s_z^q)``."""
    out = CorrelatedElement.scalar(n, 1.0)
    for q in range(1, n + 1):
        out = out + alpha * sigma(n, q, "z")
    return DensityOperator(out * 2.0 ** -n)


def expectation(O: CorrelatedElement, rho: DensityOperator) -> float:
    """``2^N <O rho>_0``."""
    if not O.is_hermitian(1e-10):
        raise QubitError("observable must be Hermitian")
    rv = rho.value if isinstance(rho, DensityOperator) else rho
    if O.n != rv.n:
        raise QubitError("observable and density have different qubit counts")
    # only P_k P_k contributes to the scalar part
    return 2 ** O.n * float(np.sum(O.coeffs * rv.coeffs).real)


def product_operator_expand(rho, tol: float = 0.0) -> dict[str, float]:
    """Real product-operator coefficients keyed by labels such as ``'0z'``."""
    v = rho.value if isinstance(rho, DensityOperator) else rho
    if not v.is_hermitian(1e-10):
        raise QubitError("product-operator expansion of a non-Hermitian element")
    return {index_label(i, v.n): float(c.real) for i, c in enumerate(v.coeffs) if abs(c) > tol}


def from_expansion(table: Mapping[str, float]) -> CorrelatedElement:
    return CorrelatedElement.from_labels(table)


def contract(rho, q: int, reinterpret: bool = True):
    """Drop every term that depends on qubit ``q``.

    With ``reinterpret`` the surviving terms are doubled, giving the reduced
    density of the remaining qubits; otherwise the raw ideal value is returned
    as a :class:`CorrelatedElement`.
    """
    v = rho.value if isinstance(rho, DensityOperator) else rho
    n = v.n
    if n < 2:
        raise QubitError("cannot contract the last qubit")
    _check_qubit(q, n)
    kept = np.take(v.coeffs.reshape((4,) * n), 0, axis=q - 1).reshape(-1)
    if not reinterpret:
        return CorrelatedElement(n - 1, kept)
    return DensityOperator(CorrelatedElement(n - 1, 2 * kept), check=isinstance(rho, DensityOperator))


class Diagonalization(NamedTuple):
    eigenvalues: np.ndarray
    rotor: CorrelatedElement
    is_density: bool


def basis_idempotent(n: int, k: int) -> CorrelatedElement:
    """``E(k) = prod_q E^q_{bit_q(k)}``, the projector onto ``|k>``."""
    out = CorrelatedElement.scalar(n, 1.0)
    for q in range(1, n + 1):
        bit = (k >> (n - q)) & 1
        out = out * (e_minus(n, q) if bit else e_plus(n, q))
    return out


def diagonalize(rho, tol: float = 1e-10) -> Diagonalization:
    """Eigenvalues (descending) and a unitary ``R`` with ``rho = R (sum rho_k E(k)) R~``."""
    from .matrix_oracle import hermitian_eigen, represent, unrepresent

    v = rho.value if isinstance(rho, DensityOperator) else rho
    w, V = hermitian_eigen(represent(v))
    order = np.argsort(-w, kind="stable")
    w = w[order]
    R = unrepresent(V[:, order])
    ok = bool(w.min() >= -tol and abs(w.sum() - 1.0) <= tol)
    return Diagonalization(w, R, ok)


def expm(X: CorrelatedElement, cap: int = 64) -> CorrelatedElement:
    """Exponential by scaling, a truncated series and repeated squaring."""
    size = float(np.abs(X.coeffs).sum())
    k = 0
    while size / 2 ** k >= 0.5:
        k += 1
    x = X / 2 ** k
    out = CorrelatedElement.scalar(X.n, 1.0)
    term = out
    for m in range(1, cap + 1):
        term = term * x / m
        out = out + term
        if np.abs(term.coeffs).max() < 1e-18:
            break
    for _ in range(k):
        out = out * out
    return out


# -- raw tensor algebra (cross-validation only) ---------------------------------

@lru_cache(maxsize=None)
def raw_signature(n: int) -> Signature:
    """``G(N, 3N)``: one copy of spacetime per qubit, time generators first."""
    labels = tuple(f"t{q}" for q in range(1, n + 1)) + tuple(
        f"{a}{q}" for q in range(1, n + 1) for a in "xyz"
    )
    return Signature(n, 3 * n, labels)


def raw_sigma(n: int, q: int, mu: str) -> Multivector:
    sig = raw_signature(n)
    if mu == "0":
        return sig.scalar(1.0)
    return sig.gen(f"{mu}{q}") * sig.gen(f"t{q}")


def raw_iota(n: int, q: int) -> Multivector:
    return raw_sigma(n, q, "x") * raw_sigma(n, q, "y") * raw_sigma(n, q, "z")


def raw_correlator(n: int) -> Multivector:
    sig = raw_signature(n)
    out = sig.scalar(1.0)
    for q in range(2, n + 1):
        out = out * ((1.0 - raw_iota(n, q) * raw_iota(n, 1)) / 2)
    return out


def raw_directional_correlator(n: int) -> Multivector:
    sig = raw_signature(n)
    out = sig.scalar(1.0)
    for q in range(2, n + 1):
        a = raw_iota(n, 1) * raw_sigma(n, 1, "z")
        b = raw_iota(n, q) * raw_sigma(n, q, "z")
        out = out * ((1.0 - a * b) / 2)
    return out


@lru_cache(maxsize=None)
def _raw_tables(n: int):
    """Map each raw blade of the Pauli subalgebra to its per-qubit factors."""
    from .spacetime import DIRAC, pauli_extract

    sig = raw_signature(n)
    even_dirac = [m for m in basis_blades(DIRAC) if bin(m).count("1") % 2 == 0]
    single = {m: _g3_coeffs(pauli_extract(Multivector(DIRAC, {m: 1.0}))) for m in even_dirac}

    def copy_blade(q, m):
        labels = [lab for i, lab in enumerate(("t", "x", "y", "z")) if m >> i & 1]
        return sig.blade(*[f"{lab}{q}" for lab in labels]) if labels else sig.scalar(1.0)

    table = {}
    for combo in itertools.product(even_dirac, repeat=n):
        mv = sig.scalar(1.0)
        for q, m in enumerate(combo, start=1):
            mv = mv * copy_blade(q, m)
        (mask, sign), = mv.items()
        c = np.ones(1, dtype=complex)
        for m in combo:
            c = np.kron(c, single[m])
        table[mask] = sign * c
    return table


def lift_raw(x: Multivector, n: int) -> CorrelatedElement:
    """Image of a raw element of the Pauli subalgebra in the correlated ideal."""
    table = _raw_tables(n)
    c = np.zeros(4 ** n, dtype=complex)
    for mask, v in x.items():
        if mask not in table:
            raise QubitError("raw element lies outside the product of even subalgebras")
        c += v * table[mask]
    return CorrelatedElement(n, c)


def embed_raw(X: CorrelatedElement) -> Multivector:
    """Raw representative ``(sum_k (Re c_k + Im c_k iota^1) P_k) C``."""
    n = X.n
    sig = raw_signature(n)
    i1 = raw_iota(n, 1)
    out = sig.scalar(0.0)
    for k, c in enumerate(X.coeffs):
        if c == 0:
            continue
        P = sig.scalar(1.0)
        for q, d in enumerate(index_label(k, n), start=1):
            P = P * raw_sigma(n, q, d)
        out = out + (c.real + i1 * c.imag) * P
    return out * raw_correlator(n)


RAW_WORD_BASIS = ("1", "x", "y", "z", "I", "J", "K", "i")


def raw_word_element(n: int, q: int, code: str) -> Multivector:
    """One of the eight per-qubit G3 basis elements inside the raw algebra."""
    s = {m: raw_sigma(n, q, m) for m in "xyz"}
    return {
        "1": raw_signature(n).scalar(1.0),
        "x": s["x"], "y": s["y"], "z": s["z"],
        "I": s["y"] * s["z"], "J": s["z"] * s["x"], "K": s["x"] * s["y"],
        "i": raw_iota(n, q),
    }[code]


def random_raw_element(n: int, rng: np.random.Generator, terms: int = 4) -> Multivector:
    """Sum of a few random words, one factor per qubit, with Gaussian weights."""
    sig = raw_signature(n)
    out = sig.scalar(0.0)
    for _ in range(terms):
        w = sig.scalar(float(rng.normal()))
        for q in range(1, n + 1):
            w = w * raw_word_element(n, q, RAW_WORD_BASIS[rng.integers(8)])
        out = out + w
    return out
