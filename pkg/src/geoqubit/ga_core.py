"""Real Clifford algebras of arbitrary non-degenerate signature.

Basis blades are stored as integer bitmasks over the generators (bit ``i`` set
means generator ``i`` is a factor, in ascending order).  A :class:`Multivector`
is a sparse ``{mask: coefficient}`` map tied to a :class:`Signature`.

Products are evaluated pairwise over the stored blades with numpy, so sparse
elements of large algebras (e.g. the 12-generator algebra of three copies of
spacetime) stay cheap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

PRUNE_TOL = 1e-14
COMPARE_TOL = 1e-10
EXP_SERIES_CAP = 64


class SignatureError(ValueError):
    """Operands belong to different algebras."""


class GradeError(ValueError):
    """An operand does not have the grade an operation requires."""


class ConvergenceError(ArithmeticError):
    """A power series did not converge within its term cap."""


@dataclass(frozen=True)
class Signature:
    """Metric data of a real Clifford algebra.

    The first ``p`` generators square to +1 and the remaining ``q`` to -1.
    ``time`` optionally names a designated time-like generator, which is what
    :func:`spatial_reverse` conjugates with.
    """

    p: int
    q: int
    labels: tuple[str, ...] | None = None
    time: str | None = None
    _neg_mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q > 64:
            raise ValueError(f"invalid signature ({self.p}, {self.q})")
        labels = self.labels
        if labels is None:
            labels = tuple(f"e{i + 1}" for i in range(self.dim))
        labels = tuple(labels)
        if len(labels) != self.dim or len(set(labels)) != self.dim:
            raise ValueError("generator labels must be unique, one per generator")
        object.__setattr__(self, "labels", labels)
        if self.time is not None:
            i = labels.index(self.time)
            if i >= self.p:
                raise ValueError("time generator must square to +1")
        neg = 0
        for i in range(self.p, self.dim):
            neg |= 1 << i
        object.__setattr__(self, "_neg_mask", neg)

    @property
    def dim(self) -> int:
        return self.p + self.q

    @property
    def metric(self) -> tuple[int, ...]:
        return tuple(1 if i < self.p else -1 for i in range(self.dim))

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def scalar(self, value: float = 1.0) -> "Multivector":
        return Multivector(self, {0: float(value)})

    def blade(self, *labels: str, coeff: float = 1.0) -> "Multivector":
        """Geometric product of the named generators, in the order given."""
        out = self.scalar(coeff)
        for lab in labels:
            out = out * self.gen(lab)
        return out

    def gen(self, label: str | int) -> "Multivector":
        i = label if isinstance(label, int) else self.index(label)
        return Multivector(self, {1 << i: 1.0})

    def vector(self, coords: Sequence[float], labels: Sequence[str] | None = None) -> "Multivector":
        labels = self.labels if labels is None else labels
        if len(coords) != len(labels):
            raise ValueError("coordinate count does not match generator count")
        return Multivector(self, {1 << self.index(l): float(c) for l, c in zip(labels, coords)})

    def pseudoscalar(self) -> "Multivector":
        return Multivector(self, {(1 << self.dim) - 1: 1.0})

    def blade_name(self, mask: int) -> str:
        if mask == 0:
            return "1"
        return "^".join(self.labels[i] for i in range(self.dim) if mask >> i & 1)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def blade_sign(a: int, b: int, sig: Signature) -> int:
    """Sign of the product of canonical blades ``a`` and ``b``.

    Counts the transpositions needed to merge the two ascending generator
    lists, then applies the metric sign of every annihilated generator.
    """
    s = 0
    x = a >> 1
    while x:
        s += _popcount(x & b)
        x >>= 1
    s += _popcount(a & b & sig._neg_mask)
    return -1 if s & 1 else 1


def _pair_signs(A: np.ndarray, B: np.ndarray, neg_mask: int, dim: int) -> np.ndarray:
    """Vectorised :func:`blade_sign` over all pairs of ``A`` x ``B``."""
    x = A[:, None] >> np.uint64(1)
    Bb = B[None, :]
    s = np.zeros((A.size, B.size), dtype=np.int64)
    for _ in range(max(dim - 1, 0)):
        s += np.bitwise_count(x & Bb)
        x = x >> np.uint64(1)
    s += np.bitwise_count(A[:, None] & Bb & np.uint64(neg_mask))
    return 1 - 2 * (s & 1)


class Multivector:
    """Sparse real multivector.  Treated as immutable after construction."""

    __slots__ = ("sig", "_c")

    def __init__(self, sig: Signature, coeffs: Mapping[int, float] | None = None):
        self.sig = sig
        full = (1 << sig.dim) - 1
        c = {}
        for k, v in (coeffs or {}).items():
            k = int(k)
            if k & ~full:
                raise ValueError(f"blade mask {k:b} outside the algebra")
            v = float(v)
            if abs(v) >= PRUNE_TOL:
                c[k] = v
        self._c = c

    # -- access -------------------------------------------------------------
    @property
    def coeffs(self) -> dict[int, float]:
        return dict(self._c)

    def __getitem__(self, mask: int) -> float:
        return self._c.get(mask, 0.0)

    def items(self):
        return self._c.items()

    @property
    def scalar(self) -> float:
        return self._c.get(0, 0.0)

    def grades(self) -> set[int]:
        return {_popcount(k) for k in self._c}

    def is_zero(self, tol: float = COMPARE_TOL) -> bool:
        return all(abs(v) <= tol for v in self._c.values())

    def allclose(self, other, tol: float = COMPARE_TOL) -> bool:
        return (self - other).max_abs() <= tol

    def max_abs(self) -> float:
        return max((abs(v) for v in self._c.values()), default=0.0)

    def vector_coords(self) -> np.ndarray:
        """Grade-1 coefficients in generator order."""
        return np.array([self._c.get(1 << i, 0.0) for i in range(self.sig.dim)])

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Multivector":
        if isinstance(other, Multivector):
            if other.sig != self.sig:
                raise SignatureError("multivectors belong to different algebras")
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self.sig, {0: float(other)})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0.0) + v
        return Multivector(self.sig, c)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.sig, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self.sig, {k: v * other for k, v in self._c.items()})
        return geometric_product(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self * (1.0 / other)
        return NotImplemented

    def __xor__(self, other):
        return outer_product(self, other)

    def __invert__(self):
        return reverse(self)

    def grade(self, k: int) -> "Multivector":
        return grade_project(self, k)

    def even(self) -> "Multivector":
        return Multivector(self.sig, {k: v for k, v in self._c.items() if _popcount(k) % 2 == 0})

    def norm2(self) -> float:
        """Scalar part of ``a * reverse(a)``."""
        return (self * reverse(self)).scalar

    def __repr__(self):
        if not self._c:
            return "0"
        terms = []
        for k in sorted(self._c, key=lambda m: (_popcount(m), m)):
            v = self._c[k]
            terms.append(f"{v:.6g}" if k == 0 else f"{v:.6g}*{self.sig.blade_name(k)}")
        return " + ".join(terms)

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.sig == other.sig and self._c == other._c

    __hash__ = None


def _check_same(a: Multivector, b: Multivector):
    if not isinstance(a, Multivector) or not isinstance(b, Multivector):
        raise TypeError("expected Multivector operands")
    if a.sig != b.sig:
        raise SignatureError("multivectors belong to different algebras")


def _product(a: Multivector, b: Multivector, keep) -> Multivector:
    _check_same(a, b)
    if not a._c or not b._c:
        return Multivector(a.sig)
    ka = np.fromiter(a._c.keys(), dtype=np.uint64, count=len(a._c))
    va = np.fromiter(a._c.values(), dtype=float, count=len(a._c))
    kb = np.fromiter(b._c.keys(), dtype=np.uint64, count=len(b._c))
    vb = np.fromiter(b._c.values(), dtype=float, count=len(b._c))
    signs = _pair_signs(ka, kb, a.sig._neg_mask, a.sig.dim)
    masks = ka[:, None] ^ kb[None, :]
    vals = signs * (va[:, None] * vb[None, :])
    sel = keep(ka[:, None], kb[None, :], masks)
    if sel is not None:
        masks = masks[sel]
        vals = vals[sel]
    masks = masks.ravel()
    vals = vals.ravel()
    uniq, inv = np.unique(masks, return_inverse=True)
    sums = np.zeros(uniq.size)
    np.add.at(sums, inv, vals)
    return Multivector(a.sig, dict(zip(uniq.tolist(), sums.tolist())))


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    return _product(a, b, lambda x, y, m: None)


def outer_product(a: Multivector, b: Multivector) -> Multivector:
    """Exterior product: the geometric product restricted to disjoint blades."""
    return _product(a, b, lambda x, y, m: np.broadcast_to((x & y) == 0, m.shape))


def inner_product(a: Multivector, b: Multivector) -> Multivector:
    """Hestenes inner product ``<A_r B_s>_{|r-s|}``, zero when either side is scalar."""
    def keep(x, y, m):
        gx = np.bitwise_count(x).astype(int)
        gy = np.bitwise_count(y).astype(int)
        gm = np.bitwise_count(m).astype(int)
        return (gm == np.abs(gx - gy)) & (gx > 0) & (gy > 0)
    return _product(a, b, keep)


def left_contraction(a: Multivector, b: Multivector) -> Multivector:
    def keep(x, y, m):
        return np.broadcast_to((x & ~y) == 0, m.shape)
    return _product(a, b, keep)


def inner_product_vectors(a: Multivector, b: Multivector) -> float:
    _check_same(a, b)
    if a.grades() - {1} or b.grades() - {1}:
        raise GradeError("inner_product_vectors needs grade-1 arguments")
    return geometric_product(a, b).scalar


def grade_project(a: Multivector, k: int) -> Multivector:
    if not 0 <= k <= a.sig.dim:
        raise GradeError(f"grade {k} outside 0..{a.sig.dim}")
    return Multivector(a.sig, {m: v for m, v in a._c.items() if _popcount(m) == k})


def _grade_sign_map(a: Multivector, sign_of_grade) -> Multivector:
    return Multivector(a.sig, {m: v * sign_of_grade(_popcount(m)) for m, v in a._c.items()})


def reverse(a: Multivector) -> Multivector:
    return _grade_sign_map(a, lambda k: -1.0 if (k * (k - 1) // 2) % 2 else 1.0)


def grade_involution(a: Multivector) -> Multivector:
    return _grade_sign_map(a, lambda k: -1.0 if k % 2 else 1.0)


def conjugate(a: Multivector) -> Multivector:
    """Clifford conjugate: reverse composed with grade involution."""
    return reverse(grade_involution(a))


def spatial_reverse(a: Multivector) -> Multivector:
    """Frame-dependent reverse ``g_t ~a g_t`` for the signature's time generator."""
    if a.sig.time is None:
        raise ValueError("signature has no designated time generator")
    gt = a.sig.gen(a.sig.time)
    return gt * reverse(a) * gt


def inverse(a: Multivector) -> Multivector:
    """Inverse of a versor (an element whose ``a ~a`` is a nonzero scalar)."""
    n = a * reverse(a)
    if not (n - n.scalar).is_zero() or abs(n.scalar) < PRUNE_TOL:
        raise ValueError("element is not an invertible versor")
    return reverse(a) / n.scalar


def exp_series(a: Multivector, terms: int) -> Multivector:
    """Plain truncated Taylor series; no scaling."""
    out = a.sig.scalar(1.0)
    term = a.sig.scalar(1.0)
    for n in range(1, terms):
        term = term * a / n
        out = out + term
    return out


def exp_bivector(B: Multivector, cap: int = EXP_SERIES_CAP) -> Multivector:
    """Exponential of a bivector (or any element, via the series fallback).

    When ``B*B`` is a scalar the closed trigonometric or hyperbolic form is
    used.  Otherwise ``B`` is scaled by ``2**-k`` until its coefficient norm is
    below 0.5, summed as a series, and squared back ``k`` times.
    """
    sq = B * B
    if (sq - sq.scalar).is_zero(PRUNE_TOL * max(1.0, sq.max_abs())):
        s = sq.scalar
        if s < -PRUNE_TOL:
            w = math.sqrt(-s)
            return math.cos(w) + B * (math.sin(w) / w)
        if s > PRUNE_TOL:
            w = math.sqrt(s)
            return math.cosh(w) + B * (math.sinh(w) / w)
        return 1.0 + B
    size = math.sqrt(sum(v * v for v in B._c.values()))
    k = 0
    while size / 2 ** k >= 0.5:
        k += 1
    x = B / 2 ** k
    out = B.sig.scalar(1.0)
    term = B.sig.scalar(1.0)
    for n in range(1, cap + 1):
        term = term * x / n
        out = out + term
        if term.max_abs() < 1e-17:
            break
    else:
        raise ConvergenceError("exponential series did not converge")
    for _ in range(k):
        out = out * out
    return out


def outer_exponential(B: Multivector, tau: float) -> Multivector:
    """Outer-product exponential of ``-B*tau`` for a unit bivector ``B``.

    Summed as ``sum_k (-tau B)^{wedge k} / k!``; for a simple bivector the
    series stops after the linear term, giving ``1 - B tau``.  Dividing by
    ``sqrt(1 + tau**2)`` gives ``exp_bivector(-B*theta/2)`` with
    ``theta = 2*atan(tau)``.
    """
    if B.grades() - {2}:
        raise GradeError("outer_exponential needs a bivector")
    sq = B * B
    if not (sq + 1.0).is_zero(1e-12):
        raise ValueError("outer_exponential needs a unit blade bivector (B*B = -1)")
    x = B * (-tau)
    out = B.sig.scalar(1.0)
    term = B.sig.scalar(1.0)
    for n in range(1, B.sig.dim // 2 + 1):
        term = outer_product(term, x) / n
        if term.is_zero(PRUNE_TOL):
            break
        out = out + term
    return out


def basis_blades(sig: Signature, grade: int | None = None) -> list[int]:
    masks = range(1 << sig.dim)
    if grade is None:
        return list(masks)
    return [m for m in masks if _popcount(m) == grade]


def from_dense(sig: Signature, values: Iterable[float]) -> Multivector:
    return Multivector(sig, dict(enumerate(values)))
