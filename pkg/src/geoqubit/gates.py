"""Logic gates as unitary elements of the correlated algebra, and circuits."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .multiqubit import (
    CorrelatedElement,
    Ket,
    QubitError,
    Spinor,
    apply_unitary,
    e_minus,
    e_plus,
    expm,
    on_qubit,
    sigma,
    spinor_from_ket,
)
from .pauli_spin import rotor_from_axis_angle

GATE_KINDS = ("NOT", "CNOT", "HADAMARD", "ROTATION", "PHASE")
_ALIASES = {"H": "HADAMARD", "ROT": "ROTATION", "X": "NOT", "CX": "CNOT"}


class CircuitError(ValueError):
    pass


def _check(n: int, *qs: int):
    for q in qs:
        if not 1 <= q <= n:
            raise QubitError(f"qubit index {q} outside 1..{n}")
    if len(set(qs)) != len(qs):
        raise QubitError("gate qubits must be distinct")


def not_gate(q: int, n: int = 1) -> CorrelatedElement:
    """``iota s_x^q``; acts on kets as ``i X``."""
    _check(n, q)
    return 1j * sigma(n, q, "x")


def cnot(control: int, target: int, n: int = 2, form: str = "closed") -> CorrelatedElement:
    """Controlled NOT ``N^{t|c}``.

    ``form`` selects one of the three equivalent expressions: ``closed``
    ``(1 + iota s_z^c)/sqrt2 (E+^c + E-^c iota s_x^t)``, ``product``
    ``exp(iota pi s_z^c/4) exp(iota pi E-^c s_x^t/2)`` or ``exponential``
    ``exp(-iota pi (E-^c (1 - s_x^t)/2 - 1/4))``.
    """
    _check(n, control, target)
    zc = sigma(n, control, "z")
    xt = sigma(n, target, "x")
    Em = e_minus(n, control)
    if form == "closed":
        return (1.0 + 1j * zc) / math.sqrt(2) * (e_plus(n, control) + Em * (1j * xt))
    if form == "product":
        return expm(1j * math.pi / 4 * zc) * expm(1j * math.pi / 2 * (Em * xt))
    if form == "exponential":
        return expm(-1j * math.pi * (Em * (1.0 - xt) / 2 - 0.25))
    raise ValueError(f"unknown cnot form {form!r}")


def hadamard(q: int, n: int = 1) -> CorrelatedElement:
    """``iota (s_x^q + s_z^q)/sqrt2``, a rotation by pi; squares to -1."""
    _check(n, q)
    return 1j * (sigma(n, q, "x") + sigma(n, q, "z")) / math.sqrt(2)


def rotation(q: int, axis, angle: float, n: int = 1) -> CorrelatedElement:
    """Single-qubit rotor ``exp(-iota r theta/2)`` placed on qubit ``q``."""
    _check(n, q)
    R = rotor_from_axis_angle(axis, angle)
    return on_qubit(CorrelatedElement.from_g3(R.value), q, n)


def phase(q: int, angle: float, n: int = 1) -> CorrelatedElement:
    """``exp(-iota theta s_z^q / 2)``."""
    return rotation(q, "z", angle, n)


def conjugate_cnot_by_hadamard(control: int, target: int, n: int = 2) -> CorrelatedElement:
    """``H^t N^{t|c} (H^t)^-1``, equal to ``exp(-iota pi (E-^c E-^t - 1/4))``.

    Since ``H*H = -1`` the literal sandwich ``H N H`` is the negative of this.
    """
    H = hadamard(target, n)
    return H * cnot(control, target, n) * H.dagger


def cz_exponential(control: int, target: int, n: int = 2) -> CorrelatedElement:
    _check(n, control, target)
    return expm(-1j * math.pi * (e_minus(n, control) * e_minus(n, target) - 0.25))


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        kind = _ALIASES.get(self.kind.upper(), self.kind.upper())
        if kind not in GATE_KINDS:
            raise CircuitError(f"unknown gate {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        qs = tuple(int(q) for q in self.qubits)
        want = 2 if kind == "CNOT" else 1
        if len(qs) != want:
            raise CircuitError(f"{kind} takes {want} qubit index(es)")
        if len(set(qs)) != len(qs):
            raise CircuitError("gate qubits must be distinct")
        if any(q < 1 for q in qs):
            raise CircuitError("qubit indices are 1-based")
        object.__setattr__(self, "qubits", qs)
        if kind in ("ROTATION", "PHASE") and "angle" not in self.params:
            raise CircuitError(f"{kind} needs angle=")
        if kind == "ROTATION" and "axis" not in self.params:
            raise CircuitError("ROTATION needs axis=")

    def element(self, n: int) -> CorrelatedElement:
        q = self.qubits
        if self.kind == "NOT":
            return not_gate(q[0], n)
        if self.kind == "CNOT":
            return cnot(q[0], q[1], n)
        if self.kind == "HADAMARD":
            return hadamard(q[0], n)
        if self.kind == "ROTATION":
            return rotation(q[0], self.params["axis"], self.params["angle"], n)
        return phase(q[0], self.params["angle"], n)


@dataclass(frozen=True)
class CircuitProgram:
    n_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.n_qubits < 1:
            raise CircuitError("a circuit needs at least one qubit")
        for g in self.gates:
            if max(g.qubits) > self.n_qubits:
                raise CircuitError(f"{g.kind} on qubit {max(g.qubits)} but only {self.n_qubits} qubits")

    def unitary(self) -> CorrelatedElement:
        U = CorrelatedElement.scalar(self.n_qubits, 1.0)
        for g in self.gates:
            U = g.element(self.n_qubits) * U
        return U


def _parse_axis(text: str):
    if text in ("x", "y", "z"):
        return text
    v = np.array([float(t) for t in text.split(",")])
    if v.shape != (3,):
        raise CircuitError(f"axis must be x, y, z or three comma-separated numbers, got {text!r}")
    nv = np.linalg.norm(v)
    if nv == 0:
        raise CircuitError("axis must be nonzero")
    return v / nv


def parse_circuit(text: str, n_qubits: int | None = None) -> CircuitProgram:
    """Parse lines such as ``H 1``, ``CNOT 1 2`` or ``ROT 2 axis=x angle=1.5708``."""
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        qubits, params = [], {}
        try:
            for t in toks[1:]:
                if "=" in t:
                    k, v = t.split("=", 1)
                    k = k.lower()
                    if k == "angle":
                        params[k] = float(v)
                    elif k == "axis":
                        params[k] = _parse_axis(v.lower())
                    else:
                        raise CircuitError(f"unknown parameter {k!r}")
                else:
                    qubits.append(int(t))
            gates.append(Gate(toks[0], tuple(qubits), params))
        except (CircuitError, ValueError) as exc:
            raise CircuitError(f"line {lineno}: {exc}") from None
    if n_qubits is None:
        n_qubits = max((max(g.qubits) for g in gates), default=1)
    return CircuitProgram(n_qubits, gates)


def run_circuit(prog: CircuitProgram, initial: Ket | Spinor) -> Spinor:
    """Apply the gates left to right with ``U o Psi``."""
    psi = initial if isinstance(initial, Spinor) else spinor_from_ket(initial)
    if psi.n != prog.n_qubits:
        raise CircuitError(f"initial state has {psi.n} qubits, circuit has {prog.n_qubits}")
    for g in prog.gates:
        psi = apply_unitary(g.element(prog.n_qubits), psi, check=False)
    return psi
