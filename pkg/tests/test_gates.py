import math

import numpy as np
import pytest

from conftest import random_ket
from geoqubit.gates import (
    CircuitError,
    CircuitProgram,
    Gate,
    cnot,
    conjugate_cnot_by_hadamard,
    cz_exponential,
    hadamard,
    not_gate,
    parse_circuit,
    phase,
    rotation,
    run_circuit,
)
from geoqubit.matrix_oracle import represent
from geoqubit.multiqubit import (
    CorrelatedElement,
    Ket,
    QubitError,
    apply_unitary,
    e_minus,
    ket_from_spinor,
    sigma,
    spinor_from_ket,
)

SQI = np.sqrt(1j)
PERM = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def same_up_to_phase(a, b, tol=1e-12):
    a, b = np.asarray(a), np.asarray(b)
    return abs(abs(np.vdot(a, b)) - np.linalg.norm(a) * np.linalg.norm(b)) < tol


def run(prog_text, bits):
    return ket_from_spinor(run_circuit(parse_circuit(prog_text), Ket.basis(bits))).amplitudes


def test_not_gate():
    N = not_gate(1)
    assert (N * N).allclose(-1.0)
    rho = apply_unitary(N, spinor_from_ket(Ket.basis("0"))).density()
    assert rho.value.allclose(e_minus(1, 1), 1e-15)
    plus = spinor_from_ket(Ket(np.array([1, 1]) / math.sqrt(2)))
    out = ket_from_spinor(apply_unitary(N, plus)).amplitudes
    assert np.allclose(out, 1j * np.array([1, 1]) / math.sqrt(2), atol=1e-15)
    # the naive candidate iota sy does not preserve the superposition
    naive = apply_unitary(1j * sigma(1, 1, "y"), plus)
    assert naive.value.allclose((1 + 1j * sigma(1, 1, "y")) / math.sqrt(2), 1e-15)


@pytest.mark.parametrize("form", ["closed", "product", "exponential"])
def test_cnot_forms(form):
    M = represent(cnot(1, 2, form=form))
    assert np.allclose(M, SQI * PERM, atol=1e-12)


def test_cnot_actions_and_errors():
    for bits, out in (("10", "11"), ("00", "00"), ("11", "10"), ("01", "01")):
        assert same_up_to_phase(run("CNOT 1 2", bits), Ket.basis(out).amplitudes)
    with pytest.raises(QubitError):
        cnot(1, 1)
    with pytest.raises(ValueError):
        cnot(1, 2, form="bogus")


def test_cnot_commutes_with_control_z_and_target_x():
    for n, c, t in ((2, 1, 2), (2, 2, 1), (3, 3, 1)):
        N = cnot(c, t, n)
        for P in (sigma(n, c, "z"), sigma(n, t, "x")):
            assert (N * P - P * N).norm() < 1e-12


def test_hadamard():
    H = hadamard(1)
    assert (H * H).allclose(-1.0)
    h0 = ket_from_spinor(apply_unitary(H, spinor_from_ket(Ket.basis("0")))).amplitudes
    h1 = ket_from_spinor(apply_unitary(H, spinor_from_ket(Ket.basis("1")))).amplitudes
    assert np.allclose(h0, 1j * np.array([1, 1]) / math.sqrt(2), atol=1e-15)
    assert np.allclose(h1, 1j * np.array([1, -1]) / math.sqrt(2), atol=1e-15)
    assert spinor_from_ket(Ket(h0)).value.allclose((1j * sigma(1, 1, "z") + 1j * sigma(1, 1, "x")) / math.sqrt(2), 1e-15)


def test_hadamard_twice_is_minus_identity(rng):
    k = random_ket(2, rng)
    psi = spinor_from_ket(k)
    H = hadamard(2, 2)
    twice = apply_unitary(H, apply_unitary(H, psi))
    assert np.allclose(ket_from_spinor(twice).amplitudes, -k.amplitudes, atol=1e-12)
    assert twice.same_state(psi)


def test_hadamard_conjugated_cnot():
    X = conjugate_cnot_by_hadamard(1, 2)
    assert X.allclose(cz_exponential(1, 2), 1e-12)
    M = represent(X)
    assert np.allclose(M, np.diag(SQI * np.array([1, 1, 1, -1])), atol=1e-12)
    # the literal H N H differs by the sign from H*H = -1
    H = hadamard(2, 2)
    assert (H * cnot(1, 2) * H).allclose(-X, 1e-12)


def test_gates_are_unitary(rng):
    gates = [not_gate(2, 3), cnot(3, 1, 3), hadamard(1, 3), rotation(2, [0.6, 0.0, 0.8], 1.3, 3),
             phase(3, 0.4, 3), cz_exponential(1, 3, 3)]
    for U in gates:
        assert (U * U.dagger).allclose(1.0, 1e-12)


def test_phase_matches_matrix():
    from scipy.linalg import expm

    M = represent(phase(1, 0.7))
    assert np.allclose(M, expm(-0.35j * np.diag([1, -1])), atol=1e-14)


def test_singlet_circuit():
    prog = parse_circuit("H 1\nCNOT 1 2")
    psi = run_circuit(prog, Ket.basis("11"))
    amps = ket_from_spinor(psi).amplitudes
    singlet = np.array([0, -1, 1, 0]) / math.sqrt(2)
    assert np.allclose(amps, np.sqrt(-1j) * singlet, atol=1e-15)
    assert same_up_to_phase(amps, singlet)
    # intermediate line: (iota/2)(sy^2 + sx^2 - sy^1 - sx^1) D
    from geoqubit.multiqubit import directional_correlator

    mid = 0.5j * (sigma(2, 2, "y") + sigma(2, 2, "x") - sigma(2, 1, "y") - sigma(2, 1, "x"))
    assert psi.value.allclose(mid * directional_correlator(2), 1e-15)
    rho = psi.density()
    expect = CorrelatedElement.from_labels({"00": 0.25, "xx": -0.25, "yy": -0.25, "zz": -0.25})
    assert rho.value.allclose(expect, 1e-15)


def test_empty_program():
    prog = parse_circuit("# nothing\n", n_qubits=2)
    psi = run_circuit(prog, Ket.basis("01"))
    assert np.allclose(ket_from_spinor(psi).amplitudes, Ket.basis("01").amplitudes)


def test_random_program_matches_oracle(rng):
    from geoqubit.cli import random_circuit

    for seed in range(5):
        prog = random_circuit(3, 5, np.random.default_rng(seed))
        k = random_ket(3, rng)
        ref = k.amplitudes
        for g in prog.gates:
            ref = represent(g.element(3)) @ ref
        out = ket_from_spinor(run_circuit(prog, spinor_from_ket(k))).amplitudes
        assert np.allclose(out, ref, atol=1e-12)
        assert np.allclose(represent(prog.unitary()) @ k.amplitudes, ref, atol=1e-12)


def test_parse_circuit():
    prog = parse_circuit("H 1  # comment\nCX 1 2\nROT 2 axis=x angle=1.5708\nPHASE 1 angle=0.785\nROT 1 axis=1,1,0 angle=0.1\n")
    assert [g.kind for g in prog.gates] == ["HADAMARD", "CNOT", "ROTATION", "PHASE", "ROTATION"]
    assert prog.n_qubits == 2
    assert np.allclose(prog.gates[4].params["axis"], [1 / math.sqrt(2), 1 / math.sqrt(2), 0])
    with pytest.raises(CircuitError, match="line 2"):
        parse_circuit("H 1\nFOO 1")
    with pytest.raises(CircuitError):
        parse_circuit("ROT 1 angle=1")
    with pytest.raises(CircuitError):
        parse_circuit("CNOT 1 1")
    with pytest.raises(CircuitError):
        parse_circuit("H 3", n_qubits=2)
    with pytest.raises(CircuitError):
        parse_circuit("H 0")


def test_gate_and_program_validation():
    with pytest.raises(CircuitError):
        Gate("CNOT", (1,))
    with pytest.raises(CircuitError):
        CircuitProgram(0)
    with pytest.raises(CircuitError):
        run_circuit(CircuitProgram(2), Ket.basis("0"))
