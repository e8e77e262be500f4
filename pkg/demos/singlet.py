"""Build the singlet from |11> with a Hadamard and a controlled NOT.

Prints the state as a ket and as a product-operator expansion, the reduced
state of qubit 1, and the spectrum of the partial transpose.
"""
import numpy as np

from geoqubit.channels import partial_transpose
from geoqubit.gates import parse_circuit, run_circuit
from geoqubit.matrix_oracle import hermitian_eigen, represent
from geoqubit.multiqubit import Ket, contract, ket_from_spinor, product_operator_expand
from geoqubit.schmidt import schmidt_decompose

prog = parse_circuit("H 1\nCNOT 1 2\n")
psi = run_circuit(prog, Ket.basis("11"))

amps = ket_from_spinor(psi).amplitudes
amps = amps * abs(amps[1]) / amps[1]  # make the |01> amplitude real positive
print("ket:", np.round(amps.real, 12) + 0.0)

rho = psi.density()
print("density terms:", {k: round(v, 12) for k, v in product_operator_expand(rho, 1e-14).items()})
print("qubit 1 alone:", contract(rho, 2).value.terms())

w, _ = hermitian_eigen(represent(partial_transpose(rho, 1)))
print("partial transpose spectrum:", np.round(w, 12))  # one negative eigenvalue: entangled

f = schmidt_decompose(psi)
print(f"varsigma = {f.varsigma:.12f}, singular values = {f.singular_values}")
