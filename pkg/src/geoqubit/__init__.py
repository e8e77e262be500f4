"""Geometric-algebra model of qubits, gates, channels and entanglement."""
from .ga_core import Multivector, Signature, geometric_product, outer_product, reverse
from .multiqubit import (
    CorrelatedElement,
    DensityOperator,
    Ket,
    Spinor,
    apply_unitary,
    contract,
    density_from_ensemble,
    expectation,
    ket_from_spinor,
    spinor_from_ket,
)
from .gates import CircuitProgram, Gate, cnot, hadamard, not_gate, parse_circuit, run_circuit
from .channels import KrausChannel, affine_form, phase_damping, tetrahedron_check
from .schmidt import SchmidtFactors, is_product_state, reconstruct, schmidt_decompose, tangle_invariant

__all__ = [
    "Multivector", "Signature", "geometric_product", "outer_product", "reverse",
    "CorrelatedElement", "DensityOperator", "Ket", "Spinor", "apply_unitary", "contract",
    "density_from_ensemble", "expectation", "ket_from_spinor", "spinor_from_ket",
    "CircuitProgram", "Gate", "cnot", "hadamard", "not_gate", "parse_circuit", "run_circuit",
    "KrausChannel", "affine_form", "phase_damping", "tetrahedron_check",
    "SchmidtFactors", "is_product_state", "reconstruct", "schmidt_decompose", "tangle_invariant",
]
