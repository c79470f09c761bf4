"""Ground-state quantum computer circuits: Hamiltonians, spectral gaps, scaling."""

from gsqc.circuit import (
    Boost,
    BoundaryCondition,
    CircuitSpec,
    CoupledControl,
    CoupledTarget,
    GateMatrix,
    Project,
    QubitSpec,
    Unitary,
    boundary_state,
    gate,
    validate_circuit,
)
from gsqc.basis import BasisMap, build_basis
from gsqc.hamiltonian import assemble, hermiticity_residual, matvec
from gsqc.groundstate import construct_ground_state, residual_energy
from gsqc.eigen import EigenOptions, GapResult, dense_lowest, krylov_lowest, spectral_gap

__version__ = "0.1.0"

__all__ = [
    "BasisMap",
    "Boost",
    "BoundaryCondition",
    "CircuitSpec",
    "CoupledControl",
    "CoupledTarget",
    "EigenOptions",
    "GapResult",
    "GateMatrix",
    "Project",
    "QubitSpec",
    "Unitary",
    "assemble",
    "boundary_state",
    "build_basis",
    "construct_ground_state",
    "dense_lowest",
    "gate",
    "hermiticity_residual",
    "krylov_lowest",
    "matvec",
    "residual_energy",
    "spectral_gap",
    "validate_circuit",
]
