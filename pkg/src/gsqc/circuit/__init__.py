"""Circuit descriptions: types, validation, generators and the JSON schema."""

from gsqc.circuit.model import (
    Boost,
    BoundaryCondition,
    CircuitSpec,
    CoupledControl,
    CoupledTarget,
    GateMatrix,
    Project,
    QubitSpec,
    RowOp,
    Unitary,
    boundary_state,
    gate,
    with_lambda,
)
from gsqc.circuit.validate import CircuitError, ValidationReport, require_valid, schedule, validate_circuit
from gsqc.circuit.generators import (
    GADGETS,
    TeleportGadget,
    chain_circuit,
    insert_teleportation,
    logical_couplings,
    qft_circuit,
    single_qubit_circuit,
    two_qubit_circuit,
)
from gsqc.circuit.schema import SchemaError, dump_circuit, from_dict, load_circuit, parse_circuit, to_dict

__all__ = [
    "Boost",
    "BoundaryCondition",
    "CircuitError",
    "CircuitSpec",
    "CoupledControl",
    "CoupledTarget",
    "GADGETS",
    "GateMatrix",
    "Project",
    "QubitSpec",
    "RowOp",
    "SchemaError",
    "TeleportGadget",
    "Unitary",
    "ValidationReport",
    "boundary_state",
    "chain_circuit",
    "dump_circuit",
    "from_dict",
    "gate",
    "insert_teleportation",
    "load_circuit",
    "logical_couplings",
    "parse_circuit",
    "qft_circuit",
    "require_valid",
    "schedule",
    "single_qubit_circuit",
    "to_dict",
    "two_qubit_circuit",
    "validate_circuit",
    "with_lambda",
]
