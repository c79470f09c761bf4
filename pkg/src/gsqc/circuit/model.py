"""Circuit description types: gates, boundary conditions, row operations."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

GATE_NAMES = ("I", "X", "H", "Rk", "Rk_dag")


@dataclass(frozen=True, eq=False)
class GateMatrix:
    """A 2x2 unitary, optionally carrying the library name it was built from."""

    matrix: np.ndarray
    name: Optional[str] = None
    k: Optional[int] = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"gate matrix must be 2x2, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def unitarity_error(self) -> float:
        return float(np.max(np.abs(self.matrix.conj().T @ self.matrix - np.eye(2))))

    def is_identity(self) -> bool:
        return bool(np.allclose(self.matrix, np.eye(2), atol=1e-15, rtol=0))

    def __eq__(self, other):
        if not isinstance(other, GateMatrix):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __repr__(self):
        if self.name is not None:
            return f"GateMatrix({self.name}{'' if self.k is None else f', k={self.k}'})"
        return f"GateMatrix({self.matrix.tolist()})"


def gate(name: str, k: Optional[int] = None) -> GateMatrix:
    """Library gate by name: I, X (NOT), H, Rk, Rk_dag.

    ``Rk_dag`` is diag(1, exp(-2 pi i / 2**k)), the phase shift used by the
    inverse quantum Fourier transform; ``Rk`` is its conjugate.
    """
    if name in ("Rk", "Rk_dag"):
        if k is None:
            raise ValueError(f"gate {name} requires k")
        if int(k) < 1:
            raise ValueError(f"gate {name} requires k >= 1, got {k}")
        k = int(k)
        sign = 1.0 if name == "Rk" else -1.0
        # exact -1 at k=1 instead of exp(-i pi) roundoff
        phase = -1.0 + 0j if k == 1 else np.exp(sign * 2j * np.pi / 2**k)
        return GateMatrix(np.diag([1.0, phase]), name, k)
    if k is not None:
        raise ValueError(f"gate {name} takes no k")
    if name == "I":
        return GateMatrix(np.eye(2), "I")
    if name == "X":
        return GateMatrix(PAULI[0], "X")
    if name == "H":
        return GateMatrix(np.array([[1, 1], [1, -1]]) / np.sqrt(2.0), "H")
    raise ValueError(f"unknown gate {name!r}; expected one of {GATE_NAMES}")


@dataclass(frozen=True)
class BoundaryCondition:
    """On-site term E (I + a.sigma) on the first row of a qubit.

    The first-row state of the ground state is the zero eigenvector of
    I + a.sigma, i.e. the Bloch vector -a.
    """

    a: tuple = (0.0, 0.0, 1.0)
    E: float = 10.0

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))
        object.__setattr__(self, "E", float(self.E))

    def norm_error(self) -> float:
        return abs(float(np.sum(np.square(self.a))) - 1.0)

    def operator(self) -> np.ndarray:
        """The 2x2 matrix E (I + a.sigma)."""
        return self.E * (np.eye(2, dtype=complex) + sum(ai * s for ai, s in zip(self.a, PAULI)))


def boundary_state(b: BoundaryCondition) -> np.ndarray:
    """Normalized zero eigenvector of I + a.sigma, first nonzero component real positive."""
    ax, ay, az = b.a
    # (I + a.sigma) v = 0 has the closed form below; pick the better-conditioned column
    if az <= 0:
        v = np.array([1.0 - az, -(ax + 1j * ay)], dtype=complex)
    else:
        v = np.array([-(ax - 1j * ay), 1.0 + az], dtype=complex)
    v /= np.linalg.norm(v)
    nz = np.flatnonzero(np.abs(v) > 1e-15)[0]
    v *= np.conj(v[nz]) / abs(v[nz])
    v[nz] = abs(v[nz])
    return v


@dataclass(frozen=True)
class Unitary:
    gate: GateMatrix


@dataclass(frozen=True)
class Boost:
    lam: float


@dataclass(frozen=True)
class Project:
    gamma: int
    lam: float


@dataclass(frozen=True)
class CoupledControl:
    """Control side of a controlled-U coupling; the gate lives on the target row."""

    partner: str
    partner_row: int


@dataclass(frozen=True)
class CoupledTarget:
    gate: GateMatrix
    partner: str
    partner_row: int


RowOp = Union[Unitary, Boost, Project, CoupledControl, CoupledTarget]


@dataclass
class QubitSpec:
    """One column of rows. ``rows[j - 1]`` connects row j-1 to row j; row 0 is the boundary row.

    ``wire`` names the logical wire a teleported segment continues (defaults
    to the qubit's own id); gadget ancillas set ``ancilla=True``.
    """

    id: str
    boundary: BoundaryCondition
    rows: list = field(default_factory=list)
    wire: Optional[str] = None
    ancilla: bool = False

    @property
    def logical_wire(self) -> Optional[str]:
        if self.ancilla:
            return None
        return self.wire if self.wire is not None else self.id

    @property
    def n_rows(self) -> int:
        return len(self.rows) + 1

    def op(self, row: int) -> RowOp:
        return self.rows[row - 1]


@dataclass
class CircuitSpec:
    qubits: list
    epsilon: float = 1.0

    def qubit_ids(self) -> list:
        return [q.id for q in self.qubits]

    def index(self, qid: str) -> int:
        for i, q in enumerate(self.qubits):
            if q.id == qid:
                return i
        raise KeyError(f"unknown qubit {qid!r}")

    def qubit(self, qid: str) -> QubitSpec:
        return self.qubits[self.index(qid)]

    def couplings(self) -> list:
        """(control qubit, control row, target qubit, target row, gate) for every coupling."""
        out = []
        for q in self.qubits:
            for j, op in enumerate(q.rows, start=1):
                if isinstance(op, CoupledTarget):
                    out.append((op.partner, op.partner_row, q.id, j, op.gate))
        return out

    def digest(self) -> str:
        from gsqc.circuit.schema import to_dict

        text = json.dumps(to_dict(self), sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def with_lambda(spec: CircuitSpec, lam: float) -> CircuitSpec:
    """Copy of ``spec`` with every Boost and Project amplification set to ``lam``."""
    qubits = []
    for q in spec.qubits:
        rows = []
        for op in q.rows:
            if isinstance(op, Boost):
                op = Boost(float(lam))
            elif isinstance(op, Project):
                op = Project(op.gamma, float(lam))
            rows.append(op)
        qubits.append(QubitSpec(q.id, q.boundary, rows, q.wire, q.ancilla))
    return CircuitSpec(qubits, spec.epsilon)
