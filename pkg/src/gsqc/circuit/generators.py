"""Circuit generators: benchmark columns, control chains, teleportation insertion, inverse QFT."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from gsqc.circuit.model import (
    Boost,
    BoundaryCondition,
    CircuitSpec,
    CoupledControl,
    CoupledTarget,
    Project,
    QubitSpec,
    Unitary,
    gate,
)
from gsqc.circuit.validate import CircuitError

# Bloch-vector coefficients a of h0 = E (I + a.sigma) selecting each input state
STATE_BOUNDARY = {
    "0": (0.0, 0.0, -1.0),
    "1": (0.0, 0.0, 1.0),
    "+": (-1.0, 0.0, 0.0),
    "-": (1.0, 0.0, 0.0),
}

CONTROL_BOUNDARY = BoundaryCondition(a=STATE_BOUNDARY["+"], E=10.0)
TARGET_BOUNDARY = BoundaryCondition(a=STATE_BOUNDARY["1"], E=10.0)


# Wires are assembled from token lists: plain RowOps, or ("ctl", key) /
# ("tgt", key, gate) placeholders resolved to partner references at the end.
@dataclass
class _Wire:
    id: str
    boundary: BoundaryCondition
    ops: list
    wire: str | None = None
    ancilla: bool = False


def _identity():
    return Unitary(gate("I"))


def _terminal(kind, lam):
    if kind == "boost":
        return Boost(lam)
    if kind == "project":
        return Project(0, lam)
    if kind in (None, "none"):
        return _identity()
    if isinstance(kind, (Boost, Project, Unitary)):
        return kind
    raise ValueError(f"unknown terminal kind {kind!r}")


def _resolve(wires, epsilon=1.0) -> CircuitSpec:
    ctl_at, tgt_at = {}, {}
    for w in wires:
        for j, op in enumerate(w.ops, start=1):
            if isinstance(op, tuple):
                (ctl_at if op[0] == "ctl" else tgt_at)[op[1]] = (w.id, j)
    qubits = []
    for w in wires:
        rows = []
        for op in w.ops:
            if isinstance(op, tuple) and op[0] == "ctl":
                rows.append(CoupledControl(*tgt_at[op[1]]))
            elif isinstance(op, tuple):
                rows.append(CoupledTarget(op[2], *ctl_at[op[1]]))
            else:
                rows.append(op)
        qubits.append(QubitSpec(w.id, w.boundary, rows, wire=w.wire, ancilla=w.ancilla))
    return CircuitSpec(qubits, epsilon)


def _tokenize(spec: CircuitSpec) -> list:
    wires = []
    for q in spec.qubits:
        ops = []
        for j, op in enumerate(q.rows, start=1):
            if isinstance(op, CoupledControl):
                ops.append(("ctl", (q.id, j)))
            elif isinstance(op, CoupledTarget):
                ops.append(("tgt", (op.partner, op.partner_row), op.gate))
            else:
                ops.append(op)
        wires.append(_Wire(q.id, q.boundary, ops, q.wire, q.ancilla))
    return wires


def single_qubit_circuit(n_rows: int, terminal=None, boundary: BoundaryCondition | None = None) -> CircuitSpec:
    """A column of ``n_rows`` rows (boundary row included) joined by identity hops.

    ``terminal`` replaces the final hop, e.g. ``Boost(10.0)`` or ``Project(0, 10.0)``.
    """
    if n_rows < 2:
        raise ValueError(f"single qubit needs n_rows >= 2, got {n_rows}")
    if boundary is None:
        boundary = BoundaryCondition(a=STATE_BOUNDARY["0"], E=10.0)
    rows = [_identity() for _ in range(n_rows - 2)] + [_terminal(terminal, None)]
    return CircuitSpec([QubitSpec("q0", boundary, rows)])


def two_qubit_circuit(
    rows: int = 4,
    lam: float = 1.0,
    terminal_kinds=("boost", "boost"),
    control_boundary: BoundaryCondition = CONTROL_BOUNDARY,
    target_boundary: BoundaryCondition = TARGET_BOUNDARY,
    coupling_gate=None,
) -> CircuitSpec:
    """Control and target columns joined by one controlled-NOT at row ``rows // 2``."""
    if rows < 3:
        raise ValueError(f"two-qubit circuit needs rows >= 3, got {rows}")
    g = coupling_gate if coupling_gate is not None else gate("X")
    c = rows // 2
    key = "cnot"

    def column(token, kind):
        ops = [_identity() for _ in range(1, c)] + [token]
        ops += [_identity() for _ in range(c + 1, rows - 1)]
        ops.append(_terminal(kind, lam))
        return ops

    ctl = _Wire("control", control_boundary, column(("ctl", key), terminal_kinds[0]))
    tgt = _Wire("target", target_boundary, column(("tgt", key, g), terminal_kinds[1]))
    return _resolve([ctl, tgt])


def chain_circuit(N: int, rows_between: int = 0, lam: float = 1.0) -> CircuitSpec:
    """Qubit i controls qubit i+1 from the part of i downstream of its own target row.

    Every qubit ends in Boost(lam). The head of the chain starts in
    (|0>+|1>)/sqrt2, the rest in |1>, so N=2 coincides with
    :func:`two_qubit_circuit` at rows=4.
    """
    if N < 2:
        raise ValueError(f"chain needs N >= 2, got {N}")
    wires = []
    for i in range(N):
        ops = [_identity()]
        if i > 0:
            ops.append(("tgt", i - 1, gate("X")))
        ops += [_identity() for _ in range(rows_between)]
        if i < N - 1:
            ops.append(("ctl", i))
        ops.append(Boost(lam))
        b = CONTROL_BOUNDARY if i == 0 else TARGET_BOUNDARY
        wires.append(_Wire(f"q{i + 1}", b, ops))
    return _resolve(wires)


@dataclass(frozen=True)
class TeleportGadget:
    """Post-selected teleportation splice: input a, ancilla m, output b.

    m is rotated by ``ancilla_prep`` and entangled with b by a CNOT (m
    controls b); a then controls m, is rotated by ``input_rotation``, and
    both a and m end in Project(0, lam). b carries the wire onward; with
    both projections on |0> no Pauli correction is needed. ``pad_*`` adds
    identity rows at the head of the respective segment.
    """

    name: str = "postselected"
    ancilla_prep: str = "H"
    input_rotation: str = "H"
    pad_input: int = 0
    pad_ancilla: int = 0
    pad_output: int = 0


GADGETS = {
    "postselected": TeleportGadget(),
    "postselected-padded": TeleportGadget("postselected-padded", pad_input=1, pad_ancilla=1, pad_output=1),
}

POLICIES = ("between-couplings", "after-every-coupling")


def _max_lambda(spec):
    lams = [op.lam for q in spec.qubits for op in q.rows if isinstance(op, (Boost, Project))]
    return max(lams) if lams else 1.0


def _cut_points(ops, policy, qid):
    coupled = [i for i, op in enumerate(ops) if isinstance(op, tuple)]
    if policy == "between-couplings":
        return coupled[:-1]
    if policy == "after-every-coupling":
        for i in coupled:
            if i == len(ops) - 1:
                raise CircuitError(
                    f"qubit {qid!r}: coupling on its final row leaves no segment to teleport"
                )
        return coupled
    raise ValueError(f"unknown teleportation policy {policy!r}; expected one of {POLICIES}")


def insert_teleportation(
    spec: CircuitSpec,
    policy: str = "between-couplings",
    gadget: TeleportGadget | str = "postselected",
    lam: float | None = None,
) -> CircuitSpec:
    """Splice every selected wire segment through a teleportation gadget.

    ``between-couplings`` cuts each wire between consecutive coupled rows;
    ``after-every-coupling`` cuts after every coupled row. Each cut adds an
    ancilla and an output qubit. Gadget projections use ``lam``, defaulting
    to the largest amplification already in the circuit.
    """
    if isinstance(gadget, str):
        gadget = GADGETS[gadget]
    if lam is None:
        lam = _max_lambda(spec)
    counter = itertools.count()
    out = []
    for w in _tokenize(spec):
        cuts = _cut_points(w.ops, policy, w.id)
        if not cuts:
            out.append(w)
            continue
        wire_name = w.wire if w.wire is not None else w.id
        bounds = [-1] + cuts + [len(w.ops) - 1]
        segments = [w.ops[lo + 1 : hi + 1] for lo, hi in zip(bounds[:-1], bounds[1:])]
        head_id, head_boundary, head_ops = w.id, w.boundary, []
        for n, seg in enumerate(segments):
            ops = head_ops + list(seg)
            if n == len(segments) - 1:
                out.append(_Wire(head_id, head_boundary, ops, wire=w.wire, ancilla=w.ancilla))
                break
            k_am, k_mb = ("tp", next(counter)), ("tp", next(counter))
            ops += [_identity() for _ in range(gadget.pad_input)]
            ops += [("ctl", k_am), Unitary(gate(gadget.input_rotation)), Project(0, lam)]
            out.append(_Wire(head_id, head_boundary, ops, wire=w.wire, ancilla=w.ancilla))
            zero = BoundaryCondition(a=STATE_BOUNDARY["0"], E=w.boundary.E)
            m_ops = [_identity() for _ in range(gadget.pad_ancilla)]
            m_ops += [Unitary(gate(gadget.ancilla_prep)), ("ctl", k_mb), ("tgt", k_am, gate("X")), Project(0, lam)]
            out.append(_Wire(f"{wire_name}~m{n + 1}", zero, m_ops, ancilla=True))
            head_id, head_boundary = f"{wire_name}~t{n + 1}", zero
            head_ops = [_identity() for _ in range(gadget.pad_output)] + [("tgt", k_mb, gate("X"))]
            w = _Wire(head_id, zero, [], wire=wire_name)
    return _resolve(out, spec.epsilon)


def logical_couplings(spec: CircuitSpec) -> dict:
    """Per logical wire, the ordered couplings with gadget-internal ones stripped.

    Entries are ``(role, partner wire, gate label)``; used to check that
    teleportation insertion preserves the logical gate sequence.
    """
    by_id = {q.id: q for q in spec.qubits}
    seq = {}
    for q in spec.qubits:
        wire = q.logical_wire
        if wire is None:
            continue
        lst = seq.setdefault(wire, [])
        for op in q.rows:
            if isinstance(op, (CoupledControl, CoupledTarget)):
                partner = by_id[op.partner].logical_wire
                if partner is None:
                    continue
                if isinstance(op, CoupledTarget):
                    g = op.gate
                    label = g.name if g.k is None else f"{g.name}{g.k}"
                    lst.append(("target", partner, label))
                else:
                    lst.append(("control", partner, None))
    return seq


def qft_circuit(
    N: int,
    lam: float = 1.0,
    inputs: str | None = None,
    teleport: bool = True,
    gadget: TeleportGadget | str = "postselected",
) -> CircuitSpec:
    """Inverse quantum Fourier transform laid out as GSQC columns.

    Standard order: for wire j from last to first, controlled-R_k^dag from
    every later wire m (k = m - j + 1), then a Hadamard row. ``inputs`` is a
    string over {0, 1, +, -}, one symbol per wire. With ``teleport`` a
    gadget is spliced between successive couplings on each wire.
    """
    if N < 2:
        raise ValueError(f"QFT needs N >= 2, got {N}")
    inputs = inputs or "0" * N
    if len(inputs) != N or any(c not in STATE_BOUNDARY for c in inputs):
        raise ValueError(f"inputs must be {N} symbols from 0, 1, +, -; got {inputs!r}")
    ops = {j: [] for j in range(N)}
    for j in reversed(range(N)):
        for m in reversed(range(j + 1, N)):
            key = (m, j)
            ops[m].append(("ctl", key))
            ops[j].append(("tgt", key, gate("Rk_dag", m - j + 1)))
        ops[j].append(Unitary(gate("H")))
    wires = [
        _Wire(f"q{j}", BoundaryCondition(a=STATE_BOUNDARY[inputs[j]], E=10.0), ops[j] + [Boost(lam)])
        for j in range(N)
    ]
    spec = _resolve(wires)
    if teleport:
        spec = insert_teleportation(spec, "between-couplings", gadget, lam)
    return spec
