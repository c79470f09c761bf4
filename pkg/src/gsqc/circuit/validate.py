"""Structural validation and the row schedule shared by the state constructor."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from gsqc.circuit.model import (
    Boost,
    BoundaryCondition,
    CircuitSpec,
    CoupledControl,
    CoupledTarget,
    GateMatrix,
    Project,
    Unitary,
    boundary_state,
)

UNITARY_TOL = 1e-12
NORM_TOL = 1e-12
OVERLAP_TOL = 1e-8


class CircuitError(ValueError):
    pass


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        lines = [f"violation: {v}" for v in self.violations]
        lines += [f"warning: {w}" for w in self.warnings]
        if not lines:
            return "valid"
        return "\n".join(lines)


def _check_gate(g, where, out):
    if not isinstance(g, GateMatrix):
        out.append(f"{where}: gate is not a GateMatrix")
        return
    err = g.unitarity_error()
    if not err <= UNITARY_TOL:
        out.append(f"{where}: gate not unitary (|G^dag G - I| = {err:.3g})")


def _check_coupling(spec, ids, q, j, op, out):
    where = f"qubit {q.id!r} row {j}"
    if op.partner not in ids:
        out.append(f"{where}: dangling coupling to nonexistent qubit {op.partner!r}")
        return
    if op.partner == q.id:
        out.append(f"{where}: coupling to itself")
        return
    p = spec.qubit(op.partner)
    if not 1 <= op.partner_row < p.n_rows:
        out.append(f"{where}: dangling coupling to qubit {op.partner!r} row {op.partner_row} (out of range)")
        return
    other = p.op(op.partner_row)
    want = CoupledControl if isinstance(op, CoupledTarget) else CoupledTarget
    if not isinstance(other, want) or other.partner != q.id or other.partner_row != j:
        out.append(
            f"{where}: inconsistent coupling, qubit {op.partner!r} row {op.partner_row} "
            f"does not name qubit {q.id!r} row {j} back"
        )


def schedule(spec: CircuitSpec) -> list:
    """Topological order of row events.

    Events are ``("row", qubit, row)`` for single-qubit rows and
    ``("coupling", ctl, ctl_row, tgt, tgt_row)`` for couplings; an event runs
    only after both participating qubits have been built up to the preceding row.
    Raises CircuitError on a cyclic coupling graph.
    """
    built = {q.id: 0 for q in spec.qubits}
    order = []
    remaining = sum(len(q.rows) for q in spec.qubits)
    while remaining:
        progressed = False
        for q in spec.qubits:
            while built[q.id] < len(q.rows):
                j = built[q.id] + 1
                op = q.op(j)
                if isinstance(op, (Unitary, Boost, Project)):
                    order.append(("row", q.id, j))
                    built[q.id] = j
                    remaining -= 1
                    progressed = True
                    continue
                if isinstance(op, CoupledControl):
                    ctl, ctl_row, tgt, tgt_row = q.id, j, op.partner, op.partner_row
                else:
                    ctl, ctl_row, tgt, tgt_row = op.partner, op.partner_row, q.id, j
                if built[ctl] == ctl_row - 1 and built[tgt] == tgt_row - 1:
                    order.append(("coupling", ctl, ctl_row, tgt, tgt_row))
                    built[ctl] = ctl_row
                    built[tgt] = tgt_row
                    remaining -= 2
                    progressed = True
                    continue
                break
        if not progressed:
            stuck = [f"{q.id}@{built[q.id] + 1}" for q in spec.qubits if built[q.id] < len(q.rows)]
            raise CircuitError(f"cyclic coupling order; blocked at {', '.join(stuck)}")
    return order


def _static_overlap_warnings(spec, out):
    """Warn when a Project row's incoming single-qubit state is (nearly) orthogonal to gamma.

    Only qubits with no coupling upstream of the projection have a
    well-defined incoming pure state; the rest are checked by the
    ground-state constructor.
    """
    for q in spec.qubits:
        v = boundary_state(q.boundary)
        for j, op in enumerate(q.rows, start=1):
            if isinstance(op, (CoupledControl, CoupledTarget)):
                break
            if isinstance(op, Project):
                if abs(v[op.gamma]) < OVERLAP_TOL:
                    out.append(
                        f"qubit {q.id!r} row {j}: incoming state is orthogonal to projection "
                        f"target |{op.gamma}>, ground state has vanishing downstream weight"
                    )
                w = np.zeros(2, dtype=complex)
                w[op.gamma] = v[op.gamma]
                v = w
            elif isinstance(op, Unitary):
                v = op.gate.matrix @ v


def validate_circuit(spec: CircuitSpec) -> ValidationReport:
    rep = ValidationReport()
    out = rep.violations
    if not spec.epsilon > 0:
        out.append(f"epsilon must be positive, got {spec.epsilon}")
    ids = [q.id for q in spec.qubits]
    if not ids:
        out.append("circuit has no qubits")
    dup = sorted({i for i in ids if ids.count(i) > 1})
    if dup:
        out.append(f"duplicate qubit ids: {dup}")
    for q in spec.qubits:
        b = q.boundary
        if not isinstance(b, BoundaryCondition):
            out.append(f"qubit {q.id!r}: boundary is not a BoundaryCondition")
        else:
            if not b.norm_error() <= NORM_TOL:
                out.append(f"qubit {q.id!r}: boundary ‖a‖≠1 (‖a‖² = {sum(x * x for x in b.a):.6g})")
            if not b.E > 0:
                out.append(f"qubit {q.id!r}: boundary E must be positive, got {b.E}")
        if not q.rows:
            out.append(f"qubit {q.id!r}: no rows")
        for j, op in enumerate(q.rows, start=1):
            where = f"qubit {q.id!r} row {j}"
            if isinstance(op, Unitary):
                _check_gate(op.gate, where, out)
            elif isinstance(op, (Boost, Project)):
                if not op.lam >= 1:
                    out.append(f"{where}: amplification lambda must be >= 1, got {op.lam}")
                if isinstance(op, Project):
                    if op.gamma not in (0, 1):
                        out.append(f"{where}: projection dot must be 0 or 1, got {op.gamma}")
                    elif j != len(q.rows):
                        rep.warnings.append(f"{where}: projection row is not the final row")
            elif isinstance(op, (CoupledControl, CoupledTarget)):
                if isinstance(op, CoupledTarget):
                    _check_gate(op.gate, where, out)
                _check_coupling(spec, ids, q, j, op, out)
            else:
                out.append(f"{where}: unknown row operation {type(op).__name__}")
    if rep.ok:
        try:
            schedule(spec)
        except CircuitError as exc:
            out.append(str(exc))
    if rep.ok:
        _static_overlap_warnings(spec, rep.warnings)
    return rep


def require_valid(spec: CircuitSpec) -> None:
    rep = validate_circuit(spec)
    if not rep.ok:
        raise CircuitError("invalid circuit:\n" + str(rep))
