"""JSON circuit files.

Layout::

    {"epsilon": 1.0,
     "qubits": [{"id": "q0",
                 "boundary": {"a": [ax, ay, az], "E": 10.0},
                 "rows": [{"op": "unitary", "gate": "I"},
                          {"op": "boost", "lambda": 10.0}]}]}

Row ops: ``unitary`` (gate), ``boost`` (lambda), ``project`` (gamma,
lambda), ``coupled_control`` (partner, partner_row) and ``coupled_target``
(gate, partner, partner_row). A gate is a library name (``"X"``), a
``{"name": "Rk_dag", "k": 3}`` object, or ``{"matrix": [[[re, im], ...], ...]}``.
Qubits may also carry ``wire`` and ``ancilla`` (teleportation bookkeeping).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from gsqc.circuit.model import (
    Boost,
    BoundaryCondition,
    CircuitSpec,
    CoupledControl,
    CoupledTarget,
    GateMatrix,
    Project,
    QubitSpec,
    Unitary,
    gate,
)


class SchemaError(ValueError):
    """Malformed circuit file; ``where`` is a JSON path or a line:column position."""

    def __init__(self, message, where=None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def _gate_to_json(g: GateMatrix):
    if g.name is not None:
        return g.name if g.k is None else {"name": g.name, "k": g.k}
    return {"matrix": [[[z.real, z.imag] for z in row] for row in g.matrix.tolist()]}


def _gate_from_json(obj, where):
    try:
        if isinstance(obj, str):
            return gate(obj)
        if isinstance(obj, dict) and "name" in obj:
            return gate(obj["name"], obj.get("k"))
        if isinstance(obj, dict) and "matrix" in obj:
            m = np.array([[complex(re, im) for re, im in row] for row in obj["matrix"]])
            return GateMatrix(m)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad gate: {exc}", where) from None
    raise SchemaError(f"bad gate {obj!r}", where)


def _row_to_json(op):
    if isinstance(op, Unitary):
        return {"op": "unitary", "gate": _gate_to_json(op.gate)}
    if isinstance(op, Boost):
        return {"op": "boost", "lambda": op.lam}
    if isinstance(op, Project):
        return {"op": "project", "gamma": op.gamma, "lambda": op.lam}
    if isinstance(op, CoupledControl):
        return {"op": "coupled_control", "partner": op.partner, "partner_row": op.partner_row}
    if isinstance(op, CoupledTarget):
        return {
            "op": "coupled_target",
            "gate": _gate_to_json(op.gate),
            "partner": op.partner,
            "partner_row": op.partner_row,
        }
    raise TypeError(f"unknown row op {op!r}")


def _field(d, key, where, kind):
    if key not in d:
        raise SchemaError(f"missing field {key!r}", where)
    v = d[key]
    if kind is float:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SchemaError(f"field {key!r} must be a number, got {v!r}", where)
        return float(v)
    if kind is int:
        if isinstance(v, bool) or not isinstance(v, int):
            raise SchemaError(f"field {key!r} must be an integer, got {v!r}", where)
        return v
    if not isinstance(v, kind):
        raise SchemaError(f"field {key!r} has wrong type {type(v).__name__}", where)
    return v


def _row_from_json(d, where):
    if not isinstance(d, dict):
        raise SchemaError("row must be an object", where)
    op = d.get("op")
    if op == "unitary":
        return Unitary(_gate_from_json(d.get("gate"), f"{where}.gate"))
    if op == "boost":
        return Boost(_field(d, "lambda", where, float))
    if op == "project":
        return Project(_field(d, "gamma", where, int), _field(d, "lambda", where, float))
    if op == "coupled_control":
        return CoupledControl(_field(d, "partner", where, str), _field(d, "partner_row", where, int))
    if op == "coupled_target":
        return CoupledTarget(
            _gate_from_json(d.get("gate"), f"{where}.gate"),
            _field(d, "partner", where, str),
            _field(d, "partner_row", where, int),
        )
    raise SchemaError(f"unknown op {op!r}", where)


def to_dict(spec: CircuitSpec) -> dict:
    qubits = []
    for q in spec.qubits:
        d = {
            "id": q.id,
            "boundary": {"a": list(q.boundary.a), "E": q.boundary.E},
            "rows": [_row_to_json(op) for op in q.rows],
        }
        if q.wire is not None:
            d["wire"] = q.wire
        if q.ancilla:
            d["ancilla"] = True
        qubits.append(d)
    return {"epsilon": spec.epsilon, "qubits": qubits}


def from_dict(d) -> CircuitSpec:
    if not isinstance(d, dict):
        raise SchemaError("top level must be an object", "$")
    eps = _field(d, "epsilon", "$", float) if "epsilon" in d else 1.0
    qlist = _field(d, "qubits", "$", list)
    qubits = []
    for i, qd in enumerate(qlist):
        where = f"$.qubits[{i}]"
        if not isinstance(qd, dict):
            raise SchemaError("qubit must be an object", where)
        qid = _field(qd, "id", where, str)
        bd = _field(qd, "boundary", where, dict)
        a = _field(bd, "a", f"{where}.boundary", list)
        if len(a) != 3 or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in a):
            raise SchemaError("boundary a must be three numbers", f"{where}.boundary.a")
        E = _field(bd, "E", f"{where}.boundary", float) if "E" in bd else 10.0
        rows = [
            _row_from_json(r, f"{where}.rows[{j}]")
            for j, r in enumerate(_field(qd, "rows", where, list))
        ]
        wire = qd.get("wire")
        if wire is not None and not isinstance(wire, str):
            raise SchemaError("wire must be a string", f"{where}.wire")
        qubits.append(QubitSpec(qid, BoundaryCondition(tuple(a), E), rows, wire=wire, ancilla=bool(qd.get("ancilla", False))))
    return CircuitSpec(qubits, eps)


def parse_circuit(text: str) -> CircuitSpec:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return from_dict(d)


def load_circuit(path) -> CircuitSpec:
    return parse_circuit(Path(path).read_text())


def dump_circuit(spec: CircuitSpec, path=None) -> str:
    text = json.dumps(to_dict(spec), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
