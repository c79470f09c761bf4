"""Zero-energy ground state from the row-by-row product construction."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from gsqc.basis import BasisMap, check_dimension
from gsqc.circuit import Boost, CircuitSpec, Project, Unitary, boundary_state, gate, schedule
from gsqc.hamiltonian import embed, matvec

OVERLAP_TOL = 1e-8
RESIDUAL_TOL = 1e-10
_RESCALE_AT = 2.0**500


class ConstructionError(ValueError):
    pass


@dataclass
class GroundState:
    """Unnormalized amplitudes ``vector`` times 2**``exponent``."""

    vector: np.ndarray
    exponent: int = 0

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vector)) * 2.0**self.exponent

    def normalized(self) -> np.ndarray:
        return self.vector / np.linalg.norm(self.vector)


def _take(T, axis, idx):
    return np.take(T, idx, axis=axis)


def _put(T, axis, idx, vals):
    sl = [slice(None)] * T.ndim
    sl[axis] = idx
    T[tuple(sl)] += vals


def construct_ground_state(spec: CircuitSpec, basis: BasisMap, check: bool = True, H=None) -> GroundState:
    """Build the zero mode by applying one factor per row in dependency order.

    Starting from every electron on row 0 in its boundary state, each row
    adds amplitude on row j from row j-1:

    * unitary U:        psi_j = U psi_{j-1}
    * boost lam:        psi_j = lam psi_{j-1}
    * projection g:     psi_{j,g} = lam psi_{j-1,g}
    * coupling (a->b):  a moves on with b idle, and additionally b moves to
      its row by I or U according to a's dot.

    With ``check`` (and ``H`` given, or assembled on demand) the relative
    residual |H psi| / |psi| is verified to be at most 1e-10.
    """
    check_dimension(basis)
    index = {qid: i for i, qid in enumerate(basis.qubit_ids)}
    T = np.zeros(basis.tensor_shape, dtype=complex)
    init = np.ones(1, dtype=complex)
    for q in reversed(range(basis.n_qubits)):
        v = np.zeros(basis.radices[q], dtype=complex)
        v[[basis.site_index(q, 0, 0), basis.site_index(q, 0, 1)]] = boundary_state(spec.qubits[q].boundary)
        init = np.kron(init, v)
    T[...] = init.reshape(basis.tensor_shape)
    exponent = 0

    for ev in schedule(spec):
        if ev[0] == "row":
            _, qid, j = ev
            q = index[qid]
            op = spec.qubits[q].op(j)
            ax = basis.axis(q)
            prev = [basis.site_index(q, j - 1, d) for d in (0, 1)]
            if isinstance(op, Unitary):
                M = op.gate.matrix
            elif isinstance(op, Boost):
                M = op.lam * np.eye(2)
            elif isinstance(op, Project):
                g = op.gamma
                src = _take(T, ax, [prev[g]])
                rest = _take(T, ax, prev)
                if np.linalg.norm(src) <= OVERLAP_TOL * np.linalg.norm(rest):
                    raise ConstructionError(
                        f"qubit {qid!r} row {j}: incoming state orthogonal to projection target |{g}>"
                    )
                _put(T, ax, [basis.site_index(q, j, g)], op.lam * src)
                continue
            else:
                raise TypeError(f"unexpected row op {op!r}")
            src = np.moveaxis(_take(T, ax, prev), ax, -1) @ M.T
            _put(T, ax, [basis.site_index(q, j, d) for d in (0, 1)], np.moveaxis(src, -1, ax))
        else:
            _, ctl, jc, tgt, jt = ev
            a, b = index[ctl], index[tgt]
            ax_a, ax_b = basis.axis(a), basis.axis(b)
            U = spec.qubit(tgt).op(jt).gate.matrix
            b_prev = [basis.site_index(b, jt - 1, d) for d in (0, 1)]
            b_cur = [basis.site_index(b, jt, d) for d in (0, 1)]
            for s, G in ((0, np.eye(2)), (1, U)):
                src = _take(T, ax_a, [basis.site_index(a, jc - 1, s)])
                moved = np.moveaxis(_take(src, ax_b, b_prev), ax_b, -1) @ G.T
                sl = [slice(None)] * T.ndim
                sl[ax_a] = [basis.site_index(a, jc, s)]
                T[tuple(sl)] += src
                view = T[tuple(sl)]
                _put(view, ax_b, b_cur, np.moveaxis(moved, -1, ax_b))
                T[tuple(sl)] = view
        peak = np.max(np.abs(T))
        if peak > _RESCALE_AT:
            shift = int(np.floor(np.log2(peak)))
            T *= 2.0**-shift
            exponent += shift

    gs = GroundState(T.reshape(-1), exponent)
    if check:
        if H is None:
            from gsqc.hamiltonian import assemble

            H = assemble(spec, basis)
        res = relative_residual(H, gs.vector)
        if not res <= RESIDUAL_TOL:
            raise ConstructionError(f"product state is not a zero mode: |H psi|/|psi| = {res:.3e}")
    return gs


def relative_residual(H, psi) -> float:
    return float(np.linalg.norm(matvec(H, psi)) / np.linalg.norm(psi))


def term_residuals(basis: BasisMap, terms, psi) -> dict:
    """|K psi| / |psi| for each local term; zero for all terms means frustration-free."""
    nrm = np.linalg.norm(psi)
    return {t.label: float(np.linalg.norm(embed(basis, dict(t.factors)) @ psi) / nrm) for t in terms}


def residual_energy(H, psi) -> float:
    """Rayleigh quotient <psi|H|psi> / <psi|psi>."""
    psi = np.asarray(psi)
    nn = np.vdot(psi, psi).real
    if nn == 0:
        raise ValueError("zero vector")
    return float(np.vdot(psi, matvec(H, psi)).real / nn)


def dump_state(psi, basis: BasisMap, path=None) -> str:
    """``ordinal re im`` lines preceded by a ``#`` basis legend."""
    lines = [f"# qubits {' '.join(basis.qubit_ids)}"]
    for qid, ss in zip(basis.qubit_ids, basis.sites):
        lines.append(f"# sites {qid} " + " ".join(f"{r}.{d}" for r, d in ss))
    for i, z in enumerate(np.asarray(psi)):
        lines.append(f"{i} {z.real!r} {z.imag!r}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
