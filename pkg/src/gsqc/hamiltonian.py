"""Sparse circuit Hamiltonian assembled from local positive terms, in units of epsilon.

Every emitted term has the form K^dag K, with K a Kronecker product of small
per-qubit matrices acting on the one-electron site space of each qubit:

* identity hop, row j:     K = C_{j-1} - U^dag C_j
* boost, row j:            K = C_{j-1} - C_j / lam
* projection, row j:       K = c_{j-1,g} - c_{j,g} / lam
* boundary, row 0:         K = sqrt(2E) <w| with w orthogonal to the boundary state
* coupling pieces:         n_{a,j-1} n_{b,j},  K_a(I) n_{b,j-1},  n_{a,j,0} K_b(I),  n_{a,j,1} K_b(U)
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from gsqc.basis import BasisMap, check_dimension
from gsqc.circuit import (
    Boost,
    CircuitSpec,
    CoupledControl,
    CoupledTarget,
    Project,
    Unitary,
    boundary_state,
    gate,
)

_I2 = gate("I").matrix


@dataclass(frozen=True)
class Term:
    """One positive local term K^dag K; ``factors`` maps qubit index to its K block."""

    label: str
    factors: tuple

    def local(self) -> dict:
        return {q: k.conj().T @ k for q, k in self.factors}


class BasisMismatch(ValueError):
    pass


def _rows(basis, q, row, dots=(0, 1)):
    out = []
    for d in dots:
        i = basis.site_index(q, row, d)
        if i is None:
            raise BasisMismatch(f"site (row {row}, dot {d}) of qubit {basis.qubit_ids[q]!r} missing from basis")
        out.append(i)
    return out


def _hop_k(basis, q, j, U, scale=1.0):
    """K = C_{j-1} - scale * U^dag C_j as a 2 x r matrix."""
    r = basis.radices[q]
    k = np.zeros((2, r), dtype=complex)
    prev, cur = _rows(basis, q, j - 1), _rows(basis, q, j)
    Ud = np.asarray(U).conj().T
    for s in range(2):
        k[s, prev[s]] = 1.0
        for t in range(2):
            k[s, cur[t]] -= scale * Ud[s, t]
    return k


def _number_k(basis, q, row, dots=(0, 1)):
    r = basis.radices[q]
    idx = _rows(basis, q, row, dots)
    k = np.zeros((len(idx), r), dtype=complex)
    k[np.arange(len(idx)), idx] = 1.0
    return k


def emit_terms(spec: CircuitSpec, basis: BasisMap) -> list:
    """All local terms of the circuit Hamiltonian (boundaries, rows, couplings)."""
    if tuple(spec.qubit_ids()) != basis.qubit_ids:
        raise BasisMismatch("basis was built for a different circuit")
    index = {qid: i for i, qid in enumerate(basis.qubit_ids)}
    terms = []
    for q, qs in enumerate(spec.qubits):
        if basis.radices[q] != len(basis.sites[q]) or max(r for r, _ in basis.sites[q]) != qs.n_rows - 1:
            raise BasisMismatch(f"basis rows for qubit {qs.id!r} do not match the circuit")
        v = boundary_state(qs.boundary)
        w = np.array([-np.conj(v[1]), np.conj(v[0])])  # orthogonal complement
        k = np.zeros((1, basis.radices[q]), dtype=complex)
        k[0, _rows(basis, q, 0)] = np.sqrt(2.0 * qs.boundary.E) * w.conj()
        terms.append(Term(f"{qs.id}:boundary", ((q, k),)))
        for j, op in enumerate(qs.rows, start=1):
            tag = f"{qs.id}:row{j}"
            if isinstance(op, Unitary):
                terms.append(Term(f"{tag}:unitary", ((q, _hop_k(basis, q, j, op.gate.matrix)),)))
            elif isinstance(op, Boost):
                terms.append(Term(f"{tag}:boost", ((q, _hop_k(basis, q, j, _I2, 1.0 / op.lam)),)))
            elif isinstance(op, Project):
                g = op.gamma
                k = np.zeros((1, basis.radices[q]), dtype=complex)
                k[0, _rows(basis, q, j - 1, (g,))[0]] = 1.0
                k[0, _rows(basis, q, j, (g,))[0]] -= 1.0 / op.lam
                terms.append(Term(f"{tag}:project", ((q, k),)))
            elif isinstance(op, CoupledTarget):
                a, ja, b, jb = index[op.partner], op.partner_row, q, j
                tag = f"{op.partner}:row{ja}->{qs.id}:row{jb}"
                terms += [
                    Term(f"{tag}:block", ((a, _number_k(basis, a, ja - 1)), (b, _number_k(basis, b, jb)))),
                    Term(f"{tag}:control-hop", ((a, _hop_k(basis, a, ja, _I2)), (b, _number_k(basis, b, jb - 1)))),
                    Term(f"{tag}:target-idle", ((a, _number_k(basis, a, ja, (0,))), (b, _hop_k(basis, b, jb, _I2)))),
                    Term(f"{tag}:target-gate", ((a, _number_k(basis, a, ja, (1,))), (b, _hop_k(basis, b, jb, op.gate.matrix)))),
                ]
            elif isinstance(op, CoupledControl):
                pass  # emitted once, from the target side
            else:
                raise TypeError(f"unknown row op {op!r}")
    return terms


def embed(basis: BasisMap, local: dict) -> sp.csr_matrix:
    """Kronecker-embed per-qubit operators, identity elsewhere (qubit 0 fastest)."""
    out = sp.identity(1, dtype=complex, format="csr")
    for q in reversed(range(basis.n_qubits)):
        m = local.get(q)
        m = sp.identity(basis.radices[q], dtype=complex, format="csr") if m is None else sp.csr_matrix(m)
        out = sp.kron(out, m, format="csr")
    return out


def assemble(spec: CircuitSpec, basis: BasisMap, terms: list | None = None) -> sp.csr_matrix:
    """Full Hamiltonian (units of epsilon) as a canonical CSR matrix.

    Duplicate entries are summed and column indices sorted, so the stored
    structure, and with it ``matvec``, is deterministic.
    """
    if terms is None:
        terms = emit_terms(spec, basis)
    n = check_dimension(basis)
    H = sp.csr_matrix((n, n), dtype=complex)
    for t in terms:
        H = H + embed(basis, t.local())
    H = sp.csr_matrix(H)
    H.sum_duplicates()
    H.eliminate_zeros()
    H.sort_indices()
    return H


def factor_matrix(basis: BasisMap, terms: list) -> sp.csr_matrix:
    """Stack of embedded K blocks, A, with A^dag A equal to the assembled Hamiltonian."""
    blocks = []
    for t in terms:
        blocks.append(embed(basis, dict(t.factors)))
    return sp.vstack(blocks, format="csr")


def matvec(H: sp.csr_matrix, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v)
    if v.shape[0] != H.shape[1]:
        raise ValueError(f"dimension mismatch: H is {H.shape}, vector has {v.shape[0]}")
    return H @ v


def hermiticity_residual(H) -> float:
    d = abs(H - H.conj().T)
    return float(d.max()) if d.nnz else 0.0


def dump_coo(H, path=None) -> str:
    """Entries as sorted ``i j re im`` lines."""
    C = sp.coo_matrix(H)
    order = np.lexsort((C.col, C.row))
    lines = [f"{C.row[i]} {C.col[i]} {C.data[i].real!r} {C.data[i].imag!r}" for i in order]
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
