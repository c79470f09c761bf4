"""One-electron-per-qubit configuration space with mixed-radix ordinals."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from gsqc.circuit import Boost, CircuitSpec, CoupledControl, CoupledTarget, Project, Unitary


def touched_sites(q) -> set:
    """Sites of one qubit that appear in its boundary or any row term."""
    sites = {(0, 0), (0, 1)}
    for j, op in enumerate(q.rows, start=1):
        if isinstance(op, Project):
            sites |= {(j - 1, op.gamma), (j, op.gamma)}
        elif isinstance(op, (Unitary, Boost, CoupledControl, CoupledTarget)):
            sites |= {(j - 1, 0), (j - 1, 1), (j, 0), (j, 1)}
    return sites


@dataclass(frozen=True)
class BasisMap:
    """Product basis over qubits; qubit 0 is the fastest-varying digit.

    ``sites[q]`` lists qubit q's (row, dot) sites in lexicographic order
    after pruning; ``pruned[q]`` lists what was dropped.
    """

    qubit_ids: tuple
    sites: tuple
    pruned: tuple = ()
    _lookup: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_lookup", tuple({s: i for i, s in enumerate(ss)} for ss in self.sites))

    @property
    def n_qubits(self) -> int:
        return len(self.sites)

    @property
    def radices(self) -> tuple:
        return tuple(len(s) for s in self.sites)

    @property
    def strides(self) -> tuple:
        return tuple(int(np.prod(self.radices[:q], dtype=np.int64)) for q in range(self.n_qubits))

    @property
    def dimension(self) -> int:
        return int(np.prod(self.radices, dtype=np.int64))

    @property
    def tensor_shape(self) -> tuple:
        """Shape whose C-order flattening matches the ordinal layout (last qubit first)."""
        return self.radices[::-1]

    def axis(self, q: int) -> int:
        return self.n_qubits - 1 - q

    def qubit_index(self, qid) -> int:
        if isinstance(qid, (int, np.integer)) and not isinstance(qid, bool):
            if not 0 <= qid < self.n_qubits:
                raise KeyError(f"qubit index {qid} out of range")
            return int(qid)
        try:
            return self.qubit_ids.index(qid)
        except ValueError:
            raise KeyError(f"unknown qubit {qid!r}") from None

    def site_index(self, q: int, row: int, dot: int):
        """Local index of a site, or None when the site does not exist or was pruned."""
        return self._lookup[q].get((row, dot))

    def index_of(self, config) -> int:
        """Ordinal of a configuration given as one (row, dot) per qubit."""
        if len(config) != self.n_qubits:
            raise ValueError(f"config has {len(config)} entries, basis has {self.n_qubits} qubits")
        idx = 0
        for q, (site, stride) in enumerate(zip(config, self.strides)):
            local = self._lookup[q].get(tuple(site))
            if local is None:
                raise ValueError(f"invalid site {site} for qubit {self.qubit_ids[q]!r}")
            idx += local * stride
        return idx

    def decode(self, ordinal: int) -> tuple:
        if not 0 <= ordinal < self.dimension:
            raise IndexError(f"ordinal {ordinal} out of range [0, {self.dimension})")
        out = []
        for r, ss in zip(self.radices, self.sites):
            ordinal, d = divmod(ordinal, r)
            out.append(ss[d])
        return tuple(out)

    def row_of(self, q: int) -> np.ndarray:
        """Row number of each local site of qubit q."""
        return np.array([r for r, _ in self.sites[q]])

    def pruning_report(self) -> str:
        lines = []
        for qid, pr in zip(self.qubit_ids, self.pruned):
            if pr:
                lines.append(f"qubit {qid}: pruned {', '.join(f'(row {r}, dot {d})' for r, d in pr)}")
        return "\n".join(lines) if lines else "no sites pruned"


MAX_DIMENSION = 20_000_000


class DimensionTooLarge(MemoryError):
    """The configuration space is too big to hold as dense vectors."""


def check_dimension(basis: "BasisMap", limit: int | None = None) -> int:
    limit = MAX_DIMENSION if limit is None else limit
    n = basis.dimension
    if n > limit:
        raise DimensionTooLarge(f"basis dimension {n} exceeds the limit {limit}")
    return n


def build_basis(spec: CircuitSpec, prune: bool = True) -> BasisMap:
    """Enumerate two dots per row per qubit, dropping sites no term touches.

    The only such sites are the non-projected dots of terminal projection
    rows; left in, each would carry a spurious zero-energy state.
    """
    sites, pruned = [], []
    for q in spec.qubits:
        full = [(r, d) for r in range(q.n_rows) for d in (0, 1)]
        keep = touched_sites(q) if prune else set(full)
        sites.append(tuple(s for s in full if s in keep))
        pruned.append(tuple(s for s in full if s not in keep))
    return BasisMap(tuple(spec.qubit_ids()), tuple(sites), tuple(pruned))
