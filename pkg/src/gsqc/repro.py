"""Quoted gap tables: the single 6-row boosted qubit and the two 4-row CNOT qubits."""

from __future__ import annotations

import math
from dataclasses import dataclass

from gsqc.circuit import Boost, BoundaryCondition, single_qubit_circuit, two_qubit_circuit
from gsqc.eigen import EigenOptions, spectral_gap

QUOTED_LAMBDAS = (1.0, math.sqrt(10.0), 10.0, math.sqrt(1000.0), 100.0)
QUOTED_LAMBDA_LABELS = ("1", "sqrt(10)", "10", "sqrt(1000)", "100")

SINGLE_QUBIT_GAPS = (0.0782, 0.0174, 1.94e-3, 1.96e-4, 1.96e-5)
TWO_QUBIT_GAPS = (0.0574, 2.43e-3, 3.05e-5, 3.12e-7, 3.13e-9)

DEFAULT_TOLERANCE = 0.02


def single_qubit_benchmark(lam: float):
    """6-row qubit, boost on the final row, h0 = 10 (I - sigma_z)."""
    return single_qubit_circuit(6, Boost(lam), BoundaryCondition(a=(0.0, 0.0, -1.0), E=10.0))


def two_qubit_benchmark(lam: float):
    """Two 4-row qubits, CNOT, boosted final rows, h1 = 10 (I - sigma_x), h2 = 10 (I + sigma_z)."""
    return two_qubit_circuit(4, lam)


@dataclass
class ReproRow:
    table: str
    lam_label: str
    lam: float
    expected: float
    measured: float
    tolerance: float

    @property
    def rel_error(self) -> float:
        return abs(self.measured - self.expected) / abs(self.expected)

    @property
    def passed(self) -> bool:
        return self.rel_error <= self.tolerance


def quoted_rows(tolerance: float = DEFAULT_TOLERANCE, opts: EigenOptions | None = None) -> list:
    rows = []
    for table, make, expected in (
        ("single-qubit", single_qubit_benchmark, SINGLE_QUBIT_GAPS),
        ("two-qubit", two_qubit_benchmark, TWO_QUBIT_GAPS),
    ):
        for label, lam, exp in zip(QUOTED_LAMBDA_LABELS, QUOTED_LAMBDAS, expected):
            r = spectral_gap(make(lam), opts)
            rows.append(ReproRow(table, label, lam, exp, r.gap, tolerance))
    return rows
