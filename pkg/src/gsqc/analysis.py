"""Wavefunction diagnostics, lambda sweeps, exponent fits and resource scaling laws."""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
import sympy
from scipy import stats

from gsqc.basis import BasisMap
from gsqc.eigen import EigenOptions, spectral_gap


def _probabilities(psi, basis: BasisMap) -> np.ndarray:
    p = np.abs(np.asarray(psi).reshape(basis.tensor_shape)) ** 2
    return p / p.sum()


@dataclass
class RowProfile:
    """Per-row view of one qubit's electron.

    ``probability`` is the marginal over dots and all other qubits;
    ``peak`` is the largest single-configuration amplitude with the electron
    on that row; ``dot_state`` is the dominant dot state of the row.
    """

    qubit: str
    probability: np.ndarray
    peak: np.ndarray
    dot_state: list

    def amplitude_ratio(self, row: int, ref: int) -> float:
        """Peak amplitude on ``row`` over peak amplitude on ``ref``."""
        return float(self.peak[row] / self.peak[ref])

    def marginal_ratio(self, row: int, ref: int) -> float:
        """sqrt(P(row) / P(ref)) from the row marginals."""
        return math.sqrt(self.probability[row] / self.probability[ref])


def row_profile(psi, basis: BasisMap, qubit) -> RowProfile:
    """Per-row marginal probability of one qubit's electron and its dominant dot state."""
    q = basis.qubit_index(qubit)
    ax = basis.axis(q)
    T = np.moveaxis(np.asarray(psi).reshape(basis.tensor_shape), ax, 0)
    T = T.reshape(T.shape[0], -1)
    T = T / np.linalg.norm(T)
    local_p = np.sum(np.abs(T) ** 2, axis=1)
    rows = basis.row_of(q)
    n_rows = int(rows.max()) + 1
    prob = np.zeros(n_rows)
    np.add.at(prob, rows, local_p)
    peak = np.zeros(n_rows)
    np.maximum.at(peak, rows, np.max(np.abs(T), axis=1))
    states = []
    for r in range(n_rows):
        idx = [basis.site_index(q, r, d) for d in (0, 1)]
        block = np.zeros((2, T.shape[1]), dtype=complex)
        for d, i in enumerate(idx):
            if i is not None:
                block[d] = T[i]
        rho = block @ block.conj().T
        w, v = np.linalg.eigh(rho)
        s = v[:, -1]
        nz = np.flatnonzero(np.abs(s) > 1e-12)
        if nz.size:
            s = s * np.conj(s[nz[0]]) / abs(s[nz[0]])
        states.append(s)
    return RowProfile(basis.qubit_ids[q], prob, peak, states)


def upstream_weight(psi, basis: BasisMap, qubit, cut_row: int) -> float:
    """Norm of the part of psi with ``qubit``'s electron on a row above ``cut_row`` (rows < cut_row)."""
    q = basis.qubit_index(qubit)
    rows = basis.row_of(q)
    if not 0 <= cut_row <= int(rows.max()):
        raise ValueError(f"cut row {cut_row} outside qubit {basis.qubit_ids[q]!r}")
    prof = row_profile(psi, basis, q)
    return math.sqrt(float(np.sum(prof.probability[:cut_row])))


def final_row_success_probability(psi, basis: BasisMap) -> float:
    """Probability that every qubit's electron sits on its own final row."""
    P = _probabilities(psi, basis)
    for q in range(basis.n_qubits):
        rows = basis.row_of(q)
        mask = rows == rows.max()
        P = np.take(P, np.flatnonzero(mask), axis=basis.axis(q))
    return float(P.sum())


@dataclass
class SweepPoint:
    lam: float
    gap: float | None
    gap2: float | None
    residual: float | None
    dimension: int | None
    seconds: float = 0.0
    method: str = ""
    error: str | None = None


@dataclass
class SweepTable:
    family: str
    points: list = field(default_factory=list)
    max_rows: int = 0

    def lambdas(self) -> np.ndarray:
        return np.array([p.lam for p in self.points])

    def gaps(self) -> np.ndarray:
        return np.array([np.nan if p.gap is None else p.gap for p in self.points])

    def to_tsv(self) -> str:
        """Delimited table; wall-clock seconds go to :meth:`timing_tsv` so reruns are byte-identical."""
        lines = ["lambda\tgap\tgap2\tresidual\tdimension\tmethod\terror"]
        for p in self.points:
            cells = [p.lam, p.gap, p.gap2, p.residual, p.dimension, p.method, p.error]
            lines.append("\t".join("" if c is None else (repr(c) if isinstance(c, float) else str(c)) for c in cells))
        return "\n".join(lines) + "\n"

    def timing_tsv(self) -> str:
        return "lambda\tseconds\n" + "".join(f"{p.lam!r}\t{p.seconds:.3f}\n" for p in self.points)

    def to_dict(self) -> dict:
        pts = []
        for p in self.points:
            d = asdict(p)
            d.pop("seconds")
            pts.append(d)
        return {"family": self.family, "max_rows": self.max_rows, "points": pts}


def lambda_sweep(
    family: Callable,
    lambdas,
    name: str = "custom",
    opts: EigenOptions | None = None,
    workers: int = 1,
) -> SweepTable:
    """Solve ``family(lam)`` for every lambda; failures are kept with their error message.

    Points may be solved concurrently; the table is always in lambda order.
    """
    lambdas = [float(x) for x in lambdas]
    if any(b <= a for a, b in zip(lambdas, lambdas[1:])):
        raise ValueError("lambda values must be strictly increasing")

    def solve(lam):
        t0 = time.perf_counter()
        try:
            spec = family(lam)
            r = spectral_gap(spec, opts)
            rows = max(q.n_rows for q in spec.qubits)
            return rows, SweepPoint(lam, r.gap, r.gap2, max(r.residuals), r.dimension, time.perf_counter() - t0, r.method)
        except Exception as exc:  # recorded on the point, never dropped
            return 0, SweepPoint(lam, None, None, None, None, time.perf_counter() - t0, "", f"{type(exc).__name__}: {exc}")

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(solve, lambdas))
    else:
        results = [solve(lam) for lam in lambdas]
    return SweepTable(name, [p for _, p in results], max(r for r, _ in results))


def default_window(table: SweepTable) -> tuple:
    """Asymptotic fitting window lam >= sqrt(10) * (longest qubit) / 2."""
    return (math.sqrt(10.0) * table.max_rows / 2.0, math.inf)


def fit_exponent(table: SweepTable, window: tuple | None = None) -> tuple:
    """Least-squares slope of log(gap) against log(lambda) inside ``window``; returns (slope, stderr)."""
    lo, hi = window if window is not None else default_window(table)
    pts = [p for p in table.points if p.error is None and p.gap is not None and p.gap > 0 and lo <= p.lam * (1 + 1e-12) and p.lam <= hi * (1 + 1e-12)]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 solved points in window [{lo}, {hi}], have {len(pts)}")
    x = np.log([p.lam for p in pts])
    y = np.log([p.gap for p in pts])
    fit = stats.linregress(x, y)
    return float(fit.slope), float(fit.stderr)


def fit_exponent_xy(lams, values) -> tuple:
    fit = stats.linregress(np.log(lams), np.log(values))
    return float(fit.slope), float(fit.stderr)


def write_sweep(table: SweepTable, out_dir, stem: str, window=None) -> dict:
    """Write ``stem.tsv``, ``stem.json`` (table, fit, plot data) and ``stem.timing.tsv``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = table.to_dict()
    try:
        slope, stderr = fit_exponent(table, window)
        lo, hi = window if window is not None else default_window(table)
        pts = [(p.lam, p.gap) for p in table.points if p.error is None and p.gap and lo <= p.lam * (1 + 1e-12) <= hi * (1 + 1e-12) * (1 + 1e-12)]
        ys = np.log([g for _, g in pts])
        xs = np.log([l for l, _ in pts])
        intercept = float(np.mean(ys) - slope * np.mean(xs))
        report["fit"] = {"slope": slope, "stderr": stderr, "intercept": intercept, "window": [lo, None if math.isinf(hi) else hi]}
    except ValueError as exc:
        report["fit"] = {"error": str(exc)}
    report["plot"] = {
        "x": [p.lam for p in table.points],
        "y": [p.gap for p in table.points],
        "xscale": "log",
        "yscale": "log",
        "xlabel": "lambda",
        "ylabel": "gap / epsilon",
    }
    (out / f"{stem}.tsv").write_text(table.to_tsv())
    (out / f"{stem}.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    (out / f"{stem}.timing.tsv").write_text(table.timing_tsv())
    return report


# Closed-form resource scaling ------------------------------------------------

_N, _k, _D, _F, _C, _eps = sympy.symbols("N k D F C epsilon", positive=True)


def resource_laws(k=None) -> dict:
    """Symbolic scaling laws; ``k`` fixed to an integer substitutes into every expression.

    With F N^k qubits each reaching its final row with probability at least
    1 - C/lam^2, an appreciable joint probability needs lam^2 = D N^k. The
    gap then scales as eps / lam^8 and adiabatic time as gap^-2.
    """
    kk = _k if k is None else sympy.Integer(k)
    lam = sympy.sqrt(_D) * _N ** (kk / 2)
    qubits = _F * _N**kk
    gap = sympy.simplify(_eps / lam**8)
    prob_bound = (1 - _C / lam**2) ** qubits
    prob_limit = sympy.limit(prob_bound, _N, sympy.oo) if k is not None else sympy.exp(-_F * _C / _D)
    return {
        "lambda": sympy.simplify(lam),
        "qubits": qubits,
        "gap": gap,
        "probability_bound": prob_bound,
        "probability": sympy.simplify(prob_limit),
        "time": sympy.simplify(1 / (gap / _eps) ** 2),
    }


@dataclass
class ResourceEstimate:
    N: float
    k: float
    D: float
    F: float
    C: float
    lam: float
    qubits: float
    gap_scale: float
    gap_exponent: float
    probability: float
    probability_bound: float
    time_scale: float

    def law_text(self) -> str:
        kk = int(self.k) if float(self.k).is_integer() else None
        laws = resource_laws(kk)
        return "\n".join(
            [
                f"lambda ~ {sympy.sstr(laws['lambda'])}",
                f"qubits ~ {sympy.sstr(laws['qubits'])}",
                f"gap ~ {sympy.sstr(laws['gap'])}",
                f"P ~ {sympy.sstr(laws['probability'])}",
                f"adiabatic time ~ {sympy.sstr(laws['time'])}",
            ]
        )

    def report(self) -> str:
        lines = [
            f"N = {self.N:g}, k = {self.k:g}, D = {self.D:g}, F = {self.F:g}, C = {self.C:g}",
            f"lambda = {self.lam:.6g}",
            f"qubits = {self.qubits:.6g}",
            f"gap scale = {self.gap_scale:.6g} epsilon (1/gap ~ N^{self.gap_exponent:g})",
            f"P (large N) = {self.probability:.6g}, P bound at this N = {self.probability_bound:.6g}",
            f"adiabatic time scale = {self.time_scale:.6g} / epsilon",
            self.law_text(),
        ]
        return "\n".join(lines)


def resource_estimate(N, k=2, D=None, F=1.0, C=8.0) -> ResourceEstimate:
    """Closed-form lambda, qubit count, gap, success probability and adiabatic time.

    ``D`` defaults to ``C``; ``C`` (rows per qubit) must not exceed 8.
    """
    D = C if D is None else D
    for name, v in (("N", N), ("k", k), ("D", D), ("F", F), ("C", C)):
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v}")
    if C > 8:
        raise ValueError(f"C (rows per qubit) must be <= 8, got {C}")
    lam = math.sqrt(D) * N ** (k / 2)
    qubits = F * N**k
    gap = 1.0 / lam**8
    per_qubit = max(0.0, 1.0 - C / lam**2)
    bound = per_qubit**qubits
    return ResourceEstimate(
        N=N, k=k, D=D, F=F, C=C,
        lam=lam,
        qubits=qubits,
        gap_scale=gap,
        gap_exponent=4 * k,
        probability=math.exp(-F * C / D),
        probability_bound=bound,
        time_scale=gap**-2,
    )
