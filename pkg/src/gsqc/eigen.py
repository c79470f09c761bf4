"""Lowest eigenpairs: a dense oracle and a deflated thick-restart Lanczos solver."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from gsqc.basis import build_basis
from gsqc.circuit import CircuitSpec, require_valid
from gsqc.groundstate import construct_ground_state, residual_energy
from gsqc.hamiltonian import assemble, emit_terms, factor_matrix, matvec

CLUSTER_TOL = 1e-10


class ConvergenceError(RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


@dataclass
class EigenOptions:
    k: int = 3
    tol: float | None = None
    max_iter: int = 300
    seed: int = 0
    dense_threshold: int = 2048
    shift_invert: bool = False
    # "eigh" diagonalizes H; "svd" takes squared singular values of the stacked
    # term factors, which keeps relative accuracy for gaps far below |H| * 1e-16
    dense_method: str = "eigh"
    # Krylov basis size per restart cycle; None picks max(2k + 20, 40)
    subspace: int | None = None
    inner: str = "cg"
    inner_rtol: float = 1e-13
    inner_maxiter: int = 200000

    def __post_init__(self):
        # k counts the ground state, so a gap needs at least two levels
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if self.tol is not None and not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.dense_method not in ("eigh", "svd"):
            raise ValueError(f"dense_method must be 'eigh' or 'svd', got {self.dense_method!r}")
        if self.inner not in ("cg", "lu"):
            raise ValueError(f"inner must be 'cg' or 'lu', got {self.inner!r}")

    def tolerance(self, dimension: int) -> float:
        if self.tol is not None:
            return self.tol
        return min(1e-11 * np.sqrt(dimension), 1e-9)


@dataclass
class GapResult:
    E0: float
    E1: float
    E2: float | None
    residuals: list
    method: str
    deflated: bool
    dimension: int
    multiplicity: int = 1
    circuit: str = ""
    options: dict = field(default_factory=dict)
    seconds: float = 0.0
    vectors: list = field(default_factory=list, repr=False)

    @property
    def gap(self) -> float:
        return self.E1 - self.E0

    @property
    def gap2(self) -> float | None:
        return None if self.E2 is None else self.E2 - self.E0

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("vectors")
        d.pop("seconds")
        d["gap"] = self.gap
        d["gap2"] = self.gap2
        return d


def _residuals(H, vals, vecs):
    return [float(np.linalg.norm(matvec(H, vecs[:, i]) - vals[i] * vecs[:, i])) for i in range(len(vals))]


def dense_lowest(H, k: int, threshold: int = 2048):
    """Lowest k eigenpairs by full Hermitian diagonalization (the oracle)."""
    n = H.shape[0]
    if n > threshold:
        raise ValueError(f"dimension {n} exceeds dense threshold {threshold}")
    A = H.toarray() if sp.issparse(H) else np.asarray(H)
    k = min(k, n)
    vals, vecs = sla.eigh(A, subset_by_index=[0, k - 1])
    return vals, vecs


def dense_lowest_factored(A, k: int, threshold: int = 2048):
    """Lowest k eigenpairs of A^dag A from the SVD of A (squared singular values)."""
    n = A.shape[1]
    if n > threshold:
        raise ValueError(f"dimension {n} exceeds dense threshold {threshold}")
    A = A.toarray() if sp.issparse(A) else np.asarray(A)
    _, s, Vh = np.linalg.svd(A, full_matrices=False)
    order = np.argsort(s)[: min(k, n)]
    return s[order] ** 2, Vh[order].conj().T


def _orthogonalize(w, blocks):
    # two passes of classical Gram-Schmidt against every stored block
    for _ in range(2):
        for B in blocks:
            if B is not None and B.shape[1]:
                w = w - B @ (B.conj().T @ w)
    return w


def _shift_invert_operator(H, sigma, Q, opts):
    n = H.shape[0]
    M = (H + sigma * sp.identity(n, dtype=complex, format="csr")).tocsc()
    if opts.inner == "lu":
        lu = spla.splu(M)
        return lambda b: lu.solve(b)
    diag = M.diagonal().real
    precond = spla.LinearOperator((n, n), matvec=lambda x: x / diag, dtype=complex)

    def project(x):
        return x if Q is None else x - Q @ (Q.conj().T @ x)

    op = spla.LinearOperator((n, n), matvec=lambda x: project(M @ project(x)), dtype=complex)

    def solve(b):
        x, info = spla.cg(op, project(b), rtol=opts.inner_rtol, atol=0.0, maxiter=opts.inner_maxiter, M=precond)
        if info != 0:
            raise ConvergenceError(f"inner CG solve did not converge (info={info})")
        return x

    return solve


def krylov_lowest(H, opts: EigenOptions | None = None, deflate=(), k: int | None = None):
    """Lowest eigenpairs of H restricted to the orthogonal complement of ``deflate``.

    Thick-restart Lanczos with full reorthogonalization against the Krylov
    basis and the deflation vectors. With ``shift_invert`` the Krylov space
    is built on (H + sigma)^-1, sigma = tol, and eigenvalues are mapped back.
    Returns ``(values, vectors, info)``; raises ConvergenceError after
    ``max_iter`` restart cycles.
    """
    opts = opts or EigenOptions()
    n = H.shape[0]
    k = k if k is not None else opts.k
    tol = opts.tolerance(n)
    Q = None
    if len(deflate):
        Q = np.column_stack([np.asarray(v, dtype=complex) for v in deflate])
        Q, _ = np.linalg.qr(Q)
    avail = n - (0 if Q is None else Q.shape[1])
    if k > avail:
        raise ValueError(f"requested {k} eigenpairs from a {avail}-dimensional space")
    m = opts.subspace or max(2 * k + 20, 40)
    m = min(m, avail)

    if opts.shift_invert:
        sigma = tol
        solve = _shift_invert_operator(H, sigma, Q, opts)

        def apply(x):
            return solve(x)
    else:
        sigma = None

        def apply(x):
            return matvec(H, x)

    rng = np.random.default_rng(opts.seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v = _orthogonalize(v, [Q])
    v /= np.linalg.norm(v)

    V = np.zeros((n, m + 1), dtype=complex)
    T = np.zeros((m + 1, m + 1), dtype=complex)
    V[:, 0] = v
    start = 0
    n_apply = 0
    for cycle in range(1, opts.max_iter + 1):
        for j in range(start, m):
            w = apply(V[:, j])
            n_apply += 1
            h = V[:, : j + 1].conj().T @ w
            w = w - V[:, : j + 1] @ h
            if Q is not None:
                w = w - Q @ (Q.conj().T @ w)
            h2 = V[:, : j + 1].conj().T @ w
            w = w - V[:, : j + 1] @ h2
            T[: j + 1, j] = h + h2
            T[j, : j + 1] = np.conj(T[: j + 1, j])
            beta = np.linalg.norm(w)
            if beta < 1e-14 * max(1.0, abs(T[j, j])):
                # invariant subspace: restart the tail from a fresh random direction
                w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
                w = _orthogonalize(w, [Q, V[:, : j + 1]])
                V[:, j + 1] = w / np.linalg.norm(w)
                T[j + 1, j] = T[j, j + 1] = 0.0
            else:
                V[:, j + 1] = w / beta
                T[j + 1, j] = T[j, j + 1] = beta
        theta, Y = np.linalg.eigh(T[:m, :m])
        # wanted end: smallest eigenvalues of H, i.e. largest of (H + sigma)^-1
        order = np.argsort(-theta) if opts.shift_invert else np.argsort(theta)
        theta, Y = theta[order], Y[:, order]
        beta_m = T[m, m - 1].real
        est = np.abs(beta_m * Y[m - 1, :])

        X = V[:, :m] @ Y[:, :k]
        if opts.shift_invert:
            vals = 1.0 / theta[:k] - sigma
        else:
            vals = theta[:k].copy()
        res = np.array(_residuals(H, vals, X))
        if np.all(res <= tol):
            idx = np.argsort(vals)
            info = {"cycles": cycle, "applications": n_apply, "residuals": res[idx].tolist(), "tol": tol}
            return vals[idx], X[:, idx], info
        if m == avail and not opts.shift_invert and np.all(est[:k] <= 1e-14 * max(1.0, np.max(np.abs(theta)))):
            raise ConvergenceError(
                f"Krylov space exhausted with residuals {res.tolist()} above tol {tol}",
                partial=(vals, X, res),
            )
        keep = min(max(k + (m - k) // 2, k + 1), m - 1)
        Vk = V[:, :m] @ Y[:, :keep]
        V[:, :keep] = Vk
        V[:, keep] = V[:, m]
        V[:, keep + 1 :] = 0.0
        T[:] = 0.0
        T[np.arange(keep), np.arange(keep)] = theta[:keep]
        T[keep, :keep] = beta_m * Y[m - 1, :keep]
        T[:keep, keep] = np.conj(T[keep, :keep])
        start = keep
    raise ConvergenceError(
        f"no convergence in {opts.max_iter} restart cycles; residuals {res.tolist()} vs tol {tol}",
        partial=(vals, X, res),
    )


def spectral_gap(spec: CircuitSpec, opts: EigenOptions | None = None, prune: bool = True) -> GapResult:
    """E0, E1, E2 of a circuit, with the analytic zero mode deflated.

    E0 is the Rayleigh quotient of the constructed ground state. Below
    ``dense_threshold`` the dense oracle is used and the eigenvector that
    overlaps the zero mode most is removed; above it the Lanczos solver
    runs in the orthogonal complement of the zero mode.
    """
    opts = opts or EigenOptions()
    t0 = time.perf_counter()
    require_valid(spec)
    basis = build_basis(spec, prune=prune)
    terms = emit_terms(spec, basis)
    H = assemble(spec, basis, terms)
    gs = construct_ground_state(spec, basis, H=H)
    psi0 = gs.normalized()
    E0 = residual_energy(H, psi0)
    n = basis.dimension
    want = min(opts.k - 1, n - 1)
    if n <= opts.dense_threshold:
        if opts.dense_method == "svd":
            vals, vecs = dense_lowest_factored(factor_matrix(basis, terms), want + 1, opts.dense_threshold)
            method = "dense-svd"
        else:
            vals, vecs = dense_lowest(H, want + 1, opts.dense_threshold)
            method = "dense"
        drop = int(np.argmax(np.abs(vecs.conj().T @ psi0)))
        keep = [i for i in range(len(vals)) if i != drop]
        vals, vecs = vals[keep], vecs[:, keep]
        residuals = _residuals(H, vals, vecs)
    else:
        vals, vecs, info = krylov_lowest(H, opts, deflate=[psi0], k=want)
        residuals = info["residuals"]
        method = "krylov+shift-invert" if opts.shift_invert else "krylov"
    E1 = float(vals[0])
    E2 = float(vals[1]) if len(vals) > 1 else None
    mult = int(np.sum(np.abs(vals - vals[0]) <= CLUSTER_TOL))
    return GapResult(
        E0=E0,
        E1=E1,
        E2=E2,
        residuals=[float(np.linalg.norm(matvec(H, psi0)))] + [float(r) for r in residuals],
        method=method,
        deflated=True,
        dimension=n,
        multiplicity=mult,
        circuit=spec.digest(),
        options={k: v for k, v in asdict(opts).items()},
        seconds=time.perf_counter() - t0,
        vectors=[psi0] + [vecs[:, i] for i in range(vecs.shape[1])],
    )
