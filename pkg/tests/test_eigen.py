import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import HealthCheck, given, settings, strategies as st

from gsqc.basis import build_basis
from gsqc.circuit import Boost, Project, chain_circuit, qft_circuit, single_qubit_circuit, two_qubit_circuit
from gsqc.eigen import (
    ConvergenceError,
    EigenOptions,
    dense_lowest,
    dense_lowest_factored,
    krylov_lowest,
    spectral_gap,
)
from gsqc.groundstate import construct_ground_state
from gsqc.hamiltonian import assemble, emit_terms, factor_matrix
from gsqc.presets import load_preset, preset_names

from conftest import dense_spectrum

KRYLOV = EigenOptions(dense_threshold=0)


def test_dense_two_row_free_qubit_without_boundary():
    spec = single_qubit_circuit(2)
    b = build_basis(spec)
    terms = [t for t in emit_terms(spec, b) if not t.label.endswith(":boundary")]
    vals, _ = dense_lowest(assemble(spec, b, terms), 4)
    assert np.allclose(vals, [0, 0, 2, 2], atol=1e-14)


def test_dense_boost_qubit_lambda_ten():
    r = spectral_gap(single_qubit_circuit(6, Boost(10.0)))
    assert abs(r.E0) < 1e-12
    assert r.gap == pytest.approx(1.94e-3, rel=0.02)


def test_dense_zero_matrix():
    vals, _ = dense_lowest(sp.csr_matrix((5, 5)), 3)
    assert np.all(vals == 0)


def test_dense_threshold_enforced():
    with pytest.raises(ValueError):
        dense_lowest(sp.identity(10, format="csr"), 2, threshold=5)


def test_krylov_fig1a_deflated():
    spec = two_qubit_circuit(4, math.sqrt(10))
    b = build_basis(spec)
    H = assemble(spec, b)
    psi = construct_ground_state(spec, b).normalized()
    vals, vecs, info = krylov_lowest(H, EigenOptions(), deflate=[psi], k=2)
    assert vals[0] == pytest.approx(2.43e-3, rel=0.02)
    assert abs(np.vdot(psi, vecs[:, 0])) < 1e-10


def test_krylov_without_deflation_finds_zero_mode():
    spec = chain_circuit(3, lam=2.0)
    H = assemble(spec, build_basis(spec))
    vals, _, _ = krylov_lowest(H, EigenOptions(), k=1)
    assert abs(vals[0]) <= 1e-10


@pytest.mark.parametrize("name", [n for n in preset_names() if build_basis(load_preset(n)).dimension <= 2048])
@pytest.mark.parametrize("shift_invert", [False, True])
def test_krylov_matches_dense_on_presets(name, shift_invert):
    spec = load_preset(name)
    d = spectral_gap(spec)
    k = spectral_gap(spec, EigenOptions(dense_threshold=0, shift_invert=shift_invert))
    assert k.method.startswith("krylov")
    assert abs(k.gap - d.gap) <= 1e-8
    assert abs(k.gap - d.gap) <= 1e-8 * max(d.gap, 1e-6)


circuits = st.one_of(
    st.builds(lambda n, l: single_qubit_circuit(n, Boost(l)), st.integers(2, 8), st.floats(1, 30)),
    st.builds(lambda n, l: single_qubit_circuit(n, Project(0, l)), st.integers(2, 8), st.floats(1, 30)),
    st.builds(lambda r, l, t: two_qubit_circuit(r, l, t), st.integers(3, 6), st.floats(1, 30),
              st.sampled_from([("boost", "boost"), ("project", "boost"), ("boost", "project")])),
    st.builds(lambda n, l: chain_circuit(n, 0, l), st.integers(2, 3), st.floats(1, 10)),
    st.builds(lambda l: qft_circuit(2, l), st.floats(1, 10)),
)


@settings(max_examples=20, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(circuits)
def test_krylov_matches_independent_dense_oracle(spec):
    w = dense_spectrum(spec)
    r = spectral_gap(spec, KRYLOV)
    assert abs(r.gap - w[1]) <= 1e-8 * max(w[1], 1e-6)


def test_qft2_end_to_end():
    spec = qft_circuit(2, math.sqrt(10))
    d = spectral_gap(spec)
    k = spectral_gap(spec, KRYLOV)
    assert d.gap > 0 and abs(d.gap - k.gap) <= 1e-10


def test_krylov_is_deterministic_for_a_seed():
    spec = chain_circuit(3, lam=3.0)
    a = spectral_gap(spec, EigenOptions(dense_threshold=0, seed=7))
    b = spectral_gap(spec, EigenOptions(dense_threshold=0, seed=7))
    assert a.to_dict() == b.to_dict()


def test_svd_route_agrees_with_eigh_and_resolves_tiny_gaps():
    spec = chain_circuit(3, lam=100.0)
    e = spectral_gap(spec)
    s = spectral_gap(spec, EigenOptions(dense_method="svd"))
    assert s.method == "dense-svd"
    assert s.gap == pytest.approx(e.gap, rel=0.05)
    b = build_basis(spec)
    vals, _ = dense_lowest_factored(factor_matrix(b, emit_terms(spec, b)), 2)
    assert vals[0] >= 0


def test_gap_result_report_fields():
    r = spectral_gap(two_qubit_circuit(4, 10.0))
    d = r.to_dict()
    assert {"E0", "E1", "E2", "gap", "gap2", "method", "residuals", "dimension", "circuit"} <= set(d)
    assert "vectors" not in d and "seconds" not in d
    assert r.multiplicity == 1 and r.deflated


def test_non_convergence_raises_with_partial_result():
    spec = chain_circuit(3, lam=10.0)
    with pytest.raises(ConvergenceError) as ei:
        spectral_gap(spec, EigenOptions(dense_threshold=0, max_iter=1, subspace=6, k=2))
    assert ei.value.partial is not None


def test_options_reject_nonsense():
    with pytest.raises(ValueError):
        EigenOptions(k=1)
    with pytest.raises(ValueError):
        EigenOptions(dense_method="qr")


@pytest.mark.slow
def test_two_qubit_teleported_after_cnot_exponent():
    from gsqc.analysis import fit_exponent, lambda_sweep
    from gsqc.circuit import insert_teleportation

    fam = lambda l: insert_teleportation(two_qubit_circuit(4, l), "after-every-coupling")
    t = lambda_sweep(fam, [2.0, 4.0, 8.0], opts=EigenOptions(shift_invert=True, k=2))
    assert all(p.error is None for p in t.points)
    assert fit_exponent(t, (1, 10))[0] >= -8 - 0.3
