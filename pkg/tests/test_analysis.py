import json
import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from gsqc.analysis import (
    SweepPoint,
    SweepTable,
    final_row_success_probability,
    fit_exponent,
    fit_exponent_xy,
    lambda_sweep,
    resource_estimate,
    resource_laws,
    row_profile,
    upstream_weight,
    write_sweep,
)
from gsqc.basis import build_basis
from gsqc.circuit import Boost, BoundaryCondition, CircuitSpec, QubitSpec, chain_circuit, single_qubit_circuit, two_qubit_circuit
from gsqc.eigen import spectral_gap
from gsqc.groundstate import construct_ground_state


def _ground(spec):
    b = build_basis(spec)
    return b, construct_ground_state(spec, b).normalized()


def test_profile_probabilities_sum_to_one():
    b, psi = _ground(chain_circuit(3, lam=4.0))
    for q in b.qubit_ids:
        assert row_profile(psi, b, q).probability.sum() == pytest.approx(1, abs=1e-12)


def test_profile_dot_state_follows_gates():
    b, psi = _ground(single_qubit_circuit(3, boundary=BoundaryCondition((0, 0, -1))))
    st_ = row_profile(psi, b, 0).dot_state
    assert np.allclose(np.abs(st_[0]), [1, 0])


def test_profile_unknown_qubit():
    b, psi = _ground(single_qubit_circuit(3))
    with pytest.raises(KeyError):
        row_profile(psi, b, "nope")


@pytest.mark.parametrize("n,lam", [(4, 10.0), (6, 50.0)])
def test_boost_final_row_weight(n, lam):
    b, psi = _ground(single_qubit_circuit(n, Boost(lam)))
    assert row_profile(psi, b, 0).probability[-1] == pytest.approx(lam**2 / (lam**2 + n - 1), abs=1e-12)


def test_fig1a_control_upstream_ratio_near_one_hundredth():
    b, psi = _ground(two_qubit_circuit(4, 10.0))
    assert row_profile(psi, b, "control").amplitude_ratio(1, 3) == pytest.approx(1e-2, rel=0.3)


def _first_excited(lam):
    r = spectral_gap(two_qubit_circuit(4, lam))
    return build_basis(two_qubit_circuit(4, lam)), r.vectors[1]


def test_first_excited_upstream_scaling():
    b1, v1 = _first_excited(math.sqrt(10))
    b2, v2 = _first_excited(10.0)
    ctl = upstream_weight(v2, b2, "control", 2) / upstream_weight(v1, b1, "control", 2)
    tgt = upstream_weight(v2, b2, "target", 2) / upstream_weight(v1, b1, "target", 2)
    assert ctl == pytest.approx(0.1, rel=0.5)
    assert tgt == pytest.approx(1 / math.sqrt(10), rel=0.5)


def test_upstream_weight_zero_below_cut():
    b = build_basis(single_qubit_circuit(4))
    psi = np.zeros(b.dimension, complex)
    psi[b.index_of([(3, 0)])] = 1
    assert upstream_weight(psi, b, 0, 3) == 0.0
    assert upstream_weight(psi, b, 0, 0) == 0.0


def test_upstream_weight_invalid_cut():
    b, psi = _ground(single_qubit_circuit(4))
    with pytest.raises(ValueError):
        upstream_weight(psi, b, 0, 9)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.floats(1.0, 1e4))
def test_single_boost_success_probability(n, lam):
    b, psi = _ground(single_qubit_circuit(n, Boost(lam)))
    p = final_row_success_probability(psi, b)
    assert p == pytest.approx(lam**2 / (lam**2 + n - 1), abs=1e-10)
    assert p >= 1 - (n - 1) / lam**2 - 1e-12


def test_independent_qubits_multiply():
    a = single_qubit_circuit(4, Boost(3.0)).qubits[0]
    c = single_qubit_circuit(5, Boost(6.0)).qubits[0]
    spec = CircuitSpec([QubitSpec("a", a.boundary, a.rows), QubitSpec("c", c.boundary, c.rows)])
    b, psi = _ground(spec)
    assert final_row_success_probability(psi, b) == pytest.approx(9 / 12 * 36 / 40, abs=1e-12)


def test_fig1a_success_probability_bound():
    lam = 10.0
    b, psi = _ground(two_qubit_circuit(4, lam))
    p = final_row_success_probability(psi, b)
    assert p >= (1 - 4 / lam**2) ** 2
    assert p == pytest.approx(0.960892, abs=1e-6)


# sweeps and fits ------------------------------------------------------------

def test_fit_exact_power_law():
    lams = [1, 2, 5, 10, 20]
    t = SweepTable("synthetic", [SweepPoint(l, l**-4.0, None, 0, 1) for l in lams])
    slope, err = fit_exponent(t, (1, 20))
    # stderr is sqrt of a roundoff-level residual
    assert slope == pytest.approx(-4.0, abs=1e-12) and err < 1e-6


def test_fit_needs_three_points():
    t = SweepTable("x", [SweepPoint(1, 1, None, 0, 1), SweepPoint(2, 0.5, None, 0, 1)])
    with pytest.raises(ValueError):
        fit_exponent(t, (0, 10))


def test_fit_skips_failed_points():
    pts = [SweepPoint(l, l**-2.0, None, 0, 1) for l in (1, 2, 4)] + [SweepPoint(8, None, None, None, None, error="boom")]
    assert fit_exponent(SweepTable("x", pts), (1, 100))[0] == pytest.approx(-2)


def test_sweep_orders_and_records_failures():
    def family(lam):
        if lam == 3.0:
            raise RuntimeError("bad point")
        return single_qubit_circuit(4, Boost(lam))

    t = lambda_sweep(family, [1.0, 2.0, 3.0, 4.0], workers=3)
    assert [p.lam for p in t.points] == [1, 2, 3, 4]
    assert t.points[2].error and "bad point" in t.points[2].error
    assert all(p.error is None for i, p in enumerate(t.points) if i != 2)


def test_sweep_rejects_unsorted():
    with pytest.raises(ValueError):
        lambda_sweep(lambda l: single_qubit_circuit(3, Boost(l)), [2.0, 1.0])


def test_sweep_workers_do_not_change_output():
    fam = lambda l: chain_circuit(2, lam=l)
    a = lambda_sweep(fam, [1, 3, 9], workers=1).to_tsv()
    b = lambda_sweep(fam, [1, 3, 9], workers=4).to_tsv()
    assert a == b


def test_chain_three_gap_decreases():
    t = lambda_sweep(lambda l: chain_circuit(3, lam=l), [1, math.sqrt(10), 10])
    g = t.gaps()
    assert g[0] > g[1] > g[2]


def test_boost_qubit_slope_from_quoted_column():
    lams = [10, math.sqrt(1000), 100]
    assert fit_exponent_xy(lams, [1.94e-3, 1.96e-4, 1.96e-5])[0] == pytest.approx(-2, abs=0.05)


def test_write_sweep_is_reproducible(tmp_path):
    fam = lambda l: single_qubit_circuit(6, Boost(l))
    for d in ("a", "b"):
        write_sweep(lambda_sweep(fam, [10, 20, 40, 80]), tmp_path / d, "boost")
    for ext in ("tsv", "json"):
        assert (tmp_path / "a" / f"boost.{ext}").read_bytes() == (tmp_path / "b" / f"boost.{ext}").read_bytes()
    rep = json.loads((tmp_path / "a" / "boost.json").read_text())
    assert rep["fit"]["slope"] == pytest.approx(-2, abs=0.05)
    assert len(rep["plot"]["x"]) == 4
    assert (tmp_path / "a" / "boost.timing.tsv").exists()


# resource estimates ---------------------------------------------------------

def test_resource_laws_k2():
    N, D, F, C, eps = sympy.symbols("N D F C epsilon", positive=True)
    laws = resource_laws(2)
    assert sympy.simplify(laws["lambda"] - sympy.sqrt(D) * N) == 0
    assert sympy.simplify(laws["gap"] - eps / (D**4 * N**8)) == 0
    assert sympy.simplify(laws["probability"] - sympy.exp(-F * C / D)) == 0


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_gap_exponent_is_four_k(k):
    N = sympy.Symbol("N", positive=True)
    gap = resource_laws(k)["gap"]
    assert sympy.degree(sympy.denom(gap), N) == 4 * k
    assert resource_estimate(10, k).gap_exponent == 4 * k


def test_golden_law_text():
    assert resource_estimate(20).law_text() == "\n".join(
        [
            "lambda ~ sqrt(D)*N",
            "qubits ~ F*N**2",
            "gap ~ epsilon/(D**4*N**8)",
            "P ~ exp(-C*F/D)",
            "adiabatic time ~ D**8*N**16",
        ]
    )


def test_resource_numbers():
    e = resource_estimate(N=10, k=2, D=4, F=2, C=8)
    assert e.lam == pytest.approx(20)
    assert e.qubits == 200
    assert e.gap_scale == pytest.approx(1 / (4**4 * 10**8))
    assert e.probability == pytest.approx(math.exp(-4))
    assert 0 < e.probability_bound <= 1


def test_probability_tends_to_one_for_large_d():
    assert resource_estimate(10, D=1e9).probability == pytest.approx(1, abs=1e-7)


@pytest.mark.parametrize("kw", [dict(N=0), dict(N=5, D=-1), dict(N=5, C=9), dict(N=5, F=0)])
def test_resource_rejects_bad_input(kw):
    with pytest.raises(ValueError):
        resource_estimate(**kw)


# scaling invariants ---------------------------------------------------------

FIT_LAMBDAS = [10 ** (1 + i / 4) for i in range(5)]


def test_mixed_terminals_keep_fourth_power():
    t = lambda_sweep(lambda l: two_qubit_circuit(4, l, ("project", "boost")), FIT_LAMBDAS)
    assert fit_exponent(t, (10, 100))[0] == pytest.approx(-4, abs=0.3)


def test_chain_slopes_over_lower_window():
    lams = [math.sqrt(10) * 10 ** (i / 4) for i in range(5)]
    for n in (2, 3):
        t = lambda_sweep(lambda l: chain_circuit(n, 0, l), lams, opts=None)
        assert fit_exponent(t, (math.sqrt(10), 10 * math.sqrt(10)))[0] == pytest.approx(-2 * n, abs=0.3)
