import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wignerbell import bell, logical_model as lm, phase_space as ps
from wignerbell.errors import InvalidArgument, NonDiagonalState

from conftest import OPTIMAL

# mpmath values
ERF2_SQ = 0.99066641124245838159
CHSH_OPTIMAL_2 = 2.802027749133133293
CORR_PI_8 = 0.70050693728328332326
THRESHOLD = 0.99567198654682460352
SQRT2_OVER_4PI = 0.11253953951963825869


def test_sign_expectation():
    origin = ps.coherent_mode(0, 0.5)
    for t in (0.0, 0.4, math.pi / 2, 3.0):
        assert bell.sign_expectation(origin, t) == 0.0
    m = ps.coherent_mode(2, 0.5)
    assert bell.sign_expectation(m, bell.MeasurementSetting(0.0)) == pytest.approx(0.9953222650189527, abs=1e-15)
    assert bell.sign_expectation(m, math.pi / 2) == pytest.approx(0.0, abs=1e-15)


def test_sign_expectation_literal_quarter_variance_gives_erf_sqrt2():
    m = ps.coherent_mode(1.0, 0.25)
    assert bell.sign_expectation(m, 0.0) == pytest.approx(math.erf(math.sqrt(2.0)), abs=1e-15)


def test_correlation_analytic_examples():
    w0 = lm.to_wigner(lm.rho0(), 2, 0.5)
    w1 = lm.to_wigner(lm.rho1(), 2, 0.5)
    wq = lm.to_wigner(lm.rho_target(math.pi / 8, -math.pi / 8), 2, 0.5)
    assert bell.correlation_analytic(w0, 0, 0).value == pytest.approx(ERF2_SQ, abs=1e-14)
    assert bell.correlation_analytic(w1, 0, 0).value == pytest.approx(-ERF2_SQ, abs=1e-14)
    assert bell.correlation_analytic(wq, 0, 0).value == pytest.approx(0.0, abs=1e-14)
    est = bell.correlation_analytic(w0, 0, 0)
    assert (est.method, est.n, est.stderr) == ("analytic", 0, 0.0)


def test_correlation_closed_form_examples():
    for a in (0.3, 1.0, 2.0):
        assert bell.correlation_closed_form(0, 0, a) == pytest.approx(math.erf(a) ** 2, abs=1e-15)
    assert bell.correlation_closed_form(math.pi / 8, -math.pi / 8, 2) == pytest.approx(0, abs=1e-15)
    assert bell.correlation_closed_form(0, math.pi / 8, 2) == pytest.approx(CORR_PI_8, abs=1e-14)


def test_convention_lock_random():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        t, p = rng.uniform(-math.pi, math.pi, 2)
        a = rng.uniform(0.05, 4.0)
        w = lm.to_wigner(lm.rho_target(t, p), a, 0.5)
        assert abs(bell.correlation_closed_form(t, p, a) - bell.correlation_analytic(w, 0, 0).value) <= 1e-12


def test_correlation_estimate_validation():
    with pytest.raises(InvalidArgument):
        bell.CorrelationEstimate(1.5, "analytic")
    with pytest.raises(InvalidArgument):
        bell.CorrelationEstimate(0.5, "analytic", n=10, stderr=0.1)
    with pytest.raises(InvalidArgument):
        bell.CorrelationEstimate(0.5, "guess")


# --- Monte Carlo

def test_correlation_mc_matches_analytic():
    w = lm.to_wigner(lm.rho_target(0, math.pi / 8), 2, 0.5)
    est = bell.correlation_mc(w, 0, 0, seed=1, n=10 ** 6)
    assert est.method == "monte-carlo" and est.n == 10 ** 6
    assert est.stderr == pytest.approx(math.sqrt((1 - est.value ** 2) / 10 ** 6))
    assert abs(est.value - CORR_PI_8) <= 4 * est.stderr


def test_correlation_mc_orthogonal_quadratures():
    w = lm.to_wigner(lm.rho0(), 2, 0.5)
    est = bell.correlation_mc(w, 0, math.pi / 2, seed=9, n=10 ** 6)
    assert abs(est.value) <= 4 * est.stderr


def test_correlation_mc_deterministic():
    w = lm.to_wigner(lm.rho0(), 2, 0.5)
    assert bell.correlation_mc(w, 0.2, 0.1, 3, 50_000) == bell.correlation_mc(w, 0.2, 0.1, 3, 50_000)


def test_correlation_mc_equals_sample_based_mean():
    w = lm.to_wigner(lm.rho_target(0.1, 0.5), 1.0, 0.5)
    x = ps.sample(w, 4, 100_000)
    ta, tb = 0.3, -0.2
    qa = math.cos(ta) * x[:, 0] + math.sin(ta) * x[:, 1]
    qb = math.cos(tb) * x[:, 2] + math.sin(tb) * x[:, 3]
    ref = np.mean(np.where(qa >= 0, 1, -1) * np.where(qb >= 0, 1, -1))
    assert bell.correlation_mc(w, ta, tb, 4, 100_000).value == ref


def test_correlation_mc_minimum_samples():
    w = lm.to_wigner(lm.rho0(), 2, 0.5)
    with pytest.raises(InvalidArgument):
        bell.correlation_mc(w, 0, 0, 1, 999)


def test_mc_agreement_rate():
    w = lm.to_wigner(lm.rho_target(0.1, 0.6), 1.2, 0.5)
    exact = bell.correlation_analytic(w, 0.3, -0.4).value
    hits = 0
    for seed in range(100):
        est = bell.correlation_mc(w, 0.3, -0.4, seed, 10 ** 5)
        hits += abs(est.value - exact) <= 4 * est.stderr
    assert hits >= 99


# --- CHSH

def test_chsh_transformed_examples():
    assert bell.chsh_transformed(OPTIMAL, 2.0) == pytest.approx(CHSH_OPTIMAL_2, abs=1e-14)
    for a in (0.5, 2.0):
        v = bell.chsh_transformed((0, 0, 0, 0), a)
        assert v == pytest.approx(2 * math.erf(a) ** 2, abs=1e-15)
        assert v <= 2
    assert bell.chsh_transformed(OPTIMAL, 30.0) == pytest.approx(2 * math.sqrt(2), abs=1e-14)


@settings(max_examples=100)
@given(st.tuples(*[st.floats(-4, 4)] * 4), st.floats(0.01, 5))
def test_chsh_transformed_is_signed_sum(s, a):
    t1, t2, p1, p2 = s
    ref = (bell.correlation_closed_form(t1, p1, a) + bell.correlation_closed_form(t1, p2, a)
           + bell.correlation_closed_form(t2, p1, a) - bell.correlation_closed_form(t2, p2, a))
    assert abs(bell.chsh_transformed(s, a) - ref) <= 1e-12


def test_chsh_from_mixtures_matches_closed_form(optimal_mixtures):
    assert abs(bell.chsh_from_mixtures(optimal_mixtures) - bell.chsh_transformed(OPTIMAL, 2.0)) <= 1e-12


def test_chsh_monotone_in_alpha():
    a = np.linspace(0.01, 5.0, 400)
    c = [bell.chsh_transformed(OPTIMAL, x) for x in a]
    assert np.all(np.diff(c) > 0)


def test_chsh_fixed_state_examples(w_rho0):
    pairs = [(0, 0), (0, math.pi / 2), (math.pi / 2, 0), (math.pi / 2, math.pi / 2)]
    assert bell.chsh_fixed_state(w_rho0, pairs) == pytest.approx(ERF2_SQ, abs=1e-14)
    for t in (0.0, 0.7):
        same = [(t, t)] * 4
        assert bell.chsh_fixed_state(w_rho0, same) == pytest.approx(
            2 * bell.correlation_analytic(w_rho0, t, t).value, abs=1e-15)
    with pytest.raises(InvalidArgument):
        bell.chsh_fixed_state(w_rho0, pairs[:3])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_chsh_fixed_state_bounded_on_any_mixture(seed):
    rng = np.random.default_rng(seed)
    k = rng.integers(1, 5)
    w = rng.random(k)
    comps = [ps.TwoModeComponent(wi, ps.coherent_mode(complex(*rng.normal(0, 2, 2)), rng.uniform(0.1, 1)),
                                 ps.coherent_mode(complex(*rng.normal(0, 2, 2)), rng.uniform(0.1, 1)))
             for wi in w]
    mix = ps.WignerMixture.build(comps)
    for _ in range(50):
        a1, a2, b1, b2 = rng.uniform(0, 2 * math.pi, 4)
        assert bell.chsh_fixed_state(mix, [(a1, b1), (a1, b2), (a2, b1), (a2, b2)]) <= 2 + 1e-9


# --- threshold and scan

def test_threshold():
    a = bell.threshold_alpha()
    assert abs(a - THRESHOLD) < 1e-9
    assert round(a, 4) == 0.9957
    assert abs(bell.chsh_transformed(OPTIMAL, a) - 2) <= 1e-8
    assert bell.chsh_transformed(OPTIMAL, a + 0.01) > 2
    # refining the bracket tolerance does not move the root beyond it
    assert abs(bell.threshold_alpha(xtol=1e-13) - a) < 1e-10


def test_scan_reaches_optimum():
    s, best = bell.scan_settings(2.0, 16)
    assert abs(best - CHSH_OPTIMAL_2) <= 1e-9
    assert abs(bell.chsh_transformed(s, 2.0) - best) <= 1e-12
    # equivalent to the optimal quadruple under cos(2 delta)
    d = [math.cos(2 * (s.thetas[i] - s.phis[j])) for i, j, _ in bell.CHSH_PAIRS]
    np.testing.assert_allclose(d, [math.sqrt(0.5)] * 3 + [-math.sqrt(0.5)], atol=1e-12)


def test_scan_below_threshold():
    for res in (8, 16):
        _, best = bell.scan_settings(0.5, res)
        assert best < 2
        assert best == pytest.approx(0.76627782397669514032, abs=1e-12)


def test_scan_refinement_stable():
    _, b16 = bell.scan_settings(1.3, 16)
    _, b32 = bell.scan_settings(1.3, 32)
    assert abs(b16 - b32) <= 1e-12


def test_scan_tie_break_is_lexicographic():
    s, _ = bell.scan_settings(2.0, 8)
    assert s.as_tuple() == (0.0, math.pi / 4, math.pi / 8, 7 * math.pi / 8)


def test_scan_resolution_check():
    with pytest.raises(InvalidArgument):
        bell.scan_settings(2.0, 7)


# --- hidden-variable identity check

def test_lhv_identity_check_optimal_settings():
    r = bell.lhv_identity_check(OPTIMAL, 2.0, 0.5, ps.GridSpec(-4, 4, 101))
    assert r.d12 <= 1e-12 and r.d21 <= 1e-12
    # attained at (2, 2); rho1 components add ~e^-16 corrections
    assert r.d22 == pytest.approx(SQRT2_OVER_4PI, abs=1e-7)
    assert r.contradiction()


def test_lhv_identity_check_grid_oracle(optimal_mixtures):
    # brute-force marginal evaluation, independent of the grid kernel
    w11, _, _, w22 = optimal_mixtures
    xs = np.linspace(-4, 4, 101)
    m11, m22 = ps.marginal_x(w11), ps.marginal_x(w22)
    best = max(abs(m11(a, b) - m22(a, b)) for a in xs for b in xs)
    r = bell.lhv_identity_check(OPTIMAL, 2.0, 0.5, ps.GridSpec(-4, 4, 101))
    assert r.d22 == pytest.approx(best, abs=1e-15)


def test_lhv_identity_check_degenerate():
    r = bell.lhv_identity_check((0.3, 0.3, 1.0, 1.0), 2.0, 0.5, ps.GridSpec(-4, 4, 41))
    assert (r.d12, r.d21, r.d22) == (0.0, 0.0, 0.0)
    assert not r.contradiction()
    r = bell.lhv_identity_check(OPTIMAL, 0.0, 0.5, ps.GridSpec(-4, 4, 41))
    assert max(r.d12, r.d21, r.d22) <= 1e-15


def test_lhv_identity_check_full_grid():
    r = bell.lhv_identity_check(OPTIMAL, 2.0, 0.5, ps.GridSpec(-4, 4, 9), full=True)
    assert r.d12 <= 1e-12 and r.d21 <= 1e-12
    # full density peak at (2, 0, 2, 0): coefficient gap times 1/pi^2
    assert r.d22 == pytest.approx(math.sqrt(2) / 4 / math.pi ** 2, rel=1e-6)


def test_transformed_mixtures_propagate_nondiagonal(monkeypatch):
    m = np.diag([0.5, 0, 0, 0.5]).astype(complex)
    m[0, 3] = m[3, 0] = 0.1
    monkeypatch.setattr(lm, "rho_target", lambda t, p: lm.LogicalState(m))
    with pytest.raises(NonDiagonalState):
        bell.lhv_identity_check(OPTIMAL, 2.0, 0.5, ps.GridSpec(-4, 4, 11))
