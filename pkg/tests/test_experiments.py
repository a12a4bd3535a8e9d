import math

import numpy as np
import pytest

from robinpeaks import experiments as ex
from robinpeaks.geometry import CrossSection, PeakGeometry


def test_fit_exact_power_law():
    alphas = ex.default_alpha_ladder()
    sweep = ex.synthetic_sweep(alphas, -3.0 * alphas**4, q=1.5)
    fit = ex.fit_power_law(sweep, 1)
    assert fit.slope_raw == pytest.approx(4.0, abs=1e-9)
    assert fit.coeff_raw == pytest.approx(3.0, abs=1e-9)
    assert fit.slope_extrapolated == pytest.approx(4.0, abs=1e-7)
    assert fit.coeff_extrapolated == pytest.approx(3.0, abs=1e-7)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_fit_with_subleading_term():
    alphas = np.logspace(math.log10(4.0), math.log10(32.0), 8)
    sweep = ex.synthetic_sweep(alphas, -3.0 * alphas**4 + alphas**3.5, q=1.5)
    fit = ex.fit_power_law(sweep, 1)
    gaps = [abs(s - 4.0) for s in fit.slopes_local]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))  # approach the true slope
    assert abs(fit.slope_extrapolated - 4.0) / 4.0 < 0.01
    assert abs(fit.coeff_extrapolated - 3.0) / 3.0 < 0.01


def test_fit_validation():
    alphas = ex.default_alpha_ladder()
    sweep = ex.synthetic_sweep(alphas, -3.0 * alphas**4, q=1.5)
    with pytest.raises(ValueError):
        ex.fit_power_law(sweep, 1, window=(0, 1))
    mixed = ex.synthetic_sweep(alphas, 3.0 * alphas**2 - 40.0, q=1.5)
    with pytest.raises(ValueError):
        ex.fit_power_law(mixed, 1)


def test_theory_coefficient_attached():
    alphas = ex.default_alpha_ladder()
    sweep = ex.synthetic_sweep(alphas, -3.0 * alphas**4, q=1.5)
    fit = ex.fit_power_law(sweep, 1, lambda_L1_value=-2.6)
    assert fit.theory_coeff == pytest.approx(2.0**4 * 2.6)


def test_plan_peak_mesh_budget_and_scales():
    plan = ex.plan_peak_mesh(1.5, 1.0, 1.0, 16.0)
    c = ex.localization_scale(1.5, 1.0, 16.0)
    assert plan["s_min"] <= min(1e-3, 0.1 / 16.0)
    assert plan["s_min"] < 1e-4 * c
    assert plan["ns"] * (plan["nt"] + 1) <= 200_000
    small = ex.plan_peak_mesh(1.5, 1.0, 1.0, 16.0, budget=30_000)
    assert small["ns"] * (small["nt"] + 1) <= 30_000
    with pytest.raises(ValueError):
        ex.plan_peak_mesh(1.5, 1.0, 1.0, 16.0, budget=100)


def test_sweep_smoke_and_monotonicity():
    geom = PeakGeometry(q=1.5, d=2, cross_section=CrossSection.interval(1.0), a=1.0)
    sweep = ex.sweep_alpha(geom, [2.0, 3.0], j_count=1, mesh_budget=12_000,
                           retain_vectors=True, seed=0)
    lam = sweep.eigenvalue_track(1)
    assert lam[1] < lam[0] < 0.0
    for p in sweep.points:
        assert p.certificate["verified"]
        assert p.sensitivity < 1e-3 and not p.flagged
        assert not p.sign_flagged  # ground state has a sign
    # the cusp beats the Lipschitz bound: lambda_1 / alpha^2 diverges
    scaled = lam / sweep.alphas**2
    assert scaled[1] < scaled[0]
    assert lam[-1] <= -0.95 * sweep.alphas[-1] ** 2
    d = sweep.as_dict()
    assert d["points"][0]["alpha"] == 2.0


def test_sweep_thread_override_matches_serial():
    geom = PeakGeometry(q=1.5, d=2, cross_section=CrossSection.interval(1.0), a=1.0)
    serial = ex.sweep_alpha(geom, [2.0, 3.0], mesh_budget=8_000, threads=1)
    threaded = ex.sweep_alpha(geom, [2.0, 3.0], mesh_budget=8_000, threads=2)
    assert serial.eigenvalue_track(1).tolist() == \
        threaded.eigenvalue_track(1).tolist()


def test_sweep_validation():
    geom = PeakGeometry(q=1.5, d=2, cross_section=CrossSection.interval(1.0), a=1.0)
    with pytest.raises(ValueError):
        ex.sweep_alpha(geom, [2.0, 2.0])
    with pytest.raises(ValueError):
        ex.sweep_alpha(geom, [-1.0, 2.0])
    with pytest.raises(ValueError):
        ex.sweep_alpha(geom, [2.0, 3.0], j_count=0)
    ball = PeakGeometry(q=1.5, d=3, cross_section=CrossSection.ball(1.0, 2), a=1.0)
    with pytest.raises(ValueError):
        ex.sweep_alpha(ball, [2.0, 3.0])


@pytest.fixture(scope="module")
def small_sweep():
    geom = PeakGeometry(q=1.5, d=2, cross_section=CrossSection.interval(1.0), a=1.0)
    return ex.sweep_alpha(geom, [2.0, 3.0, 4.5, 6.75], j_count=1,
                          mesh_budget=12_000, retain_vectors=True, seed=0)


def test_agmon_unit_weight_and_monotonicity(small_sweep):
    rep0 = ex.agmon_ratio(small_sweep, 0.0)
    assert all(r == 1.0 for r in rep0.ratios)
    prev = rep0.ratios
    for b in (0.05, 0.1, 0.2):
        rep = ex.agmon_ratio(small_sweep, b)
        assert all(r >= 1.0 for r in rep.ratios)
        assert all(hi >= lo for lo, hi in zip(prev, rep.ratios))
        prev = rep.ratios
        assert not rep.flagged_growth


def test_agmon_refinement_consistency(small_sweep):
    rep = ex.agmon_ratio(small_sweep, 0.1)
    for coarse, fine in zip(rep.ratios_coarse, rep.ratios):
        assert abs(fine - coarse) < 1e-3 * fine


def test_agmon_errors(small_sweep):
    with pytest.raises(ValueError):
        ex.agmon_ratio(small_sweep, -0.1)
    with pytest.raises(ValueError):
        ex.agmon_ratio(small_sweep, 1e4)
    bare = ex.synthetic_sweep([2.0, 3.0, 4.0], [-1.0, -2.0, -3.0])
    with pytest.raises(ValueError):
        ex.agmon_ratio(bare, 0.1)


def test_pullback_constant_boundary_only():
    trivial = np.zeros((5, 5))
    trivial[0, 0] = 1.0
    res = ex.pullback_check(1.5, 0.5, trial=trivial)
    assert res.boundary_ok
    assert not res.gradient_ok  # gradient of a constant vanishes identically
    assert res.margins["gradient_lower"] == pytest.approx(0.0, abs=1e-12)


def test_pullback_linear_trial():
    linear = np.zeros((5, 5))
    linear[1, 0] = 1.0  # u = s, i.e. v = x1 with unit gradient
    res = ex.pullback_check(1.5, 0.5, trial=linear)
    assert res.boundary_ok and res.gradient_ok
    assert min(res.margins.values()) > 1e-8


def test_pullback_random_campaign():
    count = 0
    for seed in range(3):
        for q in (1.2, 1.5):
            for eps in (0.1, 0.5):
                res = ex.pullback_check(q, eps, seed=seed)
                count += res.boundary_ok and res.gradient_ok
                assert res.quad_error < 1e-8 * max(
                    1.0, max(abs(v) for v in res.values.values()))
    assert count == 12


def test_pullback_validation():
    with pytest.raises(ValueError):
        ex.pullback_check(1.5, 0.5, s_interval=(0.0, 1.0))


def test_window_two_point_halving():
    res = ex.neumann_window(1.5, [0.2, 0.1], ns=96, nt=8)
    assert all(l < 0.0 for l in res.lambda1)
    ratio = res.lambda1[1] / res.lambda1[0]
    assert 1.5 <= ratio <= 2.5
    assert res.spread <= 3.0


def test_window_hypothesis_validation():
    with pytest.raises(ValueError):
        ex.neumann_window(1.5, [2.0], window=(1.0, 2.0))
    with pytest.raises(ValueError):
        ex.neumann_window(1.5, [0.1], window=(-1.0, 2.0))


def test_isoperimetric_compare():
    disk = CrossSection.ball(1.0 / math.sqrt(math.pi), 2)
    square = CrossSection.polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
    rep = ex.isoperimetric_compare([disk, square], 1.5, 1, -2.6)
    assert rep.ball_is_least_negative
    assert rep.coefficients[1] <= rep.coefficients[0] < 0.0
    single = ex.isoperimetric_compare([square], 1.5, 1, -2.6)
    assert single.ball_is_least_negative  # vacuous without a ball
    rng = np.random.default_rng(5)
    angles = np.sort(rng.uniform(0, 2 * np.pi, 5))
    pts = np.column_stack([np.cos(angles), np.sin(angles)])
    pent = CrossSection.polygon(pts)
    pent = pent.scaled(1.0 / math.sqrt(pent.area))
    rep = ex.isoperimetric_compare(
        [pent, CrossSection.ball(1.0 / math.sqrt(math.pi), 2)], 1.5, 1, -2.6)
    assert rep.ball_is_least_negative
    with pytest.raises(ValueError):
        ex.isoperimetric_compare([disk, CrossSection.interval(2.0)], 1.5, 1, -2.6)
    with pytest.raises(ValueError):
        ex.isoperimetric_compare([disk], 1.5, 1, 0.5)
