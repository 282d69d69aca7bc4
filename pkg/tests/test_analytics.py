"""Regime classification, predictions, closed forms, and fitting utilities."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyadgen.analytics import (
    DegreeStats,
    NoPowerLawError,
    Regime,
    avg_degree_curve,
    build_regime_report,
    ccdf_csv,
    degree_hist_csv,
    expected_in_degree,
    expected_in_degree_recursion,
    fit_avg_degree_growth,
    fit_tail_exponent,
    gamma_from_expected_curve,
    predicted_avg_degree,
    predicted_gamma,
    regime_classify,
    regime_report_csv,
)
from dyadgen.network import expected_edges_exact, sample_sequential
from dyadgen.params import ModelParams


# ---------------------------------------------------------------------------
# regimes and predictions
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "ti,to,regime",
    [
        (0.25, 0.25, Regime.CONSTANT),
        (0.5, 0.5, Regime.LOGARITHMIC),
        (0.6, 0.6, Regime.POLYNOMIAL),
        (0.0, 0.0, Regime.CONSTANT),
        (1.0, 0.0, Regime.LOGARITHMIC),
        (1.0, 1.0, Regime.POLYNOMIAL),
    ],
)
def test_regime_classification(ti, to, regime):
    assert regime_classify(ModelParams(1.0, 1.0, ti, to)) is regime


def test_regime_boundary_tolerance():
    p = ModelParams(1.0, 1.0, 0.5, 0.5 + 1e-13)
    assert regime_classify(p) is Regime.LOGARITHMIC


def test_predicted_avg_degree_values():
    law = predicted_avg_degree(ModelParams(1.0, 1.0, 0.25, 0.25))
    assert law.regime is Regime.CONSTANT and law.constant == pytest.approx(4.0)
    law = predicted_avg_degree(ModelParams(2.0, 1.0, 0.5, 0.5))
    assert law.regime is Regime.LOGARITHMIC and law.slope == pytest.approx(4.0)
    law = predicted_avg_degree(ModelParams(1.0, 1.0, 0.6, 0.6))
    assert law.regime is Regime.POLYNOMIAL and law.exponent == pytest.approx(0.2)
    assert "n^" in law.describe()


def test_predicted_gamma_values():
    assert predicted_gamma(ModelParams(1.0, 1.0, 0.5, 0.25)) == pytest.approx(3.0)
    assert predicted_gamma(ModelParams(1.0, 1.0, 0.6, 0.6)) == pytest.approx(3.5)
    both = predicted_gamma(ModelParams(1.0, 1.0, 0.4, 0.6))
    assert both == pytest.approx(3.5)


def test_predicted_gamma_error_cases():
    with pytest.raises(NoPowerLawError):
        predicted_gamma(ModelParams(1.0, 1.0, 0.0, 0.5))
    with pytest.raises(NoPowerLawError):
        predicted_gamma(ModelParams(1.0, 1.0, 0.5, 1.0))


@given(st.floats(0.02, 0.98))
@settings(max_examples=60, deadline=None)
def test_gamma_branches_agree_on_boundary(ti):
    p = ModelParams(1.0, 1.0, ti, 1.0 - ti)
    lo = (1.0 + p.theta_in) / p.theta_in
    hi = (2.0 - p.theta_out) / (1.0 - p.theta_out)
    assert abs(lo - hi) < 1e-12 * max(1.0, lo)
    assert predicted_gamma(p) == pytest.approx(lo)


# ---------------------------------------------------------------------------
# expected in-degree
# ---------------------------------------------------------------------------

def test_expected_in_degree_zero_at_birth():
    p = ModelParams(1.0, 1.0, 0.5, 0.25)
    assert expected_in_degree(50, 50, 3, p) == pytest.approx(0.0, abs=1e-12)
    assert expected_in_degree_recursion(50, 50, 3, p) == 0.0


def test_closed_form_matches_recursion_small_grid():
    worst = 0.0
    for alpha, beta in [(0.5, 0.0), (1.0, 1.0), (2.0, 3.0)]:
        for ti in (0.2, 0.5, 0.9):
            for dout in (0, 4):
                p = ModelParams(alpha, beta, ti, 0.3)
                for j, n in [(2, 40), (7, 200), (60, 900)]:
                    a = expected_in_degree(j, n, dout, p)
                    b = expected_in_degree_recursion(j, n, dout, p)
                    worst = max(worst, abs(a - b) / max(abs(b), 1e-30))
    assert worst < 1e-10


def test_theta_in_zero_uses_recursion_and_matches_harmonic_sum():
    p = ModelParams(1.0, 2.0, 0.0, 0.5)
    dout = 3
    j, n = 10, 500
    got = expected_in_degree(j, n, dout, p)
    forced = p.alpha + p.theta_out * dout
    direct = forced * sum(1.0 / (m + p.alpha + p.beta - 1) for m in range(j, n))
    assert got == pytest.approx(direct, rel=1e-12)


def test_expected_in_degree_overflow_reported():
    # n at the float ceiling overflows the log-gamma terms; the non-finite
    # result must surface as an error, not a silent zero/inf
    p = ModelParams(1.0, 1.0, 0.9, 0.0)
    with pytest.raises(ArithmeticError):
        expected_in_degree(2.0, 1e308, 0, p)


def test_expected_in_degree_preconditions():
    p = ModelParams(1.0, 1.0, 0.5, 0.0)
    with pytest.raises(ValueError):
        expected_in_degree(1, 10, 0, p)
    with pytest.raises(ValueError):
        expected_in_degree(11, 10, 0, p)
    with pytest.raises(ValueError):
        expected_in_degree(5, 10, -1, p)


# ---------------------------------------------------------------------------
# degree stats and tail fitting
# ---------------------------------------------------------------------------

def test_degree_stats_consistency():
    p = ModelParams(1.0, 1.0, 0.5, 0.25)
    net = sample_sequential(p, 2000, 13)
    stats = DegreeStats.from_network(net)
    assert stats.hist_counts.sum() == net.n
    assert stats.avg_degree == pytest.approx(2.0 * net.num_edges / net.n)
    assert np.all(np.diff(stats.ccdf) <= 1e-15)  # non-increasing
    for d, c in zip(stats.hist_degrees, stats.ccdf):
        assert c == pytest.approx(np.mean(stats.degrees >= d))
    assert degree_hist_csv(stats).startswith("degree,count\n")
    assert ccdf_csv(stats).startswith("degree,ccdf\n")


def pareto_discrete_sample(gamma, dmin, m, seed):
    """Inverse-CDF oracle: continuous Pareto on (dmin-0.5, inf) rounded
    to the nearest integer, the population the corrected MLE targets."""
    rng = np.random.default_rng(seed)
    u = rng.random(m)
    x = (dmin - 0.5) * (1.0 - u) ** (-1.0 / (gamma - 1.0))
    return np.floor(x + 0.5).astype(np.int64)


def test_tail_fit_recovers_synthetic_exponent():
    gamma = 3.0
    sample = pareto_discrete_sample(gamma, dmin=10, m=100_000, seed=1)
    fit = fit_tail_exponent(sample, dmin=10)
    assert fit.m == 100_000
    assert abs(fit.gamma - gamma) < 0.02
    assert fit.stderr == pytest.approx((fit.gamma - 1) / math.sqrt(fit.m))


def test_tail_fit_quantile_default():
    # the top-decile default puts dmin low here, where the continuity
    # correction is coarsest; this checks the mechanism, not precision
    sample = pareto_discrete_sample(2.5, dmin=1, m=50_000, seed=2)
    fit = fit_tail_exponent(sample)
    assert fit.dmin >= 1
    assert abs(fit.gamma - 2.5) < 0.15


def test_tail_fit_rejections():
    with pytest.raises(ValueError, match="100"):
        fit_tail_exponent(np.arange(1, 60), dmin=1)
    with pytest.raises(ValueError, match="degenerate"):
        fit_tail_exponent(np.full(500, 7), dmin=7)
    with pytest.raises(ValueError):
        fit_tail_exponent(np.array([]), dmin=None)


# ---------------------------------------------------------------------------
# growth curves
# ---------------------------------------------------------------------------

def test_avg_degree_curve_tiny():
    p = ModelParams(alpha=5.0, beta=0.0)
    curve = avg_degree_curve(p, [2], 3)
    (n, avg), = curve
    assert n == 2 and avg in (0.0, 1.0)


def test_avg_degree_curve_theta_zero_matches_exact():
    p = ModelParams(alpha=1.0, beta=1.0)
    cks = [100, 400, 1600]
    curves = [avg_degree_curve(p, cks, seed) for seed in range(40)]
    mean = np.mean([[a for _, a in c] for c in curves], axis=0)
    for ck, got in zip(cks, mean):
        want = 2.0 * expected_edges_exact(p, ck) / ck
        assert abs(got - want) < 0.15, (ck, got, want)


def test_avg_degree_curve_dorpa_prefix():
    p = ModelParams(1.0, 1.0, 0.3, 0.3)
    curve = avg_degree_curve(p, [50, 100, 200], 9, model="dorpa")
    from dyadgen.events import sample_dorpa_sequential

    for ck, avg in curve:
        net = sample_dorpa_sequential(p, ck, 9)
        assert avg == pytest.approx(net.avg_degree)


def test_avg_degree_curve_validation():
    p = ModelParams()
    with pytest.raises(ValueError):
        avg_degree_curve(p, [100, 100], 0)
    with pytest.raises(ValueError):
        avg_degree_curve(p, [100], 0, model="nope")


def test_fit_growth_shapes():
    log_curve = [(n, 2.0 * math.log(n) + 5.0) for n in (100, 1000, 10_000)]
    fit = fit_avg_degree_growth(log_curve, Regime.LOGARITHMIC)
    assert fit.value == pytest.approx(2.0)
    poly_curve = [(n, 2.0 * n**0.2) for n in (100, 1000, 10_000)]
    fit = fit_avg_degree_growth(poly_curve, Regime.POLYNOMIAL)
    assert fit.value == pytest.approx(1.2)  # slope of ln E = 1 + rho
    const_curve = [(n, 4.0) for n in (100, 1000)]
    fit = fit_avg_degree_growth(const_curve, Regime.CONSTANT)
    assert fit.value == pytest.approx(4.0)


# ---------------------------------------------------------------------------
# gamma self-consistency (single spot check; the full sweep is acceptance C11)
# ---------------------------------------------------------------------------

def test_gamma_from_curve_constant_regime_spot():
    p = ModelParams(1.0, 1.0, 0.5, 0.25)
    num = gamma_from_expected_curve(p)
    assert abs(num - 3.0) / 3.0 < 1e-6


def test_gamma_from_curve_rejects_zero_theta_in():
    with pytest.raises(NoPowerLawError):
        gamma_from_expected_curve(ModelParams(1.0, 1.0, 0.0, 0.5))


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------

def test_regime_report_constant():
    p = ModelParams(1.0, 1.0, 0.5, 0.25)
    net = sample_sequential(p, 3000, 21)
    report = build_regime_report(net)
    csv = regime_report_csv(report)
    assert csv.splitlines()[0] == "quantity,predicted,fitted,stderr"
    assert report.regime is Regime.CONSTANT
    quantities = [row[0] for row in report.rows]
    assert quantities[0] == "regime" and "gamma" in quantities


def test_regime_report_empty_network():
    p = ModelParams(alpha=1e-9)
    net = sample_sequential(p, 300, 1)
    assert net.num_edges == 0
    report = build_regime_report(net)
    gamma_row = [r for r in report.rows if r[0] == "gamma"][0]
    assert gamma_row[2] == ""  # no fit
    avg_row = [r for r in report.rows if r[0] == "avg_degree"][0]
    assert float(avg_row[2]) == 0.0
