"""Closed-form detector performance and threshold design."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctcusum import (
    Regime,
    add,
    asymptotic_n,
    at2fa,
    g_deriv,
    g_of_x,
    lambert_wm1,
    n_exact,
    solve_threshold,
    solve_u,
    threshold_limit,
)
from ctcusum.errors import DomainError, RangeOverflowError

from _oracles import (
    G_OF_1E6,
    G_OF_HALF,
    H_GAMMA1_MU1,
    H_GAMMA2_MU_1_32,
    N_GAMMA2_DELTA5,
    TWO_G_HALF,
    U_OF_1P5,
    bisect_threshold,
    kronecker,
)

GAMMA_GRID = [10.0 ** e for e in range(0, 13)]
MU_GRID = [10.0 ** e for e in range(-6, 1)]


class TestMeanStoppingTimes:
    def test_zero_threshold(self):
        assert at2fa(1.0, 0.0) == 0.0
        assert add(1.0, 0.0) == 0.0

    def test_spot_values(self):
        assert at2fa(1.0, 1.0) == pytest.approx(2.0 * (math.e - 2.0), rel=1e-14)
        assert at2fa(2.0, 1.0) == pytest.approx(0.5 * (math.e - 2.0), rel=1e-14)
        assert add(1.0, 1.0) == pytest.approx(2.0 / math.e, rel=1e-14)
        assert add(2.0, 1.0) == pytest.approx(0.5 / math.e, rel=1e-14)

    def test_monotone_in_threshold(self):
        hs = [0.01 * k for k in range(0, 300)]
        f = [at2fa(0.7, h) for h in hs]
        g = [add(0.7, h) for h in hs]
        assert all(b > a for a, b in zip(f, f[1:]))
        assert all(b > a for a, b in zip(g, g[1:]))

    def test_delay_below_false_alarm_time(self):
        for t in kronecker(200):
            h = 1e-3 + 20.0 * t
            assert add(1.3, h) < at2fa(1.3, h)

    def test_domain_errors(self):
        for mu, h in ((0.0, 1.0), (-1.0, 1.0), (1.0, -0.1), (1.0, math.nan)):
            with pytest.raises(DomainError):
                at2fa(mu, h)
            with pytest.raises(DomainError):
                add(mu, h)

    def test_overflow(self):
        with pytest.raises(RangeOverflowError):
            at2fa(1.0, 710.0)
        with pytest.raises(RangeOverflowError):
            at2fa(1e-200, 700.0)
        # the delay form never explodes with h
        assert math.isfinite(add(1.0, 700.0))

    def test_small_h_relative_accuracy(self):
        # series region: naive exp(h)-h-1 would lose most digits here
        h = 1e-6
        assert at2fa(1.0, h) == pytest.approx(h * h * (1.0 + h / 3.0), rel=1e-12)


class TestSolveThreshold:
    def test_reference_points(self):
        d = solve_threshold(1.0, 1.0)
        assert d.h == pytest.approx(H_GAMMA1_MU1, rel=1e-13)
        assert d.add == pytest.approx(TWO_G_HALF, rel=1e-12)
        d2 = solve_threshold(2.0, 1.0 / 32.0)
        assert d2.h == pytest.approx(H_GAMMA2_MU_1_32, rel=1e-12)
        assert d2.x == pytest.approx(1.0 / 1024.0, rel=0.0)

    def test_matches_bisection_oracle(self):
        for gamma in GAMMA_GRID:
            for mu in MU_GRID:
                d = solve_threshold(gamma, mu)
                assert abs(d.h - bisect_threshold(gamma, mu)) <= 1e-9

    def test_round_trip_grid(self):
        for gamma in GAMMA_GRID:
            for mu in MU_GRID:
                d = solve_threshold(gamma, mu)
                assert d.h > 0.0
                assert abs(d.at2fa - gamma) <= 1e-10 * gamma
                assert 0.0 < d.add < d.at2fa

    def test_small_gamma_threshold_vanishes(self):
        assert 0.0 < solve_threshold(1e-12, 1.0).h < 2e-6

    def test_fields_consistent(self):
        d = solve_threshold(7.0, 0.3)
        assert d.x == pytest.approx(0.5 * 7.0 * 0.09, rel=1e-15)
        assert d.at2fa == pytest.approx(at2fa(d.mu, d.h), rel=0.0)
        assert d.add == pytest.approx(add(d.mu, d.h), rel=0.0)

    def test_domain_errors(self):
        for gamma, mu in ((0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -2.0)):
            with pytest.raises(DomainError):
                solve_threshold(gamma, mu)


class TestDelayKernel:
    def test_endpoints(self):
        assert g_of_x(0.0) == 0.0
        assert g_of_x(0.5) == pytest.approx(G_OF_HALF, rel=1e-12)
        assert g_of_x(1e6) == pytest.approx(G_OF_1E6, rel=1e-12)

    def test_large_x_closed_form(self):
        u = solve_u(1.0 + 1e6)
        assert g_of_x(1e6) == pytest.approx(math.log(u) - 1.0 + 1.0 / u, rel=1e-10)

    def test_two_forms_agree(self):
        # literal composition via the lower Lambert branch, where it exists
        x = 1e-6
        while x <= 700.0:
            v = g_of_x(x)
            w = lambert_wm1(-math.exp(-1.0 - x))
            literal = math.exp(1.0 + x + w) - w - x - 2.0
            assert v == pytest.approx(literal, rel=1e-10, abs=1e-300)
            x *= 3.7

    def test_increasing_and_below_identity(self):
        xs = [math.exp(t * 14.0 - 7.0) for t in kronecker(300)]
        for x in xs:
            g = g_of_x(x)
            assert 0.0 < g < x
        ordered = sorted(xs)
        vals = [g_of_x(x) for x in ordered]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_deriv_reference(self):
        assert g_deriv(0.5) == pytest.approx(1.0 / U_OF_1P5, rel=1e-13)

    def test_deriv_limits_and_range(self):
        assert g_deriv(1e-12) == pytest.approx(1.0, abs=2e-6)
        prev = 1.0
        for k in range(1, 60):
            x = 1e-3 * (1.25 ** k)
            d = g_deriv(x)
            assert 0.0 < d < 1.0
            assert d < prev
            prev = d

    def test_deriv_finite_differences(self):
        x = 1e-3
        while x <= 100.0:
            fd = (g_of_x(x + 1e-6) - g_of_x(x - 1e-6)) / 2e-6
            assert g_deriv(x) == pytest.approx(fd, rel=1e-6)
            x *= 1.9

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            g_of_x(-1e-9)
        with pytest.raises(DomainError):
            g_deriv(0.0)


class TestExactDelay:
    def test_reference_points(self):
        assert n_exact(1.0, 1.0) == pytest.approx(TWO_G_HALF, rel=1e-12)
        assert n_exact(2.0, 2.0 ** -5) == pytest.approx(N_GAMMA2_DELTA5, rel=1e-12)

    def test_equals_design_delay(self):
        for gamma in GAMMA_GRID:
            for mu in MU_GRID:
                d = solve_threshold(gamma, mu)
                assert n_exact(gamma, mu) == pytest.approx(d.add, rel=1e-12)

    def test_ratio_to_gamma_approaches_one_from_below(self):
        prev = 0.0
        for mu in (1e-2, 1e-3, 1e-4, 1e-5):
            ratio = n_exact(10.0, mu) / 10.0
            assert prev < ratio < 1.0
            prev = ratio


class TestAsymptoticDelay:
    def test_three_cases(self):
        assert asymptotic_n(1e12, Regime.finite(1.0), 1e-6) == pytest.approx(
            TWO_G_HALF * 1e12, rel=1e-12
        )
        assert asymptotic_n(1e5, Regime.zero(), 1e-3) == 1e5
        mu = 1e12 ** -0.25
        expect = 2.0 * (1.0 - 0.5) * math.log(1e12) * 1e12 ** 0.5
        assert asymptotic_n(1e12, Regime.infinite(), mu) == pytest.approx(expect, rel=1e-12)

    def test_infinite_case_refuses_uninformative_inputs(self):
        with pytest.raises(DomainError):
            asymptotic_n(10.0, Regime.infinite(), 0.1)  # gamma*mu^2 = 0.1 <= 1

    def test_threshold_limits(self):
        assert threshold_limit(Regime.infinite()) == math.inf
        assert threshold_limit(Regime.finite(1.0)) == pytest.approx(
            U_OF_1P5 - 1.5, rel=1e-12
        )
        assert threshold_limit(Regime.zero()) == 0.0


class TestContinuityAcrossRegimes:
    def test_small_theta_matches_zero_regime(self):
        # (2/theta) G(theta/2) -> 1; deviation is ~0.943*sqrt(theta/2)
        theta = 1e-6
        val = 2.0 / theta * g_of_x(theta / 2.0)
        assert val == pytest.approx(1.0, abs=1e-3)
        expect = 1.0 - (2.0 * math.sqrt(2.0) / 3.0) * math.sqrt(theta / 2.0)
        assert val == pytest.approx(expect, abs=1e-6)

    def test_large_theta_matches_infinite_regime(self):
        # (2/theta) G(theta/2) ~ (2/theta) log(theta): ratio -> 1 slowly
        r3 = g_of_x(500.0) / math.log(1e3)
        r6 = g_of_x(5e5) / math.log(1e6)
        assert abs(r6 - 1.0) < abs(r3 - 1.0)
        assert r6 == pytest.approx(0.8774481096, rel=1e-6)
        assert r3 == pytest.approx(0.7572552572, rel=1e-6)

    def test_zero_regime_gap_value(self):
        mu = 1e5 ** -0.75
        n = n_exact(1e5, mu)
        assert 100.0 * abs(n - 1e5) / n == pytest.approx(3.79, abs=0.02)


@settings(max_examples=300, deadline=None)
@given(
    st.floats(min_value=-6.0, max_value=12.0),
    st.floats(min_value=-6.0, max_value=0.0),
)
def test_round_trip_property(log_gamma, log_mu):
    gamma, mu = 10.0 ** log_gamma, 10.0 ** log_mu
    d = solve_threshold(gamma, mu)
    assert d.h > 0.0
    assert abs(d.at2fa - gamma) <= 1e-10 * gamma


@settings(max_examples=300, deadline=None)
@given(
    st.floats(min_value=1e-6, max_value=10.0),
    st.floats(min_value=1e-9, max_value=30.0),
)
def test_ordering_property(mu, h):
    assert add(mu, h) < at2fa(mu, h)
