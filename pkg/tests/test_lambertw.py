"""Lambert W branches and the log-domain solver."""

import math

import pytest
import scipy.special
from hypothesis import given, settings
from hypothesis import strategies as st

from ctcusum import lambert_w0, lambert_wm1, lambert_wm1_deriv, solve_u
from ctcusum.errors import DomainError

from _oracles import U_OF_1P5, U_OF_1E6, WM1_NEG_1E6, bisect_u, kronecker

BRANCH = -math.exp(-1.0)


def residual(w, z):
    return abs(w * math.exp(w) - z) / abs(z)


class TestPrincipalBranch:
    def test_fixed_points(self):
        assert lambert_w0(0.0) == 0.0
        assert abs(lambert_w0(math.e) - 1.0) < 1e-14
        assert lambert_w0(BRANCH) == -1.0

    def test_identity_quasirandom(self):
        # domain mix: near the branch point, moderate, and large arguments
        for t in kronecker(10_000):
            z = BRANCH + t * 3.0 if t < 0.5 else math.exp(40.0 * (t - 0.5)) - 0.5
            w = lambert_w0(z)
            assert w >= -1.0
            if z != 0.0:
                assert residual(w, z) <= 1e-12

    def test_against_scipy(self):
        for t in kronecker(500):
            z = BRANCH + t * 10.0
            ref = float(scipy.special.lambertw(z, 0).real)
            assert lambert_w0(z) == pytest.approx(ref, rel=1e-12, abs=1e-13)

    def test_domain_error_below_branch(self):
        with pytest.raises(DomainError):
            lambert_w0(-0.4)
        with pytest.raises(DomainError):
            lambert_w0(math.nan)

    def test_branch_point_clamp(self):
        z = BRANCH - 2.0 * math.ulp(BRANCH)
        assert lambert_w0(z) == -1.0


class TestLowerBranch:
    def test_fixed_points(self):
        assert lambert_wm1(BRANCH) == -1.0
        assert lambert_wm1(-2.0 * math.exp(-2.0)) == pytest.approx(-2.0, rel=1e-13)
        assert lambert_wm1(-1e-6) == pytest.approx(WM1_NEG_1E6, rel=1e-13)

    def test_identity_quasirandom(self):
        # log-spread over (-1/e, 0): z = -e^{-y}, y in [1, 600]
        for t in kronecker(10_000):
            z = -math.exp(-(1.0 + 599.0 * t))
            w = lambert_wm1(z)
            assert w <= -1.0
            assert residual(w, z) <= 1e-12

    def test_identity_near_branch(self):
        for t in kronecker(2_000):
            z = BRANCH * (1.0 - 1e-3 * t)
            assert residual(lambert_wm1(z), z) <= 1e-12

    def test_against_scipy(self):
        for t in kronecker(500):
            z = -math.exp(-(1.0 + 30.0 * t))
            ref = float(scipy.special.lambertw(z, -1).real)
            assert lambert_wm1(z) == pytest.approx(ref, rel=1e-12)

    def test_branch_ordering(self):
        for t in kronecker(300):
            z = BRANCH + t * (-BRANCH - 1e-9)
            if z >= 0.0:
                continue
            w0, wm1 = lambert_w0(z), lambert_wm1(z)
            assert w0 >= -1.0 >= wm1
            if z > BRANCH + 1e-6:
                assert w0 > -1.0 > wm1

    def test_small_z_asymptote_ratio_monotone(self):
        ratios = []
        for z in (-1e-8, -1e-12, -1e-16):
            approx = math.log(-z) - math.log(-math.log(-z))
            ratios.append(lambert_wm1(z) / approx)
        assert ratios[0] > ratios[1] > ratios[2] > 1.0
        assert abs(ratios[2] - 1.0) < abs(ratios[0] - 1.0)

    def test_domain_errors(self):
        for bad in (0.0, 1e-3, -0.4, math.nan):
            with pytest.raises(DomainError):
                lambert_wm1(bad)


class TestDerivative:
    def test_exact_point(self):
        # W(-2e^-2) = -2, so W' = (-2)/((-2e^-2)(1-2)) = -e^2
        z = -2.0 * math.exp(-2.0)
        assert lambert_wm1_deriv(z) == pytest.approx(-math.exp(2.0), rel=1e-12)

    def test_finite_differences(self):
        lo, hi = BRANCH + 1e-3, -1e-3
        for t in kronecker(60):
            z = lo + t * (hi - lo)
            fd = (lambert_wm1(z + 1e-6) - lambert_wm1(z - 1e-6)) / 2e-6
            assert lambert_wm1_deriv(z) == pytest.approx(fd, rel=1e-6)

    def test_diverges_at_branch_point(self):
        assert abs(lambert_wm1_deriv(BRANCH + 1e-12)) > 1e5

    def test_domain_errors(self):
        for bad in (0.0, 0.1, BRANCH, -1.0):
            with pytest.raises(DomainError):
                lambert_wm1_deriv(bad)


class TestSolveU:
    def test_fixed_point(self):
        assert solve_u(1.0) == 1.0

    def test_against_bisection(self):
        assert solve_u(1.5) == pytest.approx(bisect_u(1.5), rel=1e-12)
        assert solve_u(1.5) == pytest.approx(U_OF_1P5, rel=1e-13)
        for t in kronecker(200):
            y = 1.0 + 20.0 * t
            assert solve_u(y) == pytest.approx(bisect_u(y), rel=1e-12)

    def test_large_argument(self):
        u = solve_u(1e6)
        assert u == pytest.approx(U_OF_1E6, rel=1e-13)
        assert abs(u - math.log(u) - 1e6) <= 1e-12 * 1e6
        assert math.isfinite(solve_u(1e300))

    def test_residual_grid(self):
        for t in kronecker(2_000):
            y = 1.0 + (math.exp(12.0 * t) - 1.0)
            u = solve_u(y)
            assert u >= 1.0
            assert abs(u - math.log(u) - y) <= 1e-12 * max(1.0, y)

    def test_monotone(self):
        ys = [1.0 + (math.exp(10.0 * i / 400.0) - 1.0) * 1e-2 for i in range(400)]
        us = [solve_u(y) for y in ys]
        assert all(b >= a for a, b in zip(us, us[1:]))

    def test_consistency_with_lower_branch(self):
        # same quantity through two unrelated solution paths
        y = 1.0
        while y <= 700.0:
            assert abs(lambert_wm1(-math.exp(-y)) + solve_u(y)) <= 1e-10
            y += 7.0

    def test_beyond_underflow(self):
        # -e^{-y} underflows to 0 here; the log-domain route must not care
        for y in (750.0, 1e4, 1e8):
            u = solve_u(y)
            assert math.isfinite(u)
            assert abs(u - math.log(u) - y) <= 1e-12 * y

    def test_domain_error(self):
        with pytest.raises(DomainError):
            solve_u(0.9)
        with pytest.raises(DomainError):
            solve_u(math.nan)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=BRANCH, max_value=1e8, allow_nan=False))
def test_w0_identity_property(z):
    w = lambert_w0(z)
    assert w >= -1.0
    if abs(z) > 1e-300:
        assert residual(w, z) <= 1e-12


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=1.0, max_value=600.0))
def test_wm1_identity_property(y):
    z = -math.exp(-y)
    w = lambert_wm1(z)
    assert w <= -1.0
    assert residual(w, z) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1.0, max_value=1e9), st.floats(min_value=0.0, max_value=1.0))
def test_solve_u_monotone_property(y, frac):
    y2 = y * (1.0 + frac)
    assert solve_u(max(1.0, y2)) >= solve_u(y)
