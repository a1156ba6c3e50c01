"""Real-branch Lambert W evaluation and a log-domain companion solver.

Implements the two real branches of the inverse of w -> w*e^w:

* ``lambert_w0``   -- principal branch, defined on [-1/e, inf), W0 >= -1
* ``lambert_wm1``  -- lower branch, defined on [-1/e, 0), W-1 <= -1

plus ``solve_u``, which evaluates u = -W_{-1}(-e^{-y}) through the
equivalent equation u - log(u) = y.  The log-domain form matters: -e^{-y}
underflows to zero for y > ~745, while u remains a perfectly ordinary
double.  Threshold design for large run-length constraints lives entirely
in this regime.

Both branches use Halley iteration on f(w) = w*e^w - z with
branch-specific initializers; very close to the branch point z = -1/e the
defining equation is degenerate (f'(w) -> 0) and the series in
p = sqrt(2*(1 + e*z)) is used directly.
"""

from __future__ import annotations

import math

from .errors import DomainError

__all__ = ["lambert_w0", "lambert_wm1", "lambert_wm1_deriv", "solve_u"]

# Branch point of the real Lambert W: z = -1/e.
_BRANCH_POINT = -math.exp(-1.0)
# Arguments formed as -e^{-1-x} can round marginally below -1/e; accept a
# 4-ulp excursion and clamp, reject anything further out.
_BRANCH_TOL = 4.0 * math.ulp(_BRANCH_POINT)

_EPS = 2.220446049250313e-16


def _branch_series(p: float) -> float:
    """Series for W about the branch point, p = +/- sqrt(2*(1 + e*z)).

    Positive p gives W0, negative p gives W-1.  Error is O(p^5).
    """
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))))


def _halley(w: float, z: float) -> float:
    """Halley refinement of w*e^w = z from a nearby initial guess."""
    for _ in range(50):
        ew = math.exp(w)
        f = w * ew - z
        if abs(f) <= 4.0 * _EPS * abs(z):
            break
        w1 = w + 1.0
        step = f / (ew * w1 - (w + 2.0) * f / (2.0 * w1))
        w -= step
        if abs(step) <= _EPS * (1.0 + abs(w)):
            break
    return w


def _offset_from_branch(z: float) -> float:
    """Return 2*(1 + e*z) clamped to >= 0 within the branch-point tolerance."""
    s = 1.0 + math.e * z
    if s < 0.0:
        # Genuine domain violations were rejected by the caller; what is
        # left is rounding noise from forming z near -1/e.
        s = 0.0
    return 2.0 * s


def lambert_w0(z: float) -> float:
    """Principal branch W0(z) for z >= -1/e.

    Returns w >= -1 with w*e^w = z to near machine precision.
    Raises DomainError for z below the branch point (beyond a 4-ulp clamp).
    """
    if math.isnan(z):
        raise DomainError("lambert_w0: argument is NaN")
    if z < _BRANCH_POINT - _BRANCH_TOL:
        raise DomainError(f"lambert_w0: argument {z!r} below branch point -1/e")
    if z == 0.0:
        return 0.0
    if z <= _BRANCH_POINT:
        return -1.0
    if z < -0.3:
        p = math.sqrt(_offset_from_branch(z))
        w = _branch_series(p)
        if p < 1e-4:
            # Halley is ill-conditioned here (f' ~ p); the series is already
            # accurate to O(p^4) absolute.
            return w
    elif z <= 0.5:
        w = z / (1.0 + z)
    elif z <= 6.0:
        w = 0.75 * math.log1p(z)
    else:
        l1 = math.log(z)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1
    return _halley(w, z)


def lambert_wm1(z: float) -> float:
    """Lower branch W-1(z) for -1/e <= z < 0.

    Returns w <= -1 with w*e^w = z to near machine precision.
    Raises DomainError for z >= 0 or z below the branch point.
    """
    if math.isnan(z):
        raise DomainError("lambert_wm1: argument is NaN")
    if z >= 0.0:
        raise DomainError(f"lambert_wm1: argument {z!r} not in [-1/e, 0)")
    if z < _BRANCH_POINT - _BRANCH_TOL:
        raise DomainError(f"lambert_wm1: argument {z!r} below branch point -1/e")
    if z <= _BRANCH_POINT:
        return -1.0
    if z > -0.3:
        # Toward 0- the branch behaves like log(-z) - log(-log(-z)).
        l1 = math.log(-z)
        w = l1 - math.log(-l1)
    else:
        p = math.sqrt(_offset_from_branch(z))
        w = _branch_series(-p)
        if p < 1e-4:
            return w
    return _halley(w, z)


def lambert_wm1_deriv(z: float) -> float:
    """Derivative of the lower branch: W'(z) = W/(z*(1 + W)).

    Defined strictly inside (-1/e, 0); the derivative diverges at the
    branch point, so z <= -1/e is rejected outright.
    """
    if math.isnan(z):
        raise DomainError("lambert_wm1_deriv: argument is NaN")
    if z >= 0.0 or z <= _BRANCH_POINT:
        raise DomainError(
            f"lambert_wm1_deriv: argument {z!r} not strictly inside (-1/e, 0)"
        )
    w = lambert_wm1(z)
    return w / (z * (1.0 + w))


def _v_minus_log1p(v: float) -> float:
    """v - log1p(v) to full relative precision for v >= 0.

    Direct subtraction loses everything for small v, where the true value
    is ~v^2/2; sum the alternating series instead.
    """
    if v > 0.25:
        return v - math.log1p(v)
    # v - log1p(v) = v^2/2 - v^3/3 + v^4/4 - ...
    acc = 0.0
    term = v * v
    k = 2
    while True:
        contrib = term / k
        acc += contrib if k % 2 == 0 else -contrib
        if contrib <= _EPS * acc:
            return acc
        term *= v
        k += 1


def _solve_v(t: float) -> float:
    """Solve v - log1p(v) = t for v >= 0 (the shifted form of solve_u).

    Working in v = u - 1 preserves full relative accuracy of both v and
    log1p(v) = v - t across t from 0 to huge, which the callers need.
    """
    if t <= 0.0:
        return 0.0
    if t < 1.0:
        # Branch-point series: with p = sqrt(-2*expm1(-t)),
        # v = p + p^2/3 + (11/72) p^3 + O(p^4).
        p = math.sqrt(-2.0 * math.expm1(-t))
        v = p * (1.0 + p * (1.0 / 3.0 + p * (11.0 / 72.0)))
    else:
        v = t + math.log1p(t)
    for _ in range(60):
        g = _v_minus_log1p(v) - t
        # Newton step for g(v) = v - log1p(v) - t, g'(v) = v/(1+v).
        step = g * (1.0 + v) / v
        v -= step
        if v <= 0.0:
            v = 1e-300
        if abs(step) <= 4.0 * _EPS * v:
            break
    return v


def solve_u(y: float) -> float:
    """Solve u - log(u) = y on u >= 1; equals -W_{-1}(-e^{-y}).

    Accepts y >= 1 (up to rounding slack) and never forms the exponential,
    so arbitrarily large y is fine.  solve_u(1) == 1 exactly.
    """
    if math.isnan(y):
        raise DomainError("solve_u: argument is NaN")
    if y < 1.0 - 1e-12 * max(1.0, abs(y)):
        raise DomainError(f"solve_u: argument {y!r} below 1")
    if y <= 1.0:
        return 1.0
    return 1.0 + _solve_v(y - 1.0)
