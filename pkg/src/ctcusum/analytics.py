"""Exact performance formulas for the continuous-time CuSum detector.

For a detector with threshold h watching a Brownian stream whose drift
changes from 0 to mu, the mean stopping times are available in closed
form:

    AT2FA(mu, h) = (2/mu^2) * (e^h  - h - 1)      (no change ever occurs)
    ADD(mu, h)   = (2/mu^2) * (e^-h + h - 1)      (change active from t=0)

``solve_threshold`` inverts the first identity: given a required mean
time to false alarm gamma it produces the unique h > 0 with
AT2FA(mu, h) = gamma.  With x = gamma*mu^2/2 and v solving
v - log1p(v) = x, the solution is simply h = log1p(v), and the resulting
worst-case delay is n = (2/mu^2) * G(x) where G(x) = v^2/(1+v) - x.
These shifted forms are exact algebra and keep full relative precision
for x anywhere from 1e-300 to 1e+300; the textbook expressions built
from W_{-1}(-e^{-1-x}) lose the answer to cancellation or underflow at
both ends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, RangeOverflowError
from .lambertw import _solve_v

__all__ = [
    "DetectorDesign",
    "at2fa",
    "add",
    "solve_threshold",
    "g_of_x",
    "g_deriv",
    "n_exact",
    "asymptotic_n",
    "threshold_limit",
]

# exp(h) overflows a double just above this; the explicit check turns a
# silent inf into a diagnosable error.
_H_MAX = 709.0


@dataclass(frozen=True)
class DetectorDesign:
    """A fully resolved operating point of the detector.

    gamma  -- required mean time to false alarm (time units)
    mu     -- post-change drift (1/sqrt(time))
    x      -- design exponent gamma*mu^2/2 (dimensionless)
    h      -- threshold in log-likelihood units, strictly positive
    at2fa  -- achieved mean time to false alarm (== gamma to ~1e-15)
    add    -- worst-case mean detection delay
    """

    gamma: float
    mu: float
    x: float
    h: float
    at2fa: float
    add: float


def _exp_gap(h: float) -> float:
    """e^h - h - 1 with full relative precision (series near 0)."""
    if abs(h) >= 0.5:
        return math.exp(h) - h - 1.0
    # sum_{k>=2} h^k / k!
    acc = 0.0
    term = h * h / 2.0
    k = 2
    while True:
        acc += term
        k += 1
        term *= h / k
        if abs(term) <= 1e-18 * abs(acc):
            return acc


def _require_positive(name: str, value: float) -> None:
    if not value > 0.0:
        raise DomainError(f"{name} must be positive, got {value!r}")


def _mu_squared(mu: float) -> float:
    m2 = mu * mu
    if m2 == 0.0 or math.isinf(m2):
        raise RangeOverflowError(f"mu^2 leaves the double range for mu={mu!r}")
    return m2


def at2fa(mu: float, h: float) -> float:
    """Mean time to false alarm (2/mu^2)(e^h - h - 1).

    Strictly increasing in h, zero at h = 0.  Raises RangeOverflowError
    once e^h (or the 2/mu^2 scaling) leaves the double range.
    """
    _require_positive("mu", mu)
    if h < 0.0 or math.isnan(h):
        raise DomainError(f"h must be nonnegative, got {h!r}")
    if h > _H_MAX:
        raise RangeOverflowError(f"at2fa overflows for h={h!r} (limit ~709)")
    out = 2.0 * _exp_gap(h) / (mu * mu)
    if math.isinf(out):
        raise RangeOverflowError(f"at2fa overflows for mu={mu!r}, h={h!r}")
    return out


def add(mu: float, h: float) -> float:
    """Worst-case mean detection delay (2/mu^2)(e^-h + h - 1)."""
    _require_positive("mu", mu)
    if h < 0.0 or math.isnan(h):
        raise DomainError(f"h must be nonnegative, got {h!r}")
    out = 2.0 * _exp_gap(-h) / (mu * mu)
    if math.isinf(out):
        raise RangeOverflowError(f"add overflows for mu={mu!r}, h={h!r}")
    return out


def solve_threshold(gamma: float, mu: float) -> DetectorDesign:
    """Design the detector: the unique h > 0 with AT2FA(mu, h) = gamma."""
    _require_positive("gamma", gamma)
    _require_positive("mu", mu)
    x = 0.5 * gamma * mu * mu
    v = _solve_v(x)
    h = math.log1p(v)
    return DetectorDesign(
        gamma=gamma,
        mu=mu,
        x=x,
        h=h,
        at2fa=at2fa(mu, h),
        add=add(mu, h),
    )


def g_of_x(x: float) -> float:
    """Delay kernel G(x) = v^2/(1+v) - x where v - log1p(v) = x.

    G(0) = 0, G is nonnegative, strictly increasing, and G(x) < x for
    x > 0.  The worst-case delay of a gamma-calibrated detector is
    (2/mu^2) * G(gamma*mu^2/2).
    """
    if math.isnan(x) or x < 0.0:
        raise DomainError(f"g_of_x: argument must be >= 0, got {x!r}")
    v = _solve_v(x)
    if x < 1.0:
        return v * v / (1.0 + v) - x
    # Same quantity via v - x = log1p(v); avoids the v^2 rounding at large x.
    return (math.log1p(v) - 1.0) + 1.0 / (1.0 + v)


def g_deriv(x: float) -> float:
    """dG/dx = 1/(1+v); lies in (0, 1), decreasing, -> 1 as x -> 0+."""
    if math.isnan(x) or x <= 0.0:
        raise DomainError(f"g_deriv: argument must be > 0, got {x!r}")
    return 1.0 / (1.0 + _solve_v(x))


def n_exact(gamma: float, mu: float) -> float:
    """Exact worst-case delay of the gamma-calibrated detector."""
    _require_positive("gamma", gamma)
    _require_positive("mu", mu)
    return 2.0 * g_of_x(0.5 * gamma * mu * mu) / (mu * mu)


def asymptotic_n(gamma: float, theta_regime, mu_at_gamma: float) -> float:
    """Leading-order delay for large gamma, by covertness regime.

    infinite: (2/mu^2) * log(gamma*mu^2)   [needs gamma*mu^2 > 1]
    finite:   (2/theta) * G(theta/2) * gamma
    zero:     gamma

    The infinite-regime expression is an asymptotic equivalence only; it
    is refused (DomainError) when the logarithm is not positive, where it
    carries no information.
    """
    _require_positive("gamma", gamma)
    kind = theta_regime.kind
    if kind == "infinite":
        _require_positive("mu_at_gamma", mu_at_gamma)
        q = gamma * mu_at_gamma * mu_at_gamma
        if q <= 1.0:
            raise DomainError(
                f"asymptotic_n: infinite-regime form needs gamma*mu^2 > 1, got {q!r}"
            )
        return 2.0 * math.log(q) / (mu_at_gamma * mu_at_gamma)
    if kind == "finite":
        theta = theta_regime.theta
        return 2.0 / theta * g_of_x(0.5 * theta) * gamma
    if kind == "zero":
        return gamma
    raise DomainError(f"asymptotic_n: unknown regime kind {kind!r}")


def threshold_limit(theta_regime) -> float:
    """Limit of the calibrated threshold h(gamma) as gamma grows.

    infinite: +inf.  finite(theta): log1p(v) with v - log1p(v) = theta/2.
    zero: 0 -- the design point collapses onto the branch point, where
    the threshold equation forces h down to zero.
    """
    kind = theta_regime.kind
    if kind == "infinite":
        return math.inf
    if kind == "finite":
        return math.log1p(_solve_v(0.5 * theta_regime.theta))
    if kind == "zero":
        return 0.0
    raise DomainError(f"threshold_limit: unknown regime kind {kind!r}")
