"""Continuous-time CuSum quickest-change-detection analytics.

Exact threshold design and performance formulas for the reflected
log-likelihood detector on Brownian observations, covertness-regime
classification for detection-aware drift schedules, adversarial damage
curves, and a deterministic Monte Carlo simulator that cross-validates
the closed forms.
"""

from .adversary import (
    Constant,
    DriftSchedule,
    PowerLaw,
    Regime,
    classify,
    damage,
    damage_argmax,
    gap_metric,
    is_covert,
    mu_at,
)
from .analytics import (
    DetectorDesign,
    add,
    asymptotic_n,
    at2fa,
    g_deriv,
    g_of_x,
    n_exact,
    solve_threshold,
    threshold_limit,
)
from .errors import (
    DomainError,
    RangeOverflowError,
    SimulationBudgetError,
    TableFormatError,
    TruncatedPathsError,
)
from .lambertw import lambert_w0, lambert_wm1, lambert_wm1_deriv, solve_u

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "lambert_w0",
    "lambert_wm1",
    "lambert_wm1_deriv",
    "solve_u",
    "DetectorDesign",
    "at2fa",
    "add",
    "solve_threshold",
    "g_of_x",
    "g_deriv",
    "n_exact",
    "asymptotic_n",
    "threshold_limit",
    "PowerLaw",
    "Constant",
    "DriftSchedule",
    "Regime",
    "mu_at",
    "classify",
    "is_covert",
    "gap_metric",
    "damage",
    "damage_argmax",
    "DomainError",
    "RangeOverflowError",
    "SimulationBudgetError",
    "TruncatedPathsError",
    "TableFormatError",
]
