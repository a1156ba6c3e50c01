"""Drift schedules for a detection-aware adversary and their regimes.

An adversary that knows the detector's false-alarm budget gamma can scale
its post-change drift down as gamma grows, mu = mu(gamma).  What matters
is the limit of gamma*mu(gamma)^2: infinite limits leave the detector
effective, a finite limit theta pins the delay at a constant fraction of
gamma, and a zero limit makes the delay indistinguishable from the
false-alarm budget itself.  The last two are the covert regimes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .analytics import n_exact
from .errors import DomainError

__all__ = [
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
]


@dataclass(frozen=True)
class PowerLaw:
    """mu(gamma) = c * gamma^(-delta), c > 0, delta >= 0."""

    c: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        if not self.c > 0.0:
            raise DomainError(f"PowerLaw: c must be positive, got {self.c!r}")
        if not self.delta >= 0.0:
            raise DomainError(f"PowerLaw: delta must be >= 0, got {self.delta!r}")


@dataclass(frozen=True)
class Constant:
    """mu(gamma) = mu0 regardless of gamma."""

    mu0: float

    def __post_init__(self):
        if not self.mu0 > 0.0:
            raise DomainError(f"Constant: mu0 must be positive, got {self.mu0!r}")


DriftSchedule = Union[PowerLaw, Constant]


@dataclass(frozen=True)
class Regime:
    """Limit class of gamma*mu(gamma)^2: 'infinite', 'finite' (with theta),
    or 'zero'."""

    kind: str
    theta: float | None = None

    def __post_init__(self):
        if self.kind not in ("infinite", "finite", "zero"):
            raise DomainError(f"Regime: unknown kind {self.kind!r}")
        if self.kind == "finite":
            if self.theta is None or not self.theta > 0.0:
                raise DomainError(
                    f"Regime: finite regime needs theta > 0, got {self.theta!r}"
                )
        elif self.theta is not None:
            raise DomainError(f"Regime: kind {self.kind!r} carries no theta")

    @classmethod
    def infinite(cls) -> "Regime":
        return cls("infinite")

    @classmethod
    def finite(cls, theta: float) -> "Regime":
        return cls("finite", theta)

    @classmethod
    def zero(cls) -> "Regime":
        return cls("zero")


def mu_at(schedule: DriftSchedule, gamma: float) -> float:
    """Evaluate the schedule's drift at a given gamma."""
    if not gamma > 0.0:
        raise DomainError(f"mu_at: gamma must be positive, got {gamma!r}")
    if isinstance(schedule, PowerLaw):
        return schedule.c * gamma ** (-schedule.delta)
    if isinstance(schedule, Constant):
        return schedule.mu0
    raise DomainError(f"mu_at: unsupported schedule {schedule!r}")


def classify(schedule: DriftSchedule) -> Regime:
    """Regime of gamma*mu(gamma)^2 for the parametric families.

    Power law: gamma*mu^2 = c^2 * gamma^(1-2*delta), so the split is at
    delta = 1/2 with theta = c^2 on the boundary.  A constant drift always
    lands in the infinite regime.
    """
    if isinstance(schedule, Constant):
        return Regime.infinite()
    if isinstance(schedule, PowerLaw):
        if schedule.delta < 0.5:
            return Regime.infinite()
        if schedule.delta == 0.5:
            return Regime.finite(schedule.c * schedule.c)
        return Regime.zero()
    raise DomainError(f"classify: unsupported schedule {schedule!r}")


def is_covert(schedule: DriftSchedule) -> bool:
    """True when the delay stays of the same order as the false-alarm
    budget, i.e. the finite and zero regimes."""
    return classify(schedule).kind in ("finite", "zero")


def gap_metric(gamma: float, schedule: DriftSchedule) -> float:
    """Relative gap M(gamma) = 100 * |n(gamma) - gamma| / n(gamma), percent."""
    n = n_exact(gamma, mu_at(schedule, gamma))
    return 100.0 * abs(n - gamma) / n


def damage(gamma: float, schedule: DriftSchedule) -> float:
    """Adversarial damage mu(gamma) * n(gamma): drift magnitude integrated
    over the expected undetected period.  Uses the exact delay."""
    mu = mu_at(schedule, gamma)
    return mu * n_exact(gamma, mu)


def damage_argmax(gamma: float, delta_grid) -> float:
    """Grid delta maximizing damage(gamma, PowerLaw(1, delta)).

    Ties break toward the smaller delta.  The grid must be nonempty with
    values in [0, 1].
    """
    grid = list(delta_grid)
    if not grid:
        raise DomainError("damage_argmax: empty delta grid")
    best_delta = None
    best = float("-inf")
    for delta in sorted(grid):
        if not 0.0 <= delta <= 1.0:
            raise DomainError(f"damage_argmax: delta {delta!r} outside [0, 1]")
        d = damage(gamma, PowerLaw(1.0, delta))
        if d > best:
            best = d
            best_delta = delta
    return best_delta
