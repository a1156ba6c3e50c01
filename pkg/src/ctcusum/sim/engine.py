"""Simulation engine: configs, path runner, estimator, design validation.

Determinism contract
--------------------
Path ``i`` of a run draws exclusively from the substream
``PCG64(SeedSequence(entropy=seed, spawn_key=(i,)))``, consuming one block
of standard normals followed by one block of uniforms (uniforms only when
the between-grid crossing test is enabled) per BLOCK_STEPS steps.  Results
are therefore a pure function of (seed, path index) and do not depend on
scheduling; the estimator reduces the per-path stopping times with exact
(compensated) summation in a fixed order, so estimates are bit-identical
across repeat runs and across any degree of thread parallelism.

The two kernel backends implement the same recursion and the same draw
consumption, so they agree path for path up to floating-point rounding;
they are statistically interchangeable but not guaranteed bit-identical
to each other.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..analytics import add as _add_formula
from ..analytics import at2fa as _at2fa_formula
from ..analytics import DetectorDesign, solve_threshold
from ..errors import DomainError, SimulationBudgetError, TruncatedPathsError
from . import load_backend

__all__ = [
    "Mode",
    "SimConfig",
    "SimEstimate",
    "StudyLevel",
    "DesignCheck",
    "step_increment",
    "run_path",
    "estimate",
    "validate_design",
    "convergence_study",
    "default_step",
    "default_horizon",
    "make_config",
]

# Draws generated per path per block.  Part of the algorithm definition:
# changing it changes which draws each step consumes.
BLOCK_STEPS = 4096
# The coupled-refinement study needs a block divisible by every step factor.
STUDY_BLOCK_STEPS = 4000

_DUMMY_UNIFORMS = np.zeros(1)


class Mode(Enum):
    """Which drift drives the observations: none yet, or active from t=0."""

    PRE_CHANGE = "pre"
    POST_CHANGE = "post"

    @property
    def drift_sign(self) -> float:
        return -1.0 if self is Mode.PRE_CHANGE else 1.0


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo controls for one estimation run."""

    mu: float
    h: float
    step: float
    paths: int
    seed: int
    horizon: float
    bridge_correction: bool = True
    mode: Mode = Mode.POST_CHANGE

    def __post_init__(self):
        if not self.mu > 0.0:
            raise DomainError(f"SimConfig: mu must be positive, got {self.mu!r}")
        if not self.h > 0.0:
            raise DomainError(f"SimConfig: h must be positive, got {self.h!r}")
        if not self.step > 0.0:
            raise DomainError(f"SimConfig: step must be positive, got {self.step!r}")
        if not self.horizon >= self.step:
            raise DomainError("SimConfig: horizon must be at least one step")
        if self.paths < 1:
            raise DomainError(f"SimConfig: paths must be >= 1, got {self.paths!r}")
        if self.seed < 0:
            raise DomainError(f"SimConfig: seed must be a nonnegative int, got {self.seed!r}")


@dataclass(frozen=True)
class SimEstimate:
    """Aggregated result: mean stopping time and its standard error.

    When any path hit the horizon the mean is not a valid estimate of the
    stopping-time expectation; mean and stderr are NaN and ``truncated``
    carries the count.
    """

    mean: float
    stderr: float
    paths_used: int
    truncated: int


def default_step(mu: float, h: float) -> float:
    """Default grid step: 1e-3 of the crossing time scale min(1, h^2)/mu^2."""
    return 1e-3 * min(1.0, h * h) / (mu * mu)


def default_horizon(mu: float, h: float) -> float:
    """Default truncation time: 50x the larger analytic mean."""
    return 50.0 * max(_at2fa_formula(mu, h), _add_formula(mu, h))


def make_config(
    mode: Mode | str,
    mu: float,
    h: float,
    *,
    step: float | None = None,
    paths: int = 100_000,
    seed: int = 0,
    horizon: float | None = None,
    bridge: bool = True,
) -> SimConfig:
    """SimConfig with the default step/horizon rules filled in."""
    mode = Mode(mode) if not isinstance(mode, Mode) else mode
    if step is None:
        step = default_step(mu, h)
    if horizon is None:
        horizon = default_horizon(mu, h)
    return SimConfig(
        mu=mu, h=h, step=step, paths=paths, seed=seed,
        horizon=horizon, bridge_correction=bridge, mode=mode,
    )


def step_increment(mode: Mode, mu: float, step: float, gaussian: float) -> float:
    """One increment of the accumulated log-likelihood over a grid step.

    The mean is -mu^2*step/2 before the change and +mu^2*step/2 after;
    the noise is mu*sqrt(step) times the standard normal draw.
    """
    return mode.drift_sign * 0.5 * mu * mu * step + mu * math.sqrt(step) * gaussian


def _substream(seed: int, key: tuple) -> np.random.Generator:
    """The fixed splitting rule: one generator per (seed, key)."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=key))
    )


def _max_steps(config: SimConfig) -> int:
    return max(1, int(math.ceil(config.horizon / config.step)))


def _run_single(kernel, rng, sign, mu, h, dt, bridge, max_steps, block):
    """One path to threshold crossing or horizon; returns (time, truncated)."""
    drift = sign * 0.5 * mu * mu * dt
    vol = mu * math.sqrt(dt)
    bridge_scale = 2.0 / (mu * mu * dt)
    y = 0.0
    done = 0
    while done < max_steps:
        limit = min(block, max_steps - done)
        gauss = rng.standard_normal(block)
        unif = rng.random(block) if bridge else _DUMMY_UNIFORMS
        event, idx, y = kernel.run_block(
            y, h, drift, vol, bridge_scale, bridge, gauss, unif, limit
        )
        if event == 1:
            # First grid point at or above the threshold.
            return dt * (done + idx + 1), False
        if event == 2:
            # Between-grid crossing, attributed to the step midpoint.
            return dt * (done + idx) + 0.5 * dt, False
        done += limit
    return math.nan, True


def run_path(config: SimConfig, path_index: int, *, backend: str | None = None):
    """Stopping time of one path, or None if it ran into the horizon."""
    if path_index < 0:
        raise DomainError(f"path_index must be >= 0, got {path_index!r}")
    kernel = load_backend(backend)
    rng = _substream(config.seed, (path_index,))
    t, truncated = _run_single(
        kernel, rng, config.mode.drift_sign, config.mu, config.h,
        config.step, config.bridge_correction, _max_steps(config), BLOCK_STEPS,
    )
    return None if truncated else t


def _reduce(times: np.ndarray, truncated: int, strict: bool) -> SimEstimate:
    n = len(times)
    if truncated:
        if strict:
            raise TruncatedPathsError(f"{truncated} of {n} paths hit the horizon")
        return SimEstimate(math.nan, math.nan, n, truncated)
    # fsum is exactly rounded, hence independent of summation order.
    mean = math.fsum(times) / n
    if n > 1:
        var = math.fsum((t - mean) ** 2 for t in times) / (n * (n - 1))
        stderr = math.sqrt(var)
    else:
        stderr = 0.0
    return SimEstimate(mean, stderr, n, 0)


def _dispatch(paths: int, threads: int, work) -> None:
    """Run work(lo, hi) over a partition of range(paths)."""
    if threads <= 1:
        work(0, paths)
        return
    chunk = (paths + threads - 1) // threads
    spans = [(lo, min(lo + chunk, paths)) for lo in range(0, paths, chunk)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(work, lo, hi) for lo, hi in spans]
        for f in futures:
            f.result()


def estimate(
    config: SimConfig,
    *,
    strict: bool = False,
    threads: int = 1,
    backend: str | None = None,
) -> SimEstimate:
    """Monte Carlo mean and standard error of the stopping time.

    Bit-identical for a fixed (seed, paths, step, ...) regardless of
    ``threads``; ``strict`` turns truncated paths into an error.
    """
    kernel = load_backend(backend)
    n = config.paths
    times = np.empty(n)
    flags = np.zeros(n, dtype=bool)
    max_steps = _max_steps(config)
    sign = config.mode.drift_sign

    def work(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            rng = _substream(config.seed, (i,))
            times[i], flags[i] = _run_single(
                kernel, rng, sign, config.mu, config.h, config.step,
                config.bridge_correction, max_steps, BLOCK_STEPS,
            )

    _dispatch(n, threads, work)
    return _reduce(times, int(flags.sum()), strict)


@dataclass(frozen=True)
class DesignCheck:
    """Simulated vs analytic performance of a calibrated design."""

    design: DetectorDesign
    at2fa_sim: SimEstimate
    add_sim: SimEstimate
    z_at2fa: float
    z_add: float


def validate_design(
    gamma: float,
    mu: float,
    *,
    paths: int = 20_000,
    seed: int = 7,
    step: float | None = None,
    horizon: float | None = None,
    bridge: bool = True,
    threads: int = 1,
    backend: str | None = None,
    strict: bool = False,
    max_expected_steps: float = 2e9,
) -> DesignCheck:
    """Cross-check the closed forms: solve for h, simulate both modes.

    Pre-change paths use ``seed``; post-change paths use ``seed + 1``.
    Refuses (SimulationBudgetError) when the horizon cannot contain the
    expected time to false alarm or when the expected total step count
    exceeds ``max_expected_steps``.
    """
    design = solve_threshold(gamma, mu)
    if step is None:
        step = default_step(mu, design.h)
    if horizon is None:
        horizon = default_horizon(mu, design.h)
    if horizon < 2.0 * design.at2fa:
        raise SimulationBudgetError(
            f"horizon {horizon!r} is below twice the expected time to false "
            f"alarm {design.at2fa!r}; estimates would be truncation-biased"
        )
    expected_steps = (design.at2fa + design.add) / step * paths
    if expected_steps > max_expected_steps:
        raise SimulationBudgetError(
            f"expected ~{expected_steps:.3g} steps exceeds the budget "
            f"{max_expected_steps:.3g}; reduce gamma, paths, or resolution"
        )
    common = dict(mu=mu, h=design.h, step=step, paths=paths, horizon=horizon,
                  bridge_correction=bridge)
    pre = estimate(
        SimConfig(seed=seed, mode=Mode.PRE_CHANGE, **common),
        strict=strict, threads=threads, backend=backend,
    )
    post = estimate(
        SimConfig(seed=seed + 1, mode=Mode.POST_CHANGE, **common),
        strict=strict, threads=threads, backend=backend,
    )
    z_at2fa = (pre.mean - design.at2fa) / pre.stderr if pre.stderr > 0 else math.nan
    z_add = (post.mean - design.add) / post.stderr if post.stderr > 0 else math.nan
    return DesignCheck(design, pre, post, z_at2fa, z_add)


@dataclass(frozen=True)
class StudyLevel:
    """One resolution/bridge combination of the coupled refinement study."""

    factor: int
    bridge: bool


class _LevelState:
    __slots__ = ("y", "steps", "done", "drift", "vol", "bridge_scale",
                 "dt", "max_steps", "urng", "time", "truncated")

    def __init__(self, sign, mu, fine_step, level, max_steps, urng):
        f = level.factor
        self.dt = fine_step * f
        self.drift = sign * 0.5 * mu * mu * self.dt
        self.vol = mu * math.sqrt(self.dt)
        self.bridge_scale = 2.0 / (mu * mu * self.dt)
        self.max_steps = max_steps
        self.urng = urng
        self.y = 0.0
        self.steps = 0
        self.done = False
        self.time = math.nan
        self.truncated = False


def convergence_study(
    mode: Mode | str,
    mu: float,
    h: float,
    fine_step: float,
    paths: int,
    seed: int,
    levels,
    *,
    horizon: float | None = None,
    threads: int = 1,
    backend: str | None = None,
    block: int = STUDY_BLOCK_STEPS,
) -> dict:
    """Estimate the stopping-time mean at several grid resolutions with a
    shared underlying driving path.

    Each level runs the plain kernel at step ``fine_step * factor``; its
    increments are the exact groupwise sums of the fine increments, so the
    levels see the same continuous path sampled at different rates and
    their estimate differences carry far less Monte Carlo noise than
    independent runs would.  Level k's crossing-test uniforms come from
    substream (seed, (path, k+1)); fine normals from (seed, (path,)).
    """
    mode = Mode(mode) if not isinstance(mode, Mode) else mode
    kernel = load_backend(backend)
    levels = [lv if isinstance(lv, StudyLevel) else StudyLevel(*lv) for lv in levels]
    if not levels:
        raise DomainError("convergence_study: no levels given")
    for lv in levels:
        if lv.factor < 1 or block % lv.factor != 0:
            raise DomainError(
                f"convergence_study: factor {lv.factor!r} must divide block {block}"
            )
    if horizon is None:
        horizon = default_horizon(mu, h)
    sign = mode.drift_sign
    max_steps = [
        max(1, int(math.ceil(horizon / (fine_step * lv.factor)))) for lv in levels
    ]
    times = [np.empty(paths) for _ in levels]
    flags = [np.zeros(paths, dtype=bool) for _ in levels]

    def one_path(idx: int) -> None:
        g_rng = _substream(seed, (idx,))
        states = [
            _LevelState(
                sign, mu, fine_step, lv, max_steps[k],
                _substream(seed, (idx, k + 1)) if lv.bridge else None,
            )
            for k, lv in enumerate(levels)
        ]
        while not all(st.done for st in states):
            gauss = g_rng.standard_normal(block)
            for k, lv in enumerate(levels):
                st = states[k]
                if st.done:
                    continue
                f = lv.factor
                if f == 1:
                    g_level = gauss
                else:
                    g_level = gauss.reshape(-1, f).sum(axis=1) / math.sqrt(f)
                nsub = block // f
                unif = st.urng.random(nsub) if lv.bridge else _DUMMY_UNIFORMS
                limit = min(nsub, st.max_steps - st.steps)
                event, i, y = kernel.run_block(
                    st.y, h, st.drift, st.vol, st.bridge_scale,
                    lv.bridge, g_level, unif, limit,
                )
                if event == 1:
                    st.time = st.dt * (st.steps + i + 1)
                    st.done = True
                elif event == 2:
                    st.time = st.dt * (st.steps + i) + 0.5 * st.dt
                    st.done = True
                else:
                    st.y = y
                    st.steps += limit
                    if st.steps >= st.max_steps:
                        st.truncated = True
                        st.done = True
        for k, st in enumerate(states):
            times[k][idx] = st.time
            flags[k][idx] = st.truncated

    def work(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            one_path(i)

    _dispatch(paths, threads, work)
    return {
        levels[k]: _reduce(times[k], int(flags[k].sum()), False)
        for k in range(len(levels))
    }
