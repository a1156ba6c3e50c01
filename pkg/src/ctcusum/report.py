"""Result tables and the operations behind the CLI subcommands.

Every command returns a CurveTable: an ordered rectangular block of
doubles with named columns and a metadata header.  Tables serialize to a
small CSV dialect -- '#'-prefixed metadata lines, a header row, then
comma-separated values printed with shortest round-trip formatting -- so
the emitted bytes are a pure function of the command parameters (plus the
seed and kernel backend for the stochastic command).
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import sim
from .adversary import PowerLaw, classify, damage, damage_argmax, gap_metric, is_covert, mu_at
from .analytics import add, at2fa, g_of_x, n_exact, solve_threshold
from .errors import DomainError, TableFormatError
from .sim import Mode, SimConfig, estimate

__version__ = "0.1.0"

_MARKER = "ctcusum-table v1"

TABLE1_DELTAS = (0.75, 2.0, 5.0)
TABLE1_GAMMAS = (2.0, 5.0, 10.0, 1e2, 1e3, 1e4, 1e5)


@dataclass
class CurveTable:
    """Ordered rectangular result set with named, unit-tagged columns."""

    columns: list  # list of (name, unit) pairs
    rows: list  # list of float tuples
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        width = len(self.columns)
        for r in self.rows:
            if len(r) != width:
                raise TableFormatError(
                    f"row arity {len(r)} does not match {width} columns"
                )
        first = [r[0] for r in self.rows]
        if any(b < a for a, b in zip(first, first[1:])):
            raise TableFormatError("rows must be ordered by the first column")

    @property
    def column_names(self) -> list:
        return [name for name, _ in self.columns]

    def column(self, name: str) -> list:
        i = self.column_names.index(name)
        return [r[i] for r in self.rows]


def write_csv(table: CurveTable, stream) -> None:
    stream.write(f"# {_MARKER}\n")
    for key in sorted(table.metadata):
        stream.write(f"# {key}: {table.metadata[key]}\n")
    stream.write("# units: " + ",".join(unit for _, unit in table.columns) + "\n")
    stream.write(",".join(name for name, _ in table.columns) + "\n")
    for row in table.rows:
        stream.write(",".join(repr(float(v)) for v in row) + "\n")


def to_csv(table: CurveTable) -> str:
    buf = io.StringIO()
    write_csv(table, buf)
    return buf.getvalue()


def read_csv(stream) -> CurveTable:
    """Parse a table written by write_csv; rejects anything else."""
    lines = stream.read().splitlines()
    if not lines or lines[0] != f"# {_MARKER}":
        raise TableFormatError("not a table produced by this package")
    metadata = {}
    units = None
    i = 1
    while i < len(lines) and lines[i].startswith("#"):
        body = lines[i][1:].strip()
        key, sep, value = body.partition(":")
        if not sep:
            raise TableFormatError(f"malformed metadata line: {lines[i]!r}")
        if key.strip() == "units":
            units = [u.strip() for u in value.split(",")]
        else:
            metadata[key.strip()] = value.strip()
        i += 1
    if i >= len(lines):
        raise TableFormatError("missing header row")
    names = lines[i].split(",")
    if units is None:
        units = [""] * len(names)
    if len(units) != len(names):
        raise TableFormatError("units line does not match header")
    rows = []
    for line in lines[i + 1:]:
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != len(names):
            raise TableFormatError(f"row arity mismatch: {line!r}")
        try:
            rows.append(tuple(float(p) for p in parts))
        except ValueError as exc:
            raise TableFormatError(f"non-numeric cell in row {line!r}") from exc
    if not rows:
        raise TableFormatError("table has no data rows")
    return CurveTable(list(zip(names, units)), rows, metadata)


def _params_json(**params) -> str:
    return json.dumps(params, sort_keys=True, separators=(",", ":"))


def _gamma_label(g: float) -> str:
    if g > 0:
        e = round(math.log10(g))
        if 10.0 ** e == g and e >= 3:
            return f"1e{e}"
    return f"{g:g}"


def _theta_limit(schedule) -> float:
    """Numeric encoding of the regime: the limit of gamma*mu(gamma)^2."""
    regime = classify(schedule)
    if regime.kind == "infinite":
        return math.inf
    if regime.kind == "finite":
        return regime.theta
    return 0.0


def paper_round(m: float) -> float:
    """Three significant figures capped at two decimals (table display)."""
    if m >= 100.0:
        return round(m, 0)
    if m >= 10.0:
        return round(m, 1)
    return round(m, 2)


def cmd_analyze(gamma: float, mu: float | None = None,
                delta: float | None = None, c: float = 1.0) -> CurveTable:
    """One fully resolved design point, from either a plain drift or a
    power-law schedule evaluated at gamma."""
    if (mu is None) == (delta is None):
        raise DomainError("analyze: give exactly one of mu or delta")
    if delta is not None:
        schedule = PowerLaw(c, delta)
        mu_val = mu_at(schedule, gamma)
        design = solve_threshold(gamma, mu_val)
        row = (
            gamma, mu_val, design.x, design.h, design.at2fa, design.add,
            gap_metric(gamma, schedule), _theta_limit(schedule),
            1.0 if is_covert(schedule) else 0.0, damage(gamma, schedule),
        )
        columns = [
            ("gamma", "time"), ("mu", "1/sqrt(time)"), ("x", "1"), ("h", "1"),
            ("at2fa", "time"), ("add", "time"), ("m_pct", "%"),
            ("theta_limit", "1"), ("covert", "bool"), ("damage", "sqrt(time)"),
        ]
        params = _params_json(gamma=gamma, delta=delta, c=c)
    else:
        design = solve_threshold(gamma, mu)
        row = (
            gamma, mu, design.x, design.h, design.at2fa, design.add,
            mu * design.add,
        )
        columns = [
            ("gamma", "time"), ("mu", "1/sqrt(time)"), ("x", "1"), ("h", "1"),
            ("at2fa", "time"), ("add", "time"), ("damage", "sqrt(time)"),
        ]
        params = _params_json(gamma=gamma, mu=mu)
    return CurveTable(columns, [row], {
        "command": "analyze", "params": params, "version": __version__,
    })


def cmd_table1() -> CurveTable:
    """Relative-gap matrix M(gamma) for delta in {0.75, 2, 5} over the
    standard gamma ladder, display-rounded and exact."""
    columns = [("delta", "1")]
    columns += [(f"m_{_gamma_label(g)}", "%") for g in TABLE1_GAMMAS]
    columns += [(f"m_exact_{_gamma_label(g)}", "%") for g in TABLE1_GAMMAS]
    rows = []
    for d in TABLE1_DELTAS:
        vals = [gap_metric(g, PowerLaw(1.0, d)) for g in TABLE1_GAMMAS]
        rows.append(tuple([d] + [paper_round(m) for m in vals] + vals))
    return CurveTable(columns, rows, {
        "command": "table1", "params": _params_json(), "version": __version__,
        "xscale": "linear", "yscale": "linear",
    })


def cmd_fig1(deltas=(0.75, 2.0, 5.0), gamma_min: float = 1.0,
             gamma_max: float = 1e5, points: int = 200) -> CurveTable:
    """Delay curves n(gamma) for power-law drifts, plus the identity."""
    if points < 2:
        raise DomainError("fig1: need at least 2 points")
    if not 0 < gamma_min < gamma_max:
        raise DomainError("fig1: need 0 < gamma_min < gamma_max")
    deltas = tuple(deltas)
    grid = np.logspace(math.log10(gamma_min), math.log10(gamma_max), points)
    columns = [("gamma", "time"), ("identity", "time")]
    columns += [(f"n_delta_{d:g}", "time") for d in deltas]
    rows = []
    for g in grid:
        g = float(g)
        row = [g, g]
        for d in deltas:
            row.append(n_exact(g, mu_at(PowerLaw(1.0, d), g)))
        rows.append(tuple(row))
    return CurveTable(columns, rows, {
        "command": "fig1",
        "params": _params_json(deltas=list(deltas), gamma_min=gamma_min,
                               gamma_max=gamma_max, points=points),
        "version": __version__, "xscale": "log", "yscale": "log",
    })


def _delta_grid(delta_min: float, delta_max: float, delta_step: float) -> list:
    if not (0.0 <= delta_min < delta_max <= 1.0) or delta_step <= 0:
        raise DomainError("delta grid must satisfy 0 <= min < max <= 1, step > 0")
    n = int(round((delta_max - delta_min) / delta_step))
    # Rounding keeps decimal grids exact (0.5 stays 0.5, not 0.5 + 1 ulp).
    grid = [round(delta_min + k * delta_step, 12) for k in range(n + 1)]
    grid[-1] = min(grid[-1], delta_max)
    return grid


def cmd_phase(gammas=(1e3, 1e5, 1e8, 1e12), delta_min: float = 0.0,
              delta_max: float = 1.0, delta_step: float = 0.005) -> CurveTable:
    """Threshold h and delay ratio n/gamma across the delta axis: the
    covertness transition at delta = 1/2."""
    gammas = tuple(gammas)
    grid = _delta_grid(delta_min, delta_max, delta_step)
    columns = [("delta", "1")]
    columns += [(f"h_{_gamma_label(g)}", "1") for g in gammas]
    columns += [(f"ratio_{_gamma_label(g)}", "1") for g in gammas]
    rows = []
    for d in grid:
        hs, ratios = [], []
        for g in gammas:
            design = solve_threshold(g, mu_at(PowerLaw(1.0, d), g))
            hs.append(design.h)
            ratios.append(design.add / g)
        rows.append(tuple([d] + hs + ratios))
    return CurveTable(columns, rows, {
        "command": "phase",
        "params": _params_json(gammas=list(gammas), delta_min=delta_min,
                               delta_max=delta_max, delta_step=delta_step),
        "version": __version__, "xscale": "linear",
        "panels": "h_:log,ratio_:linear",
    })


# Sentinel first-column value for the appended per-gamma argmax row of the
# damage table; above every grid delta so row ordering stays ascending.
DAMAGE_ARGMAX_SENTINEL = 2.0


def cmd_damage(gammas=(1e6, 1e8, 1e10, 1e12), delta_min: float = 0.0,
               delta_max: float = 1.0, delta_step: float = 0.005) -> CurveTable:
    """log10 of adversarial damage across delta per gamma; the final row
    (delta = sentinel 2.0) holds the grid argmax delta per gamma."""
    gammas = tuple(gammas)
    grid = _delta_grid(delta_min, delta_max, delta_step)
    columns = [("delta", "1")]
    columns += [(f"logD_{_gamma_label(g)}", "log10") for g in gammas]
    rows = []
    per_gamma = {g: [] for g in gammas}
    for d in grid:
        vals = []
        for g in gammas:
            D = damage(g, PowerLaw(1.0, d))
            per_gamma[g].append(D)
            vals.append(math.log10(D))
        rows.append(tuple([d] + vals))
    argmax_row = [DAMAGE_ARGMAX_SENTINEL]
    for g in gammas:
        best = int(np.argmax(per_gamma[g]))
        argmax_row.append(grid[best])
    rows.append(tuple(argmax_row))
    return CurveTable(columns, rows, {
        "command": "damage",
        "params": _params_json(gammas=list(gammas), delta_min=delta_min,
                               delta_max=delta_max, delta_step=delta_step),
        "version": __version__, "xscale": "linear", "yscale": "linear",
        "note": f"final row (delta={DAMAGE_ARGMAX_SENTINEL}) is argmax delta per gamma",
    })


def cmd_simulate(mode, mu: float, h: float | None = None,
                 gamma: float | None = None, step: float | None = None,
                 paths: int = 100_000, seed: int = 0, bridge: bool = True,
                 horizon: float | None = None, strict: bool = False,
                 threads: int = 1) -> CurveTable:
    """Monte Carlo estimate of one stopping-time mean, with the analytic
    target and its z-score."""
    if (h is None) == (gamma is None):
        raise DomainError("simulate: give exactly one of h or gamma")
    if h is None:
        h = solve_threshold(gamma, mu).h
    mode = Mode(mode) if not isinstance(mode, Mode) else mode
    config = sim.make_config(mode, mu, h, step=step, paths=paths, seed=seed,
                             horizon=horizon, bridge=bridge)
    result = estimate(config, strict=strict, threads=threads)
    analytic = at2fa(mu, h) if mode is Mode.PRE_CHANGE else add(mu, h)
    z = (result.mean - analytic) / result.stderr if result.stderr > 0 else math.nan
    columns = [
        ("mu", "1/sqrt(time)"), ("h", "1"), ("step", "time"), ("paths", "1"),
        ("mean", "time"), ("stderr", "time"), ("truncated", "1"),
        ("analytic", "time"), ("zscore", "1"),
    ]
    row = (mu, h, config.step, float(paths), result.mean, result.stderr,
           float(result.truncated), analytic, z)
    return CurveTable(columns, [row], {
        "command": "simulate",
        "params": _params_json(mode=mode.value, mu=mu, h=h, step=config.step,
                               paths=paths, seed=seed, bridge=bridge,
                               horizon=config.horizon, strict=strict),
        "version": __version__, "seed": str(seed), "backend": sim.DEFAULT_BACKEND,
    })
