"""Deterministic SVG line charts for CurveTable CSVs.

No plotting library: a fixed canvas, plain-text labels, and one polyline
per series keep the output byte-stable across platforms.  The first table
column is the x axis; remaining columns are series.  Phase tables render
as two stacked panels grouped by column prefix (``h_`` on a log axis,
``ratio_`` linear); damage tables drop their argmax sentinel row.
"""

from __future__ import annotations

import math

from .errors import TableFormatError
from .report import DAMAGE_ARGMAX_SENTINEL, CurveTable

_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
    "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
)

_WIDTH = 800
_PANEL_HEIGHT = 420
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 160, 30, 45


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, log: bool) -> list:
    if log:
        lo_e = math.floor(math.log10(lo))
        hi_e = math.ceil(math.log10(hi))
        step = max(1, (hi_e - lo_e) // 8)
        return [10.0 ** e for e in range(int(lo_e), int(hi_e) + 1, step)]
    if hi == lo:
        return [lo]
    span = hi - lo
    raw = span / 5
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min(s for s in (mag, 2 * mag, 5 * mag, 10 * mag) if span / s <= 6)
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * span:
        out.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return out


class _Axis:
    def __init__(self, values, log, px_lo, px_hi):
        vals = [v for v in values if not log or v > 0]
        if not vals:
            raise TableFormatError("log axis needs positive values")
        self.log = log
        self.lo, self.hi = min(vals), max(vals)
        if self.lo == self.hi:
            pad = abs(self.lo) * 0.5 + 1.0
            self.lo, self.hi = self.lo - pad, self.hi + pad
        self.px_lo, self.px_hi = px_lo, px_hi

    def to_px(self, v: float) -> float:
        if self.log:
            t = (math.log10(v) - math.log10(self.lo)) / (
                math.log10(self.hi) - math.log10(self.lo)
            )
        else:
            t = (v - self.lo) / (self.hi - self.lo)
        return self.px_lo + t * (self.px_hi - self.px_lo)


def _panel_svg(parts, x, xcols, series, y_log, top, title):
    ax_x = _Axis(xcols, x == "log", _MARGIN_L, _WIDTH - _MARGIN_R)
    all_y = [v for _, vals, _ in series for v in vals]
    height = _PANEL_HEIGHT
    ax_y = _Axis(all_y, y_log, top + height - _MARGIN_B, top + _MARGIN_T)
    left, right = _MARGIN_L, _WIDTH - _MARGIN_R
    bottom, ptop = top + height - _MARGIN_B, top + _MARGIN_T
    parts.append(
        f'<rect x="{left}" y="{ptop}" width="{right - left}" '
        f'height="{bottom - ptop}" fill="none" stroke="#333333"/>'
    )
    parts.append(
        f'<text x="{left}" y="{ptop - 8}" font-size="13" fill="#333333">{title}</text>'
    )
    for t in _ticks(ax_x.lo, ax_x.hi, ax_x.log):
        px = ax_x.to_px(t)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{bottom}" x2="{_fmt(px)}" '
            f'y2="{bottom + 4}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{bottom + 18}" font-size="11" '
            f'text-anchor="middle" fill="#333333">{t:g}</text>'
        )
    for t in _ticks(ax_y.lo, ax_y.hi, ax_y.log):
        py = ax_y.to_px(t)
        parts.append(
            f'<line x1="{left - 4}" y1="{_fmt(py)}" x2="{left}" '
            f'y2="{_fmt(py)}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{left - 7}" y="{_fmt(py + 4)}" font-size="11" '
            f'text-anchor="end" fill="#333333">{t:g}</text>'
        )
    for k, (name, vals, xs) in enumerate(series):
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(
            f"{_fmt(ax_x.to_px(xv))},{_fmt(ax_y.to_px(yv))}"
            for xv, yv in zip(xs, vals)
            if (not ax_x.log or xv > 0) and (not y_log or yv > 0)
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        ly = ptop + 14 + 16 * k
        parts.append(
            f'<line x1="{right + 8}" y1="{ly - 4}" x2="{right + 28}" '
            f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{right + 33}" y="{ly}" font-size="11" fill="#333333">{name}</text>'
        )


def render_table(table: CurveTable, out_path: str) -> None:
    """Render a CurveTable to a standalone SVG file."""
    names = table.column_names
    command = table.metadata.get("command", "")
    rows = table.rows
    if command == "damage":
        rows = [r for r in rows if r[0] != DAMAGE_ARGMAX_SENTINEL]
    if not rows:
        raise TableFormatError("no plottable rows")
    xs = [r[0] for r in rows]
    xscale = table.metadata.get("xscale", "linear")
    if command == "phase":
        groups = [("h_", "threshold h", True), ("ratio_", "delay ratio n/gamma", False)]
        panels = []
        for prefix, title, y_log in groups:
            series = []
            for j, name in enumerate(names[1:], start=1):
                if name.startswith(prefix):
                    series.append((name, [r[j] for r in rows], xs))
            if series:
                panels.append((title, series, y_log))
    else:
        y_log = table.metadata.get("yscale", "linear") == "log"
        series = [(name, [r[j] for r in rows], xs)
                  for j, name in enumerate(names[1:], start=1)]
        panels = [(f"{command or 'table'}: {names[0]} axis", series, y_log)]
    height = _PANEL_HEIGHT * len(panels)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{height}" viewBox="0 0 {_WIDTH} {height}">',
        f'<rect width="{_WIDTH}" height="{height}" fill="#ffffff"/>',
    ]
    for k, (title, series, y_log) in enumerate(panels):
        _panel_svg(parts, xscale, xs, series, y_log, k * _PANEL_HEIGHT, title)
    parts.append("</svg>")
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
