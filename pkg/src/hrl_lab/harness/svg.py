"""Hand-rolled SVG renderers.

Everything is emitted with fixed layout constants and fixed-precision
numbers so the same inputs always produce the same bytes. Bars and
polylines carry data-* attributes so tests can read values back without
a rasterizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hrl_lab.harness.runlog import RunLog

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
FONT = 'font-family="monospace" font-size="12"'

CURVE_PLOT_W = 520.0
CURVE_PLOT_H = 300.0
CURVE_MARGIN_L = 60.0
CURVE_MARGIN_T = 40.0
CURVE_LEGEND_W = 170.0

HIST_PLOT_W = 440.0
HIST_PLOT_H = 130.0
HIST_MARGIN_L = 60.0
HIST_PANEL_H = 190.0


def _f(v: float) -> str:
    return f"{v:.2f}"


def _svg(width: float, height: float, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" '
        f'height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _scale(lo: float, hi: float):
    span = hi - lo
    if span <= 0:
        return lambda v: 0.5
    return lambda v: (v - lo) / span


def render_curves(logs: list[RunLog], metric: str = "steps") -> str:
    """Line chart with one polyline per agent, seed-averaged per episode."""
    if not logs:
        raise ValueError("no run logs to render")
    if metric not in ("steps", "reward"):
        raise ValueError(f"metric must be steps or reward, got {metric!r}")

    series: list[tuple[str, list[tuple[int, float]]]] = []
    for log in logs:
        by_episode: dict[int, list[float]] = {}
        for row in log.rows:
            v = float(row.steps if metric == "steps" else row.reward)
            by_episode.setdefault(row.episode, []).append(v)
        if not by_episode:
            raise ValueError(f"log for {log.agent!r} has no rows")
        pts = [(ep, float(np.mean(vs))) for ep, vs in sorted(by_episode.items())]
        series.append((log.agent, pts))

    xs = [ep for _, pts in series for ep, _ in pts]
    ys = [v for _, pts in series for _, v in pts]
    sx = _scale(min(xs), max(xs))
    sy = _scale(min(ys), max(ys))
    left, top, w, h = CURVE_MARGIN_L, CURVE_MARGIN_T, CURVE_PLOT_W, CURVE_PLOT_H

    body = [
        f'<text x="{_f(left)}" y="20" {FONT}>{metric} per episode</text>',
        f'<line x1="{_f(left)}" y1="{_f(top + h)}" x2="{_f(left + w)}" y2="{_f(top + h)}" stroke="black"/>',
        f'<line x1="{_f(left)}" y1="{_f(top)}" x2="{_f(left)}" y2="{_f(top + h)}" stroke="black"/>',
        f'<text x="{_f(left)}" y="{_f(top + h + 16)}" {FONT}>{min(xs)}</text>',
        f'<text x="{_f(left + w - 20)}" y="{_f(top + h + 16)}" {FONT}>{max(xs)}</text>',
        f'<text x="4" y="{_f(top + h)}" {FONT}>{_f(min(ys))}</text>',
        f'<text x="4" y="{_f(top + 10)}" {FONT}>{_f(max(ys))}</text>',
    ]
    for i, (agent, pts) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(
            f"{_f(left + sx(ep) * w)},{_f(top + (1 - sy(v)) * h)}" for ep, v in pts
        )
        body.append(
            f'<polyline data-agent="{agent}" fill="none" stroke="{color}" '
            f'stroke-width="1.5" points="{coords}"/>'
        )
        ly = top + 14 + 18 * i
        lx = left + w + 16
        body.append(
            f'<line x1="{_f(lx)}" y1="{_f(ly - 4)}" x2="{_f(lx + 22)}" y2="{_f(ly - 4)}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        body.append(f'<text x="{_f(lx + 28)}" y="{_f(ly)}" {FONT}>{agent}</text>')

    return _svg(left + w + CURVE_LEGEND_W, top + h + 30, body)


@dataclass(frozen=True)
class HistogramSpec:
    """Binning control: exactly one of bin_width / bin_count (count 10 if
    neither), optional fixed axis bounds, bounds shared across panels or
    recomputed per agent."""

    bin_width: float | None = None
    bin_count: int | None = None
    bounds: tuple[float, float] | None = None
    shared_bounds: bool = True

    def __post_init__(self) -> None:
        if self.bin_width is not None and self.bin_count is not None:
            raise ValueError("set bin_width or bin_count, not both")
        if self.bin_width is not None and self.bin_width <= 0:
            raise ValueError(f"bin_width must be positive, got {self.bin_width}")
        if self.bin_count is not None and self.bin_count < 1:
            raise ValueError(f"need at least one bin, got {self.bin_count}")
        if self.bounds is not None and self.bounds[0] > self.bounds[1]:
            raise ValueError(f"bounds are reversed: {self.bounds}")

    def edges(self, lo: float, hi: float) -> np.ndarray:
        if self.bounds is not None:
            lo, hi = self.bounds
        if self.bin_width is not None:
            # Half-open bins [e, e+w): the max value starts its own bin, so
            # durations [1,1,2] at width 1 come out as {1: 2, 2: 1}.
            n = 1 + (math.floor((hi - lo) / self.bin_width) if hi > lo else 0)
            return lo + self.bin_width * np.arange(n + 1)
        count = self.bin_count if self.bin_count is not None else 10
        if hi <= lo:
            return np.array([lo - 0.5, lo + 0.5])
        return np.linspace(lo, hi, count + 1)


def render_histogram(
    durations: dict[str, "np.ndarray | list[float]"], spec: HistogramSpec | None = None
) -> str:
    """One panel per agent, counts per bin, mean annotated in the title."""
    spec = spec or HistogramSpec()
    if not durations:
        raise ValueError("no duration data to render")
    arrays = {agent: np.asarray(vals, dtype=float) for agent, vals in durations.items()}
    for agent, vals in arrays.items():
        if vals.size == 0:
            raise ValueError(f"agent {agent!r} has no durations")

    all_vals = np.concatenate(list(arrays.values()))
    body: list[str] = []
    left, w, h = HIST_MARGIN_L, HIST_PLOT_W, HIST_PLOT_H
    for i, (agent, vals) in enumerate(arrays.items()):
        lo, hi = (
            (all_vals.min(), all_vals.max())
            if spec.shared_bounds
            else (vals.min(), vals.max())
        )
        edges = spec.edges(float(lo), float(hi))
        counts, _ = np.histogram(vals, bins=edges)
        top = 30.0 + HIST_PANEL_H * i
        body.append(
            f'<text x="{_f(left)}" y="{_f(top - 10)}" {FONT}>'
            f"{agent} (mean {np.mean(vals):.2f}, n={vals.size})</text>"
        )
        body.append(
            f'<line x1="{_f(left)}" y1="{_f(top + h)}" x2="{_f(left + w)}" y2="{_f(top + h)}" stroke="black"/>'
        )
        body.append(
            f'<line x1="{_f(left)}" y1="{_f(top)}" x2="{_f(left)}" y2="{_f(top + h)}" stroke="black"/>'
        )
        max_count = max(1, int(counts.max()))
        bar_w = w / len(counts)
        color = PALETTE[i % len(PALETTE)]
        for b, count in enumerate(counts):
            bar_h = h * (int(count) / max_count)
            body.append(
                f'<rect data-agent="{agent}" data-bin="{_f(edges[b])}" '
                f'data-count="{int(count)}" x="{_f(left + b * bar_w)}" '
                f'y="{_f(top + h - bar_h)}" width="{_f(bar_w)}" height="{_f(bar_h)}" '
                f'fill="{color}" stroke="black" stroke-width="0.5"/>'
            )
        body.append(f'<text x="4" y="{_f(top + 10)}" {FONT}>{max_count}</text>')
        body.append(f'<text x="{_f(left)}" y="{_f(top + h + 16)}" {FONT}>{_f(edges[0])}</text>')
        body.append(
            f'<text x="{_f(left + w - 40)}" y="{_f(top + h + 16)}" {FONT}>{_f(edges[-1])}</text>'
        )

    return _svg(left + w + 40, 30.0 + HIST_PANEL_H * len(arrays), body)
