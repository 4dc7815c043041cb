"""Self-contained SVG line charts for regret curves.

Hand-written markup with no external references, so the output is a single
deterministic text file: one line per experiment with a shaded confidence
band, labeled axes, and a legend.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError

__all__ = ["Series", "render_regret_chart"]

PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
)

_WIDTH, _HEIGHT = 860, 520
_MARGIN_LEFT, _MARGIN_RIGHT, _MARGIN_TOP, _MARGIN_BOTTOM = 70, 20, 20, 55


@dataclass(frozen=True)
class Series:
    label: str
    t: tuple[float, ...]
    mean: tuple[float, ...]
    ci: tuple[float, ...]


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def _fmt_tick(v: float) -> str:
    return f"{v:g}"


def render_regret_chart(
    series: list[Series],
    *,
    x_label: str = "round t",
    y_label: str = "mean cumulative regret",
) -> str:
    if not series:
        raise ConfigurationError("no data rows to plot")
    x_lo = min(min(s.t) for s in series)
    x_hi = max(max(s.t) for s in series)
    y_lo = 0.0
    y_hi = max(max(m + c for m, c in zip(s.mean, s.ci)) for s in series)
    y_hi = y_hi * 1.05 if y_hi > 0 else 1.0
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0

    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def px(x: float) -> float:
        return _MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return _MARGIN_TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
    ]
    axis_y = _MARGIN_TOP + plot_h
    out.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{axis_y}" x2="{_MARGIN_LEFT + plot_w}" '
        f'y2="{axis_y}" stroke="black" stroke-width="1"/>'
    )
    out.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP}" x2="{_MARGIN_LEFT}" '
        f'y2="{axis_y}" stroke="black" stroke-width="1"/>'
    )
    for tick in _ticks(x_lo, x_hi):
        x = px(tick)
        out.append(
            f'<line x1="{x:.2f}" y1="{axis_y}" x2="{x:.2f}" y2="{axis_y + 5}" '
            f'stroke="black" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{axis_y + 20}" font-size="12" '
            f'text-anchor="middle" font-family="sans-serif">{_fmt_tick(tick)}</text>'
        )
    for tick in _ticks(y_lo, y_hi):
        y = py(tick)
        out.append(
            f'<line x1="{_MARGIN_LEFT - 5}" y1="{y:.2f}" x2="{_MARGIN_LEFT}" '
            f'y2="{y:.2f}" stroke="black" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_MARGIN_LEFT - 8}" y="{y + 4:.2f}" font-size="12" '
            f'text-anchor="end" font-family="sans-serif">{_fmt_tick(tick)}</text>'
        )
    out.append(
        f'<text x="{_MARGIN_LEFT + plot_w / 2:.2f}" y="{_HEIGHT - 12}" font-size="14" '
        f'text-anchor="middle" font-family="sans-serif">{x_label}</text>'
    )
    out.append(
        f'<text x="18" y="{_MARGIN_TOP + plot_h / 2:.2f}" font-size="14" '
        f'text-anchor="middle" font-family="sans-serif" '
        f'transform="rotate(-90 18 {_MARGIN_TOP + plot_h / 2:.2f})">{y_label}</text>'
    )

    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        upper = [(px(t), py(m + c)) for t, m, c in zip(s.t, s.mean, s.ci)]
        lower = [(px(t), py(max(m - c, 0.0))) for t, m, c in zip(s.t, s.mean, s.ci)]
        band = " ".join(f"{x:.2f},{y:.2f}" for x, y in upper + lower[::-1])
        out.append(f'<polygon points="{band}" fill="{color}" fill-opacity="0.15"/>')
        line = " ".join(f"{px(t):.2f},{py(m):.2f}" for t, m in zip(s.t, s.mean))
        out.append(
            f'<polyline points="{line}" fill="none" stroke="{color}" stroke-width="1.8"/>'
        )

    legend_x = _MARGIN_LEFT + 12
    legend_y = _MARGIN_TOP + 10
    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        y = legend_y + 18 * i
        out.append(
            f'<line x1="{legend_x}" y1="{y}" x2="{legend_x + 24}" y2="{y}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{legend_x + 30}" y="{y + 4}" font-size="12" '
            f'font-family="sans-serif">{s.label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
