#############################################################################
# svg_plot.py
#
# minimal log-x line plot of a sweep (c_lb and mi_oracle) written as a
# standalone SVG document
#
# Sat Oct 17 2026
#############################################################################

import logging
import math
from pathlib import Path
from typing import List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from asdrp.harness.sweep import SweepResult

logger = logging.getLogger(__name__)

WIDTH, HEIGHT = 640, 400
MARGIN = 56
SERIES = (("c_lb_nats", "c_lb", "#1f77b4"), ("mi_oracle_nats", "mi_oracle", "#d62728"))


def _points(xs: Sequence[float], ys: Sequence[Optional[float]]) -> List[Tuple[float, float]]:
    return [(math.log10(x), y) for x, y in zip(xs, ys) if y is not None and math.isfinite(y)]


def _scale(lo: float, hi: float, a: float, b: float):
    span = hi - lo if hi > lo else 1.0
    return lambda v: a + (v - lo) * (b - a) / span


def svg_text(result: SweepResult, title: str = "capacity lower bound", y_label: str = "nats") -> str:
    xs = result.column("snr")
    series = [(label, color, _points(xs, result.column(col))) for col, label, color in SERIES]
    series = [s for s in series if s[2]]
    all_pts = [p for _, _, pts in series for p in pts]

    x_lo, x_hi = math.log10(xs[0]), math.log10(xs[-1])
    y_vals = [y for _, y in all_pts] or [0.0]
    y_lo, y_hi = min(min(y_vals), 0.0), max(max(y_vals), 0.0)
    sx = _scale(x_lo, x_hi, MARGIN, WIDTH - MARGIN)
    sy = _scale(y_lo, y_hi, HEIGHT - MARGIN, MARGIN)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle">{escape(title)}</text>',
        # axes
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">SNR (log scale)</text>',
        f'<text x="16" y="{HEIGHT / 2:.1f}" transform="rotate(-90 16 {HEIGHT / 2:.1f})" '
        f'text-anchor="middle">{escape(y_label)}</text>',
    ]
    for decade in range(math.ceil(x_lo), math.floor(x_hi) + 1):
        x = sx(decade)
        out.append(f'<line x1="{x:.1f}" y1="{HEIGHT - MARGIN}" x2="{x:.1f}" y2="{HEIGHT - MARGIN + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.1f}" y="{HEIGHT - MARGIN + 18}" text-anchor="middle">1e{decade}</text>')
    for y in (y_lo, 0.0, y_hi):
        out.append(f'<text x="{MARGIN - 6}" y="{sy(y) + 4:.1f}" text-anchor="end">{y:.3g}</text>')

    for i, (label, color, pts) in enumerate(series):
        path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{path}"/>')
        out.append(
            f'<text x="{WIDTH - MARGIN - 4}" y="{MARGIN + 16 * i}" text-anchor="end" fill="{color}">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(result: SweepResult, path: Path, **kwargs) -> None:
    Path(path).write_text(svg_text(result, **kwargs), encoding="utf-8")
    logger.info("wrote plot to %s", path)
