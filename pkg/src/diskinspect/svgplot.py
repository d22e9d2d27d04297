"""Minimal SVG line charts for sweep outputs.

Hand-rolled on purpose: the figures are acceptance artifacts regenerated
from CSV-equivalent data, not an interactive UI, and a plotting dependency
would be the heaviest thing in the package.  Deterministic output: same
data, same bytes.
"""

from __future__ import annotations

WIDTH = 640
HEIGHT = 400
MARGIN = 50
PALETTE = ("#1f77b4", "#2ca02c", "#9467bd")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def line_chart(
    xs,
    series: dict,
    path,
    title: str = "",
    ref_lines: tuple[float, ...] = (),
) -> None:
    """Write one SVG with the given named series against xs.

    ``ref_lines`` draws dashed horizontal reference lines at the given
    y-values (e.g. a bound being compared against).
    """
    xs = [float(v) for v in xs]
    ys_all = [float(v) for vals in series.values() for v in vals]
    ys_all += [float(r) for r in ref_lines]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad
    inner_w = WIDTH - 2 * MARGIN
    inner_h = HEIGHT - 2 * MARGIN

    def px(x: float) -> float:
        return MARGIN + inner_w * (x - x_lo) / (x_hi - x_lo)

    def py(y: float) -> float:
        return HEIGHT - MARGIN - inner_h * (y - y_lo) / (y_hi - y_lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{inner_w}" height="{inner_h}" '
        f'fill="none" stroke="#333" stroke-width="1"/>',
    ]
    if title:
        parts.append(
            f'<text x="{WIDTH // 2}" y="{MARGIN - 16}" text-anchor="middle" '
            f'font-family="monospace" font-size="14">{title}</text>'
        )
    for tick in range(5):
        fx = x_lo + (x_hi - x_lo) * tick / 4
        fy = y_lo + (y_hi - y_lo) * tick / 4
        parts.append(
            f'<text x="{_fmt(px(fx))}" y="{HEIGHT - MARGIN + 18}" text-anchor="middle" '
            f'font-family="monospace" font-size="10">{fx:.6g}</text>'
        )
        parts.append(
            f'<text x="{MARGIN - 6}" y="{_fmt(py(fy) + 3)}" text-anchor="end" '
            f'font-family="monospace" font-size="10">{fy:.6g}</text>'
        )
    for ref in ref_lines:
        y = _fmt(py(float(ref)))
        parts.append(
            f'<line x1="{MARGIN}" y1="{y}" x2="{WIDTH - MARGIN}" y2="{y}" '
            f'stroke="red" stroke-width="1" stroke-dasharray="6,4"/>'
        )
    for color, (name, ys) in zip(PALETTE, series.items()):
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(float(y)))}" for x, y in zip(xs, ys))
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{WIDTH - MARGIN - 4}" y="{MARGIN + 16 + 14 * list(series).index(name)}" '
            f'text-anchor="end" font-family="monospace" font-size="11" '
            f'fill="{color}">{name}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")
