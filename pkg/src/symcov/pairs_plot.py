"""Deterministic SVG scatter-plot matrix for interval data.

Lower panels draw one rectangle per object (its intervals on the two
variables of the panel), upper panels print the sample symbolic
correlations for the requested definitions, and the diagonal names the
variables. Output is plain SVG text assembled with fixed number formatting,
so identical inputs give identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .intervals import IntervalDataset
from .stats import sample_cor_matrix

PALETTE = (
    "#000000",
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
)


@dataclass(frozen=True)
class PlotSpec:
    width: int = 900
    height: int = 900
    color_by: str | None = None
    k_list: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7, 8)

    def __post_init__(self):
        ks = tuple(int(k) for k in self.k_list)
        if not ks:
            raise ValueError("k_list must not be empty")
        for k in ks:
            if not 1 <= k <= 8:
                raise ValueError(f"k_list entries must be in 1..8, got {k}")
        if self.width < 100 or self.height < 100:
            raise ValueError("plot must be at least 100x100 pixels")
        object.__setattr__(self, "k_list", ks)


def _axis_bounds(lower: np.ndarray, upper: np.ndarray) -> tuple[float, float]:
    lo, hi = float(lower.min()), float(upper.max())
    pad = 0.05 * (hi - lo) if hi > lo else 0.5
    return lo - pad, hi + pad


def render_pairs_svg(
    d: IntervalDataset,
    spec: PlotSpec = PlotSpec(),
    labels: dict[str, list[str]] | None = None,
) -> str:
    """Render the p x p symbolic pairs figure as an SVG string."""
    if d.p < 2:
        raise ValueError(f"pairs plot needs at least 2 variables, got {d.p}")
    colors = ["#000000"] * d.n
    if spec.color_by is not None:
        if not labels or spec.color_by not in labels:
            raise ValueError(f"no categorical column {spec.color_by!r} in the input")
        values = labels[spec.color_by]
        order = list(dict.fromkeys(values))
        colors = [PALETTE[order.index(v) % len(PALETTE)] for v in values]

    lower, upper = d.limits()
    bounds = [_axis_bounds(lower[:, j], upper[:, j]) for j in range(d.p)]
    cors = {k: sample_cor_matrix(d, k).entries for k in spec.k_list}

    margin = 30.0
    gap = 6.0
    pw = (spec.width - 2 * margin - (d.p - 1) * gap) / d.p
    ph = (spec.height - 2 * margin - (d.p - 1) * gap) / d.p

    def panel_origin(row: int, col: int) -> tuple[float, float]:
        return margin + col * (pw + gap), margin + row * (ph + gap)

    def sx(j: int, x0: float, v: float) -> float:
        lo, hi = bounds[j]
        return x0 + (v - lo) / (hi - lo) * pw

    def sy(j: int, y0: float, v: float) -> float:
        lo, hi = bounds[j]
        return y0 + (hi - v) / (hi - lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" '
        f'height="{spec.height}" viewBox="0 0 {spec.width} {spec.height}">',
        f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="#ffffff"/>',
    ]
    for row in range(d.p):
        for col in range(d.p):
            x0, y0 = panel_origin(row, col)
            out.append(
                f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{pw:.2f}" height="{ph:.2f}" '
                f'fill="none" stroke="#aaaaaa" stroke-width="0.5"/>'
            )
            if row == col:
                out.append(
                    f'<text x="{x0 + pw / 2:.2f}" y="{y0 + ph / 2:.2f}" '
                    f'text-anchor="middle" dominant-baseline="middle" '
                    f'font-family="monospace" font-size="{min(pw, ph) / 8:.2f}">'
                    f"{escape(d.variable_names[row])}</text>"
                )
            elif row > col:
                for i in range(d.n):
                    xa = sx(col, x0, lower[i, col])
                    xb = sx(col, x0, upper[i, col])
                    ya = sy(row, y0, upper[i, row])
                    yb = sy(row, y0, lower[i, row])
                    out.append(
                        f'<rect class="obj" x="{xa:.2f}" y="{ya:.2f}" '
                        f'width="{xb - xa:.2f}" height="{yb - ya:.2f}" '
                        f'fill="none" stroke="{colors[i]}" stroke-width="1"/>'
                    )
            else:
                line_h = ph / (len(spec.k_list) + 1)
                for li, k in enumerate(spec.k_list):
                    # Upper panel (row i, col j) shows the (i, j) correlations.
                    value = cors[k][row, col]
                    out.append(
                        f'<text class="cor" x="{x0 + pw / 2:.2f}" '
                        f'y="{y0 + (li + 1) * line_h:.2f}" text-anchor="middle" '
                        f'font-family="monospace" font-size="{min(line_h * 0.7, pw / 8):.2f}">'
                        f"k={k}: {value:+.3f}</text>"
                    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
