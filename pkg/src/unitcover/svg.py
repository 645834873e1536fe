"""Minimal SVG scenes: points, disks and an optional lattice overlay.

The overlay draws the radius-``rho`` disks of the translated hexagonal
lattice.  Uncovered area (R0) is the tinted background showing through;
doubly covered lenses (R2) are shaded by clipping each disk to its
neighbours.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .geometry import Disk, as_points

SQRT3 = math.sqrt(3.0)

R0_FILL = "#f3c6c6"
R1_FILL = "#ffffff"
R2_FILL = "#9cc3e6"


def _lattice_centers(rho: float, t, box) -> list[tuple[float, float]]:
    x0, y0, x1, y1 = box
    out = []
    jlo, jhi = math.floor((x0 - t[0] - rho) / SQRT3) - 1, math.ceil((x1 - t[0] + rho) / SQRT3) + 1
    for j in range(jlo, jhi + 1):
        cx = t[0] + SQRT3 * j
        base = t[1] + j
        ilo, ihi = math.floor((y0 - base - rho) / 2) - 1, math.ceil((y1 - base + rho) / 2) + 1
        for i in range(ilo, ihi + 1):
            out.append((cx, base + 2 * i))
    return out


def render_svg(
    points=(),
    disks=(),
    lattice: tuple[float, tuple[float, float]] | None = None,
    box: tuple[float, float, float, float] | None = None,
    size: int = 600,
    title: str | None = None,
) -> str:
    """SVG text for the scene; ``lattice`` is ``(rho, translation)``."""
    P = as_points(points)
    disks = list(disks)
    if box is None:
        xs, ys = list(P[:, 0]), list(P[:, 1])
        for d in disks:
            xs += [d.center.x - d.radius, d.center.x + d.radius]
            ys += [d.center.y - d.radius, d.center.y + d.radius]
        if not xs:
            xs, ys = [-3.0, 3.0], [-3.0, 3.0]
        pad = 0.25
        box = (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)
    x0, y0, x1, y1 = box
    w, h = x1 - x0, y1 - y0
    scale = size / max(w, h)
    dot = 3.0 / scale
    stroke = 1.0 / scale
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * scale:.0f}" height="{h * scale:.0f}" '
        f'viewBox="{x0} {-y1} {w} {h}">'
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append('<g transform="scale(1,-1)">')
    if lattice is not None:
        rho, t = lattice
        cs = _lattice_centers(rho, t, box)
        out.append(f'<rect class="R0" x="{x0}" y="{y0}" width="{w}" height="{h}" fill="{R0_FILL}"/>')
        out.append('<g class="R1">')
        out += [f'<circle cx="{cx}" cy="{cy}" r="{rho}" fill="{R1_FILL}"/>' for cx, cy in cs]
        out.append("</g><defs>")
        out += [f'<clipPath id="lc{k}"><circle cx="{cx}" cy="{cy}" r="{rho}"/></clipPath>' for k, (cx, cy) in enumerate(cs)]
        out.append('</defs><g class="R2">')
        C = np.array(cs)
        for a in range(len(cs)):
            d = np.hypot(*(C - C[a]).T)
            for b in np.flatnonzero((d > 0) & (d < 2 * rho)):
                if b > a:
                    out.append(
                        f'<circle cx="{cs[b][0]}" cy="{cs[b][1]}" r="{rho}" fill="{R2_FILL}" clip-path="url(#lc{a})"/>'
                    )
        out.append("</g>")
        out.append('<g class="lattice" fill="none" stroke="#777">')
        out += [f'<circle cx="{cx}" cy="{cy}" r="{rho}" stroke-width="{stroke}"/>' for cx, cy in cs]
        out.append("</g>")
    out.append('<g class="disks" fill="none" stroke="#1f4e9c">')
    for d in disks:
        out.append(f'<circle cx="{d.center.x}" cy="{d.center.y}" r="{d.radius}" stroke-width="{2 * stroke}"/>')
    out.append("</g>")
    out.append('<g class="points" fill="#000">')
    out += [f'<circle cx="{x}" cy="{y}" r="{dot}"/>' for x, y in P]
    out.append("</g></g></svg>")
    return "\n".join(out) + "\n"
