"""SVG pictures of the cells of a weight complex.

Drawings use the triangle with ``x1 = (0, 0)``, ``x2 = (4, 0)`` and
``x0 = (2, 4)``.  One unit is ``SCALE`` pixels, the y axis points up and the
picture sits in a fixed ``VIEW`` x ``VIEW`` box with a ``MARGIN`` border.
"""

from __future__ import annotations

from fractions import Fraction

from .geometry import DofComplex, Triangle

SCALE = 100
MARGIN = 20
VIEW = 4 * SCALE + 2 * MARGIN

DRAWING_TRIANGLE = Triangle(((2, 4), (0, 0), (4, 0)))

_FILLS = ("#f2f2f2", "#dde8f5", "#f5e6d8", "#e3f2e1", "#efe0f0", "#f7f3d0")


def _xy(tri: Triangle, pt) -> tuple[float, float]:
    x, y = tri.to_cart(pt)
    return float(MARGIN + SCALE * Fraction(x)), float(VIEW - MARGIN - SCALE * Fraction(y))


def _pt(p: tuple[float, float]) -> str:
    return f"{p[0]!r},{p[1]!r}"


def cells_svg(cx: DofComplex) -> str:
    """Filled 2-cells, stroked 1-cells, black lattice nodes and gray Gamma markers."""
    tri = cx.tri
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{VIEW}" height="{VIEW}" '
        f'viewBox="0 0 {VIEW} {VIEW}">',
        f'<title>cells for r={cx.r}</title>',
        '<g id="cells">',
    ]
    for i, cell in enumerate(cx.F2):
        pts = " ".join(_pt(_xy(tri, p)) for p in cell.polygon)
        out.append(f'<polygon points="{pts}" fill="{_FILLS[i % len(_FILLS)]}" '
                   f'stroke="black" stroke-width="2"/>')
    out.append("</g>")
    out.append('<g id="edges" stroke="black" stroke-width="0.75">')
    for e in cx.F1:
        (x1, y1), (x2, y2) = (_xy(tri, p) for p in e.points)
        out.append(f'<line x1="{x1!r}" y1="{y1!r}" x2="{x2!r}" y2="{y2!r}"/>')
    out.append("</g>")
    out.append('<g id="lattice" fill="black">')
    for p in cx.F0:
        x, y = _xy(tri, p)
        out.append(f'<circle cx="{x!r}" cy="{y!r}" r="2.5"/>')
    out.append("</g>")
    out.append('<g id="gamma" fill="gray" stroke="black" stroke-width="0.5">')
    for cell in cx.F2:
        if cell.anchor is not None:
            x, y = _xy(tri, cell.anchor)
            out.append(f'<circle cx="{x!r}" cy="{y!r}" r="6"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
