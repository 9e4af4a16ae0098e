"""Deterministic SVG rendering of planar bodies.

Output depends only on the bodies passed in: floats are printed with nine
significant digits, the viewBox is the joint bounding box plus a 5% margin,
and stroke styles cycle solid, dashed, dotted.  Polytopes get a dot on each
vertex; smooth bodies are outlined by sampling their gauge and drawn without
dots.
"""
from __future__ import annotations

import numpy as np

from .bodies import as_polytope
from .errors import MalformedSpec, NotPlanar, NotVertexEnumerable

PALETTE = ("#1f6f8b", "#c2571a", "#3c7a3c", "#7a3c78", "#8b1f2f", "#55524e")
SMOOTH_SAMPLES = 256


def _fmt(x: float) -> str:
    s = f"{float(x):.9g}"
    return "0" if s == "-0" else s


def _outline(body):
    """Closed boundary points in drawing order, plus vertex dots (or None)."""
    if body.dim != 2:
        raise NotPlanar(f"can only render planar bodies, got dimension {body.dim}")
    try:
        P = as_polytope(body)
    except NotVertexEnumerable:
        ang = np.linspace(0.0, 2.0 * np.pi, SMOOTH_SAMPLES, endpoint=False)
        dirs = np.column_stack([np.cos(ang), np.sin(ang)])
        radii = np.array([1.0 / body.gauge(u) for u in dirs])
        return radii[:, None] * dirs, None
    V = P.vertices
    centered = V - V.mean(axis=0)
    order = np.lexsort((np.hypot(*centered.T), np.arctan2(centered[:, 1], centered[:, 0])))
    return V[order], V[order]


def render_svg(bodies, path=None) -> str:
    """Render an overlay of planar bodies; write to `path` when given."""
    bodies = list(bodies)
    if not bodies:
        raise MalformedSpec("render needs at least one body")
    outlines = [_outline(b) for b in bodies]

    stacked = np.vstack([pts for pts, _ in outlines])
    lo = stacked.min(axis=0)
    hi = stacked.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    margin = 0.05 * span
    lo -= margin
    hi += margin
    width, height = hi - lo
    diag = float(np.hypot(width, height))
    stroke = 0.006 * diag
    dot = 0.009 * diag

    # y is flipped before emission so the geometry reads the usual way up.
    view = " ".join(_fmt(v) for v in (lo[0], -hi[1], width, height))
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{view}" width="640" height="{_fmt(640.0 * height / width)}">'
    ]
    styles = (
        "",
        f' stroke-dasharray="{_fmt(5 * stroke)} {_fmt(2.5 * stroke)}"',
        f' stroke-dasharray="{_fmt(stroke / 2)} {_fmt(2 * stroke)}"'
        ' stroke-linecap="round"',
    )
    for i, (pts, dots) in enumerate(outlines):
        color = PALETTE[i % len(PALETTE)]
        closed = np.vstack([pts, pts[:1]])
        coords = " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in closed)
        lines.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{_fmt(stroke)}"{styles[i % 3]}/>'
        )
        if dots is not None:
            for x, y in dots:
                lines.append(
                    f'<circle cx="{_fmt(x)}" cy="{_fmt(-y)}" r="{_fmt(dot)}" '
                    f'fill="{color}"/>'
                )
    lines.append("</svg>")
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)
    return text
