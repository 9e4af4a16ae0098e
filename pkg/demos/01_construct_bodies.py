"""Build convex bodies, serialize them, and draw an overlay.

Run from the repository root:  python3 demos/01_construct_bodies.py
Writes bodies.svg next to this script.
"""
import os

import numpy as np

from bmdist import (
    body_to_json,
    cross_polytope,
    cube,
    hanner,
    hanner_leaves,
    lp_sum,
    regular_polygon,
    render_svg,
    segment,
)

here = os.path.dirname(os.path.abspath(__file__))

# The catalogue covers the usual suspects.
square = cube(2)
diamond = cross_polytope(2)
hexagon = regular_polygon(6)
print("square vertices:\n", square.vertices)
print("hexagon is symmetric:", hexagon.symmetric)

# Hanner polytopes come from a tiny grammar: seg, l1(...), linf(...).
# l1 takes convex hulls of embedded summands, linf takes products.
h3 = hanner("l1(linf(seg,seg),seg)")
print("l1(linf(seg,seg),seg) has", len(h3.vertices), "vertices in dim",
      h3.dim, "and", hanner_leaves("l1(linf(seg,seg),seg)"), "leaves")

# General lp-sums stay symbolic (no vertex set for 1 < p < inf); their
# gauge combines the children's gauges by the lp rule.
K = lp_sum([diamond, segment()], 4)
x = np.array([0.3, 0.2, 0.9])
print("gauge of the 4-sum at", x, "=", K.gauge(x))

# Bodies round-trip through JSON.
text = body_to_json(hexagon, indent=2)
print("hexagon JSON starts with:", text.splitlines()[0:3])

out = os.path.join(here, "bodies.svg")
render_svg([square, diamond, hexagon], out)
print("wrote", out)
