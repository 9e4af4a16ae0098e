"""Estimate Banach-Mazur distances numerically and check the witness.

The estimator runs multi-start Nelder-Mead over positioned pairs and
returns an upper bound together with the map that achieves it.  For
symmetric pairs the search is linear; otherwise translations join in.
"""
import numpy as np

from bmdist import (
    cross_polytope,
    cube,
    estimate_distance,
    position_ratio,
    regular_polygon,
    verify_chain,
)

# In the plane, the square IS the rotated cross-polytope: distance 1.
est = estimate_distance(cube(2), cross_polytope(2), restarts=40)
print(f"d(square, diamond)   = {est.upper:.6f}   (exact: 1)")

# The regular hexagon is as far from the diamond as any planar symmetric
# body gets: 3/2.
est = estimate_distance(regular_polygon(6), cross_polytope(2), restarts=60)
print(f"d(hexagon, diamond)  = {est.upper:.6f}   (exact: 1.5)")

# Cube vs cross-polytope in R^3: the classical value is 9/5.
est = estimate_distance(cross_polytope(3), cube(3), restarts=200, seed=7)
print(f"d(cross3, cube3)     = {est.upper:.6f}   (exact: 1.8)")
print("witness matrix:\n", np.round(est.witness.matrix, 4))
print("residual of the scaled inclusion:", est.residual)

# The returned witness is replayable: K subset T(L) subset rho K.
ok = verify_chain(cross_polytope(3), cube(3), est.witness, est.upper + 1e-9)
print("verify_chain at the witness:", ok)
print("position_ratio recomputed:",
      round(position_ratio(cross_polytope(3), cube(3), est.witness), 6))
