"""Exact certificates for distances to the Euclidean ball.

A position r B2 <= K <= R B2 is optimal exactly when some inner and outer
contact points admit a matching rank-one decomposition with positive
weights.  The certificate is found by a small LP over the contact points
and can be replayed with plain arithmetic: no optimizer in the loop.
"""
import math

import numpy as np

from bmdist import (
    certify_euclidean_distance,
    cube,
    find_contacts,
    hanner,
    hanner_optimal_position,
    verify_certificate,
)
from bmdist.bodies import Polytope
from bmdist.errors import NotOptimalPosition

# The square in its natural position: r = 1, R = sqrt(2), certified.
cert = certify_euclidean_distance(cube(2))
print(f"square: value = {cert.value:.12f}  (sqrt(2) = {math.sqrt(2):.12f})")
print("residual:", cert.certificate.residual)
print("replay:", verify_certificate(cert.certificate)["ok"])

# Hanner polytopes in the recursive optimal position certify at sqrt(n).
for spec in ("l1(seg,seg)", "l1(linf(seg,seg),seg)", "linf(l1(seg,seg),l1(seg,seg))"):
    P, target = hanner_optimal_position(spec)
    cert = certify_euclidean_distance(P)
    print(f"{spec:35s} value={cert.value:.9f} target={target:.9f} "
          f"residual={cert.certificate.residual:.2e}")

# Contact points are where the body touches the two balls.
P, _ = hanner_optimal_position("l1(seg,seg)")
r, R, inner, outer = find_contacts(P)
print("diamond contacts: r =", round(r, 12), "inner:", len(inner),
      "outer:", len(outer))

# A skewed square is NOT optimally positioned; certification refuses.
skew = Polytope(cube(2).vertices @ np.diag([2.0, 1.0]))
try:
    certify_euclidean_distance(skew)
except NotOptimalPosition as exc:
    print("skewed square rejected:", str(exc)[:72], "...")
