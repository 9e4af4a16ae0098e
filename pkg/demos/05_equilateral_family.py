"""An experimental family of planar bodies that are (approximately)
pairwise equidistant in the Banach-Mazur metric.

The target spacing for families built over N coordinate flats is
1/cos^2(pi/4N); for N = 2 that is about 1.17157.  The construction is
experimental: mutual agreement of the pairwise distances is the claim,
closeness to the target is only reported.
"""
import itertools

from bmdist import equilateral_family, equilateral_target, estimate_distance

family = equilateral_family(2, 4)
target = equilateral_target(2)
print("target spacing:", round(target, 6))

vals = []
for i, j in itertools.combinations(range(len(family)), 2):
    est = estimate_distance(family[i], family[j], restarts=60, seed=0)
    vals.append(est.upper)
    print(f"d(K{i}, K{j}) = {est.upper:.5f}")

print("spread:", round(max(vals) - min(vals), 5))
print("mean offset from target:", round(sum(vals) / len(vals) - target, 5))
