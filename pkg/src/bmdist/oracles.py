"""Closed-form distance values, executable lemma checkers, and randomized
theorem suites.

The closed forms are the independent ground truth the numerical engine is
measured against.  The lemma checkers turn existence statements into decision
procedures on concrete instances: hypotheses are verified by membership LPs
and a failed conclusion is an implementation failure, surfaced loudly, never
swallowed.  Suites run randomized desk-scale instances of the distance
identities and report per-case residuals as JSON-friendly records.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .bodies import LinearMap, Polytope, as_polytope
from .constructions import (
    cone,
    cross_polytope,
    double_cone,
    equilateral_family,
    equilateral_target,
    regular_polygon,
    simplex_regular_centered,
)
from .distance import estimate_distance, verify_chain
from .errors import (
    HypothesisViolated,
    InvalidP,
    NoConditionHolds,
    UnknownSuite,
)
from .lp import convex_membership

# Membership tolerance for hypothesis checks.
HYP_TOL = 1e-9


def _coerce_polytope(body) -> Polytope:
    """Accept a Body or a raw vertex array; degenerate hulls are fine."""
    if isinstance(body, (list, tuple, np.ndarray)):
        return Polytope(np.atleast_2d(np.asarray(body, dtype=float)))
    return as_polytope(body)


# ---------------------------------------------------------------------------
# closed forms


def _check_p(p) -> float:
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise InvalidP(f"p must lie in [1, inf], got {p!r}")
    return p


def thm_lp_sum_to_euclidean(d, p) -> float:
    """Distance of an lp-sum to the Euclidean space of matching dimension,
    from the summands' individual distances d_i >= 1.

    Equals ||d||_r with r = 2p/|p-2|, under the conventions r = inf at p = 2
    (so the value is max(d)) and r = 2 at p in {1, inf} (Euclidean norm).
    """
    p = _check_p(p)
    d = np.asarray(d, dtype=float).ravel()
    if d.size == 0:
        raise HypothesisViolated("need at least one summand distance")
    if d.min() < 1.0 - 1e-12:
        raise HypothesisViolated(f"summand distances must be >= 1, got {d.min()}")
    if p == 2.0:
        return float(d.max())
    if p == 1.0 or math.isinf(p):
        return float(np.linalg.norm(d))
    r = 2.0 * p / abs(p - 2.0)
    return float((d**r).sum() ** (1.0 / r))


def ntj_value(n: int, p) -> float:
    """Distance of n-dimensional lp space to Euclidean space for 1 < p <= 2:
    n^((2-p)/p).  Coincides with the lp-sum formula applied to n segments,
    an identity the tests pin down numerically.

    The exponent is reconstructed as a rational before the single float
    rounding; p almost always began life as a simple ratio, and compounding
    three roundings would spoil exact values like ntj(4, 4/3) = 2.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    p = float(p)
    if not 1.0 < p <= 2.0:
        raise InvalidP(f"the closed form needs p in (1, 2], got {p!r}")
    exponent = 2 / Fraction(p).limit_denominator(10**9) - 1
    return float(n) ** float(exponent)


def hanner_distance(n: int) -> float:
    """Distance of any n-dimensional Hanner polytope to the Euclidean ball."""
    if n < 1:
        raise ValueError(f"dimension must be positive, got {n!r}")
    return math.sqrt(n)


# ---------------------------------------------------------------------------
# lemma checkers


def _same_vertex_sets(A, B, tol=1e-9) -> bool:
    if A.shape != B.shape:
        return False
    order_a = np.lexsort(np.round(A / tol).T)
    order_b = np.lexsort(np.round(B / tol).T)
    return bool(np.allclose(A[order_a], B[order_b], atol=10 * tol, rtol=0.0))


def lemma_vertex_absorbing_check(B1, B2, v, T, symmetric: bool = False) -> bool:
    """Vertex absorption under a linear map.

    Hypotheses (each verified, HypothesisViolated names the failing one):
    B1 inside conv(B2 u {v}) (u {+-v} when `symmetric` and both bodies are
    0-symmetric), v outside B1, and T(v) inside T(B1).  Returns whether
    T(conv(B2 u {v})) equals T(B2) as pruned vertex sets.  A False return is
    an implementation failure, not a property of the input.
    """
    P1 = _coerce_polytope(B1)
    P2 = _coerce_polytope(B2)
    v = np.asarray(v, dtype=float).ravel()
    T = np.atleast_2d(np.asarray(T, dtype=float))
    if symmetric and not (P1.symmetric and P2.symmetric):
        raise HypothesisViolated("symmetric variant needs 0-symmetric bodies")
    hull_pts = np.vstack([P2.vertices, v[None, :], -v[None, :]] if symmetric
                         else [P2.vertices, v[None, :]])
    for x in P1.vertices:
        if convex_membership(hull_pts, x, tol=HYP_TOL) is None:
            raise HypothesisViolated(
                "B1 is not contained in the hull of B2 and the vertex"
            )
    if convex_membership(P1.vertices, v, tol=HYP_TOL) is not None:
        raise HypothesisViolated("the vertex v lies in B1")
    if convex_membership(P1.vertices @ T.T, T @ v, tol=HYP_TOL) is None:
        raise HypothesisViolated("T(v) does not lie in T(B1)")

    with_v = Polytope(np.vstack([P2.vertices, v[None, :]]) @ T.T, prune=True)
    without = Polytope(P2.vertices @ T.T, prune=True)
    return _same_vertex_sets(with_v.vertices, without.vertices)


def lemma_proj_construct(B, d, u, v) -> np.ndarray:
    """Projection onto the base hyperplane absorbing a cone vertex.

    B is an (n-1)-dimensional body in {x_n = 0} containing 0, d in [1, 2],
    and u shifts the cone C = conv((B+u) u {e_n + u}) so that 0 in C.  For
    any v in dC with v_n >= u_n + 1, returns the matrix of
    P(x) = x - x_n * w,  w = e_n + proj(u) / (v_n - u_n),
    after verifying the promised memberships P(e_n) in B and P(v-u) in B.
    """
    PB = _coerce_polytope(B)
    V = PB.vertices
    n = PB.dim
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    d = float(d)
    if np.abs(V[:, -1]).max() > 1e-12:
        raise HypothesisViolated("B must lie in the hyperplane x_n = 0")
    if np.linalg.matrix_rank(V - V.mean(axis=0), tol=1e-9) != n - 1:
        raise HypothesisViolated("B must be (n-1)-dimensional")
    if convex_membership(V, np.zeros(n), tol=HYP_TOL) is None:
        raise HypothesisViolated("B must contain the origin")
    if not 1.0 - 1e-12 <= d <= 2.0 + 1e-12:
        raise HypothesisViolated(f"d must lie in [1, 2], got {d}")
    en = np.zeros(n)
    en[-1] = 1.0
    cone_pts = np.vstack([V + u, (en + u)[None, :]])
    if convex_membership(cone_pts, np.zeros(n), tol=HYP_TOL) is None:
        raise HypothesisViolated("the shifted cone must contain the origin")
    if convex_membership(cone_pts, v / d, tol=HYP_TOL) is None:
        raise HypothesisViolated("v must lie in d times the cone")
    if v[-1] < u[-1] + 1.0 - 1e-12:
        raise HypothesisViolated("v_n must be at least u_n + 1")

    w = en.copy()
    w[:-1] += u[:-1] / (v[-1] - u[-1])
    P = np.eye(n) - np.outer(w, en)
    # w_n = 1 makes P idempotent onto x_n = 0.
    if not np.allclose(P @ P, P, atol=1e-12):
        raise RuntimeError("projection is not idempotent; construction broken")
    for name, point in (("P(e_n)", P @ en), ("P(v-u)", P @ (v - u))):
        if convex_membership(V, point, tol=HYP_TOL) is None:
            raise RuntimeError(
                f"{name} fell outside the base; the construction violated "
                "its own postcondition"
            )
    return P


def _in_triangle(x, a, b, c, tol=1e-9):
    """Barycentric membership of x in triangle (a, b, c)."""
    M = np.column_stack([b - a, c - a])
    try:
        st = np.linalg.solve(M, x - a)
    except np.linalg.LinAlgError:
        return False
    s, t = st
    return s >= -tol and t >= -tol and s + t <= 1.0 + tol


def lemma_triangles_check(y, d, S):
    """Locate a triangle vertex parameter mu < 4/3 for a sandwiched triangle.

    T is the triangle with vertices y - e1, y + e1, y + e2 and must contain
    the origin; S = (v, v', v'') satisfies T <= S <= dT for d in [1, 3/2],
    with v on the segment [d(y - e1), d y] and v'_2 >= v''_2.  Returns
    {"condition": "i" | "ii", "mu": float} where condition (i) means
    v'_2 + mu (v''_2 - v'_2) = v_2 with mu in [1, 4/3) and condition (ii)
    places the parallel-line intersection z at z_1 = y_1 + 2 mu - 1 with
    mu in [1/2, 4/3).  Valid input always admits one; NoConditionHolds
    firing means the implementation, not the input, is wrong.
    """
    y = np.asarray(y, dtype=float).ravel()
    S = np.atleast_2d(np.asarray(S, dtype=float))
    if y.shape != (2,) or S.shape != (3, 2):
        raise HypothesisViolated("y must be a 2-vector and S a triangle")
    d = float(d)
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.0, 1.0])
    t0, t1, t2 = y - e1, y + e1, y + e2
    if not _in_triangle(np.zeros(2), t0, t1, t2, tol=HYP_TOL):
        raise HypothesisViolated("the base triangle must contain the origin")
    if not 1.0 - 1e-12 <= d <= 1.5 + 1e-12:
        raise HypothesisViolated(f"d must lie in [1, 3/2], got {d}")
    v, vp, vpp = S
    for corner in (t0, t1, t2):
        if not _in_triangle(corner, *S, tol=HYP_TOL):
            raise HypothesisViolated("T is not contained in S")
    for corner in S:
        if not _in_triangle(corner / d, t0, t1, t2, tol=HYP_TOL):
            raise HypothesisViolated("S is not contained in d T")
    # v on the horizontal segment [d(y - e1), d y].
    if abs(v[1] - d * y[1]) > 1e-9 or not (
        d * (y[0] - 1.0) - 1e-9 <= v[0] <= d * y[0] + 1e-9
    ):
        raise HypothesisViolated("v must lie on the segment [d(y-e1), dy]")
    if vp[1] < vpp[1] - 1e-12:
        raise HypothesisViolated("vertices must be ordered with v'_2 >= v''_2")

    denom = vpp[1] - vp[1]
    if abs(denom) > 1e-12:
        mu = (v[1] - vp[1]) / denom
        if 1.0 - 1e-9 <= mu < 4.0 / 3.0 - 1e-10:
            return {"condition": "i", "mu": float(max(mu, 1.0))}
    elif abs(v[1] - vp[1]) <= 1e-9:
        return {"condition": "i", "mu": 1.0}

    incline = vpp - vp
    if abs(incline[1]) > 1e-12:
        # Line through y + e2 with direction v'' - v' meets x_2 = y_2 after
        # one unit of descent, at z_1 = y_1 - incline_1 / incline_2.
        z1 = y[0] - incline[0] / incline[1]
        mu = (z1 - y[0] + 1.0) / 2.0
        if 0.5 - 1e-9 <= mu < 4.0 / 3.0 - 1e-10:
            return {"condition": "ii", "mu": float(mu)}
    raise NoConditionHolds(
        "no admissible mu found; this must never happen on valid input"
    )


# ---------------------------------------------------------------------------
# random instance generators (shared by suites and property tests)


def random_symmetric_polygon(rng) -> Polytope:
    """Symmetric polygon from 3 to 5 direction pairs with radii in [0.5, 1].
    Directions are resampled until reasonably spread, which keeps bodies
    well-conditioned and inside every planar hypothesis bound."""
    rng = np.random.default_rng(rng)
    while True:
        k = int(rng.integers(3, 6))
        ang = np.sort(rng.uniform(0.0, np.pi, k))
        gaps = np.diff(np.concatenate([ang, [ang[0] + np.pi]]))
        if gaps.min() < 0.25:
            continue
        rad = rng.uniform(0.5, 1.0, k)
        pts = rad[:, None] * np.column_stack([np.cos(ang), np.sin(ang)])
        return Polytope(np.vstack([pts, -pts]), symmetric=True, prune=True)


def random_absorbing_instance(rng, symmetric=None):
    """(B1, B2, v, T, symmetric) satisfying every absorption hypothesis.

    B2 is a random polygon, v sits strictly outside it, B1 is a shrunk copy
    of the joint hull, and T kills the direction of v so that T(v) = 0 lands
    in T(B1)."""
    rng = np.random.default_rng(rng)
    if symmetric is None:
        symmetric = bool(rng.integers(0, 2))
    if symmetric:
        B2 = random_symmetric_polygon(rng)
    else:
        pts = rng.uniform(-1.0, 1.0, (6, 2))
        pts -= pts.mean(axis=0)
        B2 = Polytope(pts, prune=True)
    theta = rng.uniform(0.0, 2.0 * np.pi)
    direction = np.array([math.cos(theta), math.sin(theta)])
    v = direction * rng.uniform(1.5, 3.0) / B2.gauge(direction)
    hull = np.vstack([B2.vertices, v[None, :], -v[None, :]] if symmetric
                     else [B2.vertices, v[None, :]])
    shrink = rng.uniform(0.7, 0.95)
    B1 = Polytope(shrink * hull, symmetric=symmetric or None, prune=True)
    # Oblique projection with kernel through v, then a random invertible mix.
    k = direction + rng.uniform(-0.3, 0.3, 2)
    proj = np.eye(2) - np.outer(v, k) / (k @ v)
    while True:
        M = rng.uniform(-1.0, 1.0, (2, 2))
        if abs(np.linalg.det(M)) > 0.2:
            break
    return B1, B2, v, M @ proj, symmetric


def random_projection_instance(rng):
    """(B, d, u, v) satisfying the cone-projection hypotheses in R^3."""
    rng = np.random.default_rng(rng)
    flat = random_symmetric_polygon(rng)
    B = Polytope(np.hstack([flat.vertices, np.zeros((len(flat.vertices), 1))]),
                 prune=False)
    d = float(rng.uniform(1.0, 2.0))
    weights = rng.dirichlet(np.ones(len(B.vertices)))
    b = weights @ B.vertices
    t = float(rng.uniform(0.05, 0.95))
    e3 = np.array([0.0, 0.0, 1.0])
    u = -((1.0 - t) * b + t * e3)
    # v = d * (point of the cone high enough that v_3 >= u_3 + 1).
    s_min = (1.0 + (1.0 - d) * u[2]) / d
    s = float(rng.uniform(min(s_min, 1.0), 1.0))
    base_pt = rng.dirichlet(np.ones(len(B.vertices))) @ B.vertices
    v = d * ((1.0 - s) * (base_pt + u) + s * (e3 + u))
    return B, d, u, v


def random_triangle_instance(rng):
    """(y, d, S) satisfying the sandwiched-triangle hypotheses, by biased
    rejection sampling around the scaled copy dT."""
    rng = np.random.default_rng(rng)
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.0, 1.0])
    while True:
        y2 = rng.uniform(-0.9, 0.0)
        y1 = rng.uniform(-1.0, 1.0) * (1.0 + y2) * 0.9
        y = np.array([y1, y2])
        d = float(rng.uniform(1.0, 1.5))
        T = np.array([y - e1, y + e1, y + e2])
        dT = d * T
        v = dT[0] + rng.uniform(0.0, 1.0) * (dT[1] - dT[0]) * rng.uniform(0.0, 0.5)
        # Bias v' toward the top corner; v'' alternates between the right
        # corner and the top, the latter forcing the parallel-line condition.
        wp = rng.dirichlet([1.0, 1.0, 20.0])
        if rng.uniform() < 0.4:
            wpp = rng.dirichlet([1.0, 3.0, 12.0])
        else:
            wpp = rng.dirichlet([1.0, 20.0, 1.0])
        vp = wp @ dT
        vpp = wpp @ dT
        if vp[1] < vpp[1]:
            vp, vpp = vpp, vp
        S = np.array([v, vp, vpp])
        ok = all(_in_triangle(c, *S, tol=-1e-7) for c in T)
        ok = ok and abs(v[1] - d * y[1]) <= 1e-12
        if ok:
            return y, d, S


# ---------------------------------------------------------------------------
# theorem suites


@dataclass
class SuiteConfig:
    cases: int = 10
    seed: int = 0
    tol: float = 0.03
    restarts: int = 80
    max_iters: int = 2000
    # Restart budget for the lifted (cone) side of a comparison, whose search
    # space is larger and whose start is seeded from the base witness anyway.
    # None: restarts // 5, at least 10.
    lift_restarts: int | None = None


@dataclass
class SuiteCase:
    seed: int
    lhs: float
    rhs: float
    residual: float
    passed: bool
    chain: bool | None = None

    def to_dict(self):
        d = {
            "seed": self.seed,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "pass": self.passed,
        }
        if self.chain is not None:
            d["chain"] = self.chain
        return d


@dataclass
class Report:
    suite: str
    cases: list
    summary: dict

    def to_dict(self):
        return {
            "suite": self.suite,
            "cases": [c.to_dict() for c in self.cases],
            "summary": self.summary,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _summarize(cases, tol, extra=None):
    # Aggregation is order-independent: cases are keyed and sorted by seed.
    cases = sorted(cases, key=lambda c: c.seed)
    residuals = [abs(c.residual) for c in cases]
    summary = {
        "cases": len(cases),
        "passed": sum(c.passed for c in cases),
        "failed": sum(not c.passed for c in cases),
        "max_residual": max(residuals) if residuals else 0.0,
        "tol": tol,
        # A genuine violation needs both a blown tolerance and a broken
        # witness chain; lone residuals are engine non-convergence.
        "violations": sum(
            (not c.passed) and (c.chain is False) for c in cases
        ),
    }
    if extra:
        summary.update(extra)
    return cases, summary


def _embed_plane(P: Polytope, n: int) -> Polytope:
    V = P.vertices
    pad = np.zeros((V.shape[0], n - V.shape[1]))
    return Polytope(np.hstack([V, pad]), prune=False)


def _centered(P: Polytope) -> Polytope:
    """Centroid at the origin; the engine needs an interior origin and the
    distance is translation-invariant."""
    V = P.vertices
    return Polytope(V - V.mean(axis=0), prune=False)


def _axis_apexes(n: int, m: int):
    return [np.eye(n)[j] for j in range(n - m, n)]


def _est(K, L, cfg: SuiteConfig, seed: int, restarts=None, inits=()):
    return estimate_distance(
        K,
        L,
        restarts=cfg.restarts if restarts is None else restarts,
        seed=seed,
        max_iters=cfg.max_iters,
        inits=tuple(inits),
    )


def _lift_restarts(cfg: SuiteConfig) -> int:
    if cfg.lift_restarts is not None:
        return cfg.lift_restarts
    return max(10, cfg.restarts // 5)


def _affine_between(src, dst):
    """The affine map A x + b sending each src row to the dst row (exact when
    such a map exists; rows must affinely span the space)."""
    src = np.asarray(src, float)
    dst = np.asarray(dst, float)
    ext = np.hstack([src, np.ones((len(src), 1))])
    sol, _, _, _ = np.linalg.lstsq(ext, dst, rcond=None)
    return sol[:-1].T, sol[-1]


def _shear_to_apex(apex):
    """Linear map fixing the plane x3 = 0 and sending e3 to the apex; it
    carries the cone with apex e3 over any planar base to the cone with the
    given apex over the same base."""
    S = np.eye(3)
    S[:2, 2] = apex[:2]
    S[2, 2] = apex[2]
    return S


def _pad3(V):
    return np.hstack([V, np.zeros((len(V), 1))])


def _cone_lift_witness(base, apex, C, w, base_target, cone_target):
    """Starting position for (centered C, cone_target) lifted from a planar
    witness  base + u  in  M(base_target + v)  in  rho (base + u).

    Over standardized apexes the lift is the planar chain coned (inclusions
    survive taking hulls with a shared apex); conjugating by the affine maps
    that carry those standardized cones onto the actual bodies, and folding
    every translation into the two allowed body translations, gives a
    position of (centered C, cone_target) at the same ratio.
    """
    e3 = np.eye(3)[2]
    c = C.vertices.mean(axis=0)
    # F: cone(base + u, e3) -> centered C, vertex by vertex.
    FA, fb = _affine_between(
        np.vstack([_pad3(base.vertices + w.pre_translate), [e3]]),
        np.vstack([_pad3(base.vertices), [apex]]) - c,
    )
    # G: cone(base_target, e3) -> cone_target.
    GA, gb = _affine_between(
        np.vstack([_pad3(base_target.vertices), [e3]]),
        cone_target.vertices,
    )
    # Lam: cone(base_target, e3) -> cone(M (base_target + v), e3).
    M2, v2 = w.matrix, w.post_translate
    lam = np.eye(3)
    lam[:2, :2] = M2
    lam[:2, 2] = -M2 @ v2
    lam_b = np.concatenate([M2 @ v2, [0.0]])
    Ginv = np.linalg.inv(GA)
    N = FA @ lam @ Ginv
    h0 = FA @ (lam_b - lam @ (Ginv @ gb))
    return LinearMap(N, pre_translate=-fb,
                     post_translate=np.linalg.solve(N, h0))


def _block_witness(matrix2, m):
    M = np.eye(2 + m)
    M[:2, :2] = matrix2
    return LinearMap(M)


def _suite_l1_sum(cfg: SuiteConfig):
    """Double cone over X vs the cross-polytope one dimension up; the first
    case is the regular hexagon, the planar body farthest from the
    cross-polytope."""
    out = []
    for i in range(cfg.cases):
        seed = cfg.seed + i
        X = regular_polygon(6) if i == 0 else random_symmetric_polygon(
            np.random.default_rng([cfg.seed, i])
        )
        rhs_est = _est(X, cross_polytope(2), cfg, seed)
        C = double_cone(_embed_plane(X, 3), _axis_apexes(3, 1))
        lhs_est = _est(C, cross_polytope(3), cfg, seed,
                       inits=(_block_witness(rhs_est.witness.matrix, 1),))
        chain = verify_chain(
            C,
            cross_polytope(3),
            _block_witness(rhs_est.witness.matrix, 1),
            rhs_est.upper + 1e-9,
        )
        res = lhs_est.upper - rhs_est.upper
        out.append(
            SuiteCase(seed, lhs_est.upper, rhs_est.upper, res,
                      abs(res) <= cfg.tol, chain)
        )
    return _summarize(out, cfg.tol)


def _suite_simplex(cfg: SuiteConfig):
    """Single cone over a planar base vs the simplex one dimension up.  The
    base hypothesis (distance to the triangle at most 2) holds exactly for
    symmetric bases; the estimate filter only guards non-convergence."""
    out = []
    tri2 = simplex_regular_centered(2)
    tri3 = simplex_regular_centered(3)
    for i in range(cfg.cases):
        seed = cfg.seed + i
        rng = np.random.default_rng([cfg.seed, i])
        for _ in range(4):
            B = random_symmetric_polygon(rng)
            rhs_est = _est(B, tri2, cfg, seed)
            if rhs_est.upper <= 2.0 + cfg.tol:
                break
        apex = np.concatenate([0.25 * rng.standard_normal(2),
                               [rng.uniform(0.8, 1.3)]])
        C = cone(_embed_plane(B, 3), [apex])
        w = rhs_est.witness
        lhs_est = _est(_centered(C), tri3, cfg, seed,
                       restarts=_lift_restarts(cfg),
                       inits=(_cone_lift_witness(B, apex, C, w, tri2, tri3),))
        # Shared-apex chain: cone(B+u) <= cone(s M (tri+v)) <= rho cone(B+u).
        base1 = Polytope(B.vertices + w.pre_translate, prune=False)
        mapped = (tri2.vertices + w.post_translate) @ w.matrix.T
        C1 = cone(_embed_plane(base1, 3), _axis_apexes(3, 1))
        C2 = cone(_embed_plane(Polytope(mapped, prune=True), 3),
                  _axis_apexes(3, 1))
        chain = verify_chain(C1, C2, LinearMap(np.eye(3)),
                             rhs_est.upper + 1e-9)
        res = lhs_est.upper - rhs_est.upper
        out.append(
            SuiteCase(seed, lhs_est.upper, rhs_est.upper, res,
                      abs(res) <= cfg.tol, chain)
        )
    return _summarize(out, cfg.tol)


def _cone_pair(rng, seed_base):
    B = random_symmetric_polygon(rng)
    apex = np.concatenate([0.25 * rng.standard_normal(2),
                           [rng.uniform(0.8, 1.3)]])
    return B, apex, cone(_embed_plane(B, 3), [apex])


def _suite_3d_cones(cfg: SuiteConfig):
    """Two single cones over random planar symmetric bases: their distance
    must match the distance of the bases."""
    out = []
    for i in range(cfg.cases):
        seed = cfg.seed + i
        rng = np.random.default_rng([cfg.seed, i])
        B1, a1, C1 = _cone_pair(rng, seed)
        B2, a2, C2 = _cone_pair(rng, seed)
        rhs_est = _est(B1, B2, cfg, seed)
        # Both planar bodies are symmetric, so the witness is linear and the
        # shared-apex lift conjugated onto the actual apexes stays linear.
        lift = LinearMap(
            _shear_to_apex(a1)
            @ _block_witness(rhs_est.witness.matrix, 1).matrix
            @ np.linalg.inv(_shear_to_apex(a2)),
            pre_translate=C1.vertices.mean(axis=0),
            post_translate=C2.vertices.mean(axis=0),
        )
        lhs_est = _est(_centered(C1), _centered(C2), cfg, seed,
                       restarts=_lift_restarts(cfg), inits=(lift,))
        mapped = Polytope(B2.vertices @ rhs_est.witness.matrix.T, prune=True)
        K1 = cone(_embed_plane(B1, 3), _axis_apexes(3, 1))
        K2 = cone(_embed_plane(mapped, 3), _axis_apexes(3, 1))
        chain = verify_chain(K1, K2, LinearMap(np.eye(3)),
                             rhs_est.upper + 1e-9)
        res = lhs_est.upper - rhs_est.upper
        out.append(
            SuiteCase(seed, lhs_est.upper, rhs_est.upper, res,
                      abs(res) <= cfg.tol, chain)
        )
    return _summarize(out, cfg.tol)


def _suite_sym_cones(cfg: SuiteConfig, m: int = 1, hypothesis: bool = True):
    """Double cones over two planar symmetric bases; with the hypothesis
    filter this is the conditional identity, without it the embedding."""
    out = []
    for i in range(cfg.cases):
        seed = cfg.seed + i
        rng = np.random.default_rng([cfg.seed, i])
        while True:
            X1 = random_symmetric_polygon(rng)
            X2 = random_symmetric_polygon(rng)
            rhs_est = _est(X1, X2, cfg, seed)
            if not hypothesis:
                break
            to_l1 = max(
                _est(X1, cross_polytope(2), cfg, seed).upper,
                _est(X2, cross_polytope(2), cfg, seed).upper,
            )
            if to_l1 >= rhs_est.upper - 0.005:
                break
        C1 = double_cone(_embed_plane(X1, 2 + m), _axis_apexes(2 + m, m))
        C2 = double_cone(_embed_plane(X2, 2 + m), _axis_apexes(2 + m, m))
        lhs_est = _est(C1, C2, cfg, seed,
                       inits=(_block_witness(rhs_est.witness.matrix, m),))
        chain = verify_chain(
            C1, C2, _block_witness(rhs_est.witness.matrix, m),
            rhs_est.upper + 1e-9,
        )
        res = lhs_est.upper - rhs_est.upper
        out.append(
            SuiteCase(seed, lhs_est.upper, rhs_est.upper, res,
                      abs(res) <= cfg.tol, chain)
        )
    return _summarize(out, cfg.tol)


def _suite_equilateral(cfg: SuiteConfig):
    """All-pairs distances inside the experimental equilateral family for
    N = 2; rhs is the construction target, closeness to it is reported but
    judged only by mutual agreement."""
    family = equilateral_family(2, 4)
    target = equilateral_target(2)
    vals = []
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    for idx, (i, j) in enumerate(pairs):
        est = _est(family[i], family[j], cfg, cfg.seed + idx)
        vals.append(est.upper)
    mean = float(np.mean(vals))
    out = [
        SuiteCase(cfg.seed + idx, val, target, val - target,
                  abs(val - mean) <= 0.01)
        for idx, val in enumerate(vals)
    ]
    return _summarize(
        out,
        cfg.tol,
        extra={
            "target": target,
            "mean": mean,
            "spread": float(max(vals) - min(vals)),
        },
    )


def _suite_question(cfg: SuiteConfig):
    """Search for planar pairs violating  d(X1,X2) <= max_i d(Xi, l1); the
    margin is reported, never asserted, and a positive margin within engine
    noise resolves nothing."""
    out = []
    best = -math.inf
    best_seed = None
    for i in range(cfg.cases):
        seed = cfg.seed + i
        rng = np.random.default_rng([cfg.seed, i])
        X1 = random_symmetric_polygon(rng)
        X2 = random_symmetric_polygon(rng)
        lhs = _est(X1, X2, cfg, seed).upper
        rhs = max(
            _est(X1, cross_polytope(2), cfg, seed).upper,
            _est(X2, cross_polytope(2), cfg, seed).upper,
        )
        margin = lhs - rhs
        if margin > best:
            best, best_seed = margin, seed
        out.append(SuiteCase(seed, lhs, rhs, margin, margin <= 0.02))
    return _summarize(
        out, 0.02, extra={"best_margin": best, "best_margin_seed": best_seed}
    )


_SUITES = {
    "thm-l1-sum": _suite_l1_sum,
    "thm-simplex": _suite_simplex,
    "thm-3d-cones": _suite_3d_cones,
    "thm-sym-cones": lambda cfg: _suite_sym_cones(cfg, m=1, hypothesis=True),
    "cor-embedding": lambda cfg: _suite_sym_cones(cfg, m=1, hypothesis=False),
    "cor-equilateral": _suite_equilateral,
    "question-l1-search": _suite_question,
}


def theorem_suite(name: str, cfg: SuiteConfig | None = None, **overrides) -> Report:
    """Run one randomized identity suite and aggregate a Report.

    Cases are keyed by seed and independent of execution order.  `overrides`
    replace individual SuiteConfig fields.
    """
    if name not in _SUITES:
        raise UnknownSuite(
            f"unknown suite {name!r}; available: {', '.join(sorted(_SUITES))}"
        )
    cfg = replace(cfg or SuiteConfig(), **overrides)
    cases, summary = _SUITES[name](cfg)
    return Report(suite=name, cases=cases, summary=summary)
