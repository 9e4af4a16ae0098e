"""Convex bodies with exact gauge and support evaluation.

A body is one of five expression kinds:

    Polytope      convex hull of finitely many vertices (possibly embedded
                  in a higher-dimensional space with a lower intrinsic dim),
    Ball          the Euclidean unit ball,
    LpSum         the lp-sum of lower-dimensional bodies (block coordinates),
    LinearImage   an invertible linear image of another body,
    Translate     a translate of another body (origin must stay interior).

Gauges (Minkowski functionals) about the origin are the workhorse: for a
polytope with the origin interior they are evaluated from a precomputed
facet representation  max_i <g_i, x>  with offsets normalized to 1, which
makes inclusion scales between positioned polytopes a pair of small matrix
products.  The LP formulation of the polytope gauge lives in bmdist.lp and
cross-checks this fast path in the test suite.

Facets are enumerated by an angular vertex sort in 2D and by qhull
(scipy.spatial.ConvexHull) in dimension three and up.  Vertex pruning is
LP-based: a vertex is dropped when it lies within 1e-9 of the hull of the
remaining ones.
"""
from __future__ import annotations

import json
import math

import numpy as np

from . import lp
from .errors import (
    DimensionMismatch,
    DimensionTooHigh,
    InvalidP,
    MalformedSpec,
    NotIdempotent,
    NotVertexEnumerable,
    OriginNotInterior,
    SingularMap,
    SymmetryFlagViolated,
)

# Vertex pruning / membership tolerance, in gauge units.
PRUNE_TOL = 1e-9
# A linear map is usable only if ||M Minv - I||_max stays below this.
INVERSE_TOL = 1e-10
# Default direction-grid sizes for sampled operations.
GRID_2D = 2048
GRID_3D = 4096
GRID_ND = 4096
_GRID_SEED_ND = 78241  # fixed so grids in dim >= 4 are reproducible


# ---------------------------------------------------------------------------
# vertex utilities


def prune_vertices(vertices, tol=PRUNE_TOL):
    """Drop duplicate vertices and vertices inside the hull of the others.

    Keeps the surviving vertices in their input order.  Redundancy is decided
    by the convex-membership LP at tolerance `tol`.
    """
    V = np.asarray(vertices, dtype=float)
    if V.ndim != 2 or V.shape[0] == 0:
        raise MalformedSpec("vertices must be a nonempty (m, n) array")
    scale = max(1.0, float(np.abs(V).max()))
    keep = []
    for i, v in enumerate(V):
        dup = any(np.linalg.norm(v - V[j]) <= tol * scale for j in keep)
        if not dup:
            keep.append(i)
    idx = list(keep)
    changed = True
    while changed:
        changed = False
        for i in list(idx):
            others = [j for j in idx if j != i]
            if not others:
                break
            if lp.convex_membership(V[others], V[i], tol=tol) is not None:
                idx.remove(i)
                changed = True
    return V[idx]


def _detect_symmetric(V, tol):
    m = V.shape[0]
    used = np.zeros(m, dtype=bool)
    for i in range(m):
        if used[i]:
            continue
        d = np.linalg.norm(V + V[i], axis=1)
        j = int(np.argmin(np.where(used, np.inf, d)))
        if d[j] > tol:
            return False
        used[i] = used[j] = True
    return True


# ---------------------------------------------------------------------------
# linear maps


class LinearMap:
    """Invertible matrix plus the two translations of a positioned pair.

    Represents the comparison  K + u  against  M (L + v): `pre_translate` u
    shifts the reference body, `post_translate` v shifts the mapped body
    before the matrix is applied.
    """

    def __init__(self, matrix, pre_translate=None, post_translate=None):
        M = np.atleast_2d(np.asarray(matrix, dtype=float))
        if M.shape[0] != M.shape[1]:
            raise MalformedSpec("linear map matrix must be square")
        n = M.shape[0]
        try:
            Minv = np.linalg.inv(M)
        except np.linalg.LinAlgError as exc:
            raise SingularMap(str(exc)) from None
        if not np.isfinite(Minv).all():
            raise SingularMap("matrix inverse is not finite")
        err = float(np.abs(M @ Minv - np.eye(n)).max())
        if err > INVERSE_TOL:
            raise SingularMap(
                f"matrix is too ill-conditioned: ||M Minv - I||_max = {err:.3e}"
            )
        self.matrix = M
        self.inverse = Minv
        self.pre_translate = (
            np.zeros(n) if pre_translate is None
            else np.asarray(pre_translate, dtype=float).ravel()
        )
        self.post_translate = (
            np.zeros(n) if post_translate is None
            else np.asarray(post_translate, dtype=float).ravel()
        )
        if self.pre_translate.shape != (n,) or self.post_translate.shape != (n,):
            raise DimensionMismatch("translation length must match matrix size")

    @property
    def dim(self):
        return self.matrix.shape[0]

    def to_dict(self):
        return {
            "matrix": self.matrix.tolist(),
            "pre_translate": self.pre_translate.tolist(),
            "post_translate": self.post_translate.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(d["matrix"], d.get("pre_translate"), d.get("post_translate"))
        except (KeyError, TypeError) as exc:
            raise MalformedSpec(f"bad linear map object: {exc}") from None

    def __repr__(self):
        return f"LinearMap(dim={self.dim})"


# ---------------------------------------------------------------------------
# body expression classes


class Body:
    """Common interface of all body expressions."""

    dim: int
    symmetric: bool

    @property
    def origin_interior(self):
        raise NotImplementedError

    def gauge(self, x):
        """min { t >= 0 : x in t*K }.  Raises OriginNotInterior when the
        origin is not interior; returns inf for points outside the span."""
        raise NotImplementedError

    def gauge_many(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.array([self.gauge(x) for x in X])

    def support(self, u):
        """sup { <x, u> : x in K }."""
        raise NotImplementedError

    def support_many(self, U):
        U = np.atleast_2d(np.asarray(U, dtype=float))
        return np.array([self.support(u) for u in U])

    def contains(self, x, tol=PRUNE_TOL):
        raise NotImplementedError

    def boundary_points(self, dirs):
        """Boundary points of K in the given directions (origin interior)."""
        dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
        g = self.gauge_many(dirs)
        if np.any(g <= 0) or np.any(~np.isfinite(g)):
            raise OriginNotInterior("cannot trace the boundary in all directions")
        return dirs / g[:, None]


class Polytope(Body):
    """Convex hull of finitely many points, stored by its vertices."""

    kind = "polytope"

    def __init__(self, vertices, symmetric=None, prune=True):
        V = np.atleast_2d(np.asarray(vertices, dtype=float))
        if V.size == 0 or V.ndim != 2:
            raise MalformedSpec("vertices must be a nonempty (m, n) array")
        if not np.isfinite(V).all():
            raise MalformedSpec("vertices must be finite")
        if prune:
            V = prune_vertices(V)
        V = V.copy()
        V.setflags(write=False)
        self.vertices = V
        self.dim = int(V.shape[1])
        scale = max(1.0, float(np.abs(V).max()))
        detected = _detect_symmetric(V, 1e-9 * scale)
        if symmetric is None:
            self.symmetric = detected
        elif symmetric and not detected:
            raise SymmetryFlagViolated("vertex set is not closed under negation")
        else:
            self.symmetric = bool(symmetric)
        self._scale = scale
        self._reps = None  # lazy (center, Q, Ac, bc, intrinsic_dim)
        self._gauge_G = None

    # -- internal representations ------------------------------------------

    def _centered_rep(self):
        if self._reps is None:
            V = self.vertices
            m, n = V.shape
            center = V.mean(axis=0)
            W = V - center
            if m == 1:
                d = 0
                Q = np.zeros((n, 0))
            else:
                _, s, vt = np.linalg.svd(W, full_matrices=False)
                d = int(np.sum(s > 1e-9 * self._scale))
                Q = vt[:d].T
            if d == n:
                Q = None
                Xi = W
            else:
                Xi = W @ Q
            Ac, bc = _facets_centered(Xi, d)
            self._reps = (center, Q, Ac, bc, d)
        return self._reps

    @property
    def intrinsic_dim(self):
        return self._centered_rep()[4]

    @property
    def span_basis(self):
        """Orthonormal basis of the affine span's direction space (or None
        when the polytope is full-dimensional)."""
        return self._centered_rep()[1]

    def _origin_in_span(self):
        center, Q, _, _, d = self._centered_rep()
        if Q is None:
            return True
        resid = np.linalg.norm(center - Q @ (Q.T @ center))
        return resid <= 1e-9 * self._scale

    @property
    def origin_interior(self):
        return self._gauge_matrix_or_none() is not None

    def _gauge_matrix_or_none(self):
        if self._gauge_G is None:
            center, Q, Ac, bc, d = self._centered_rep()
            if d == 0 or not self._origin_in_span():
                self._gauge_G = False
            else:
                xi0 = -(center if Q is None else Q.T @ center)
                beta = bc - Ac @ xi0
                if np.any(beta <= 1e-9 * self._scale):
                    self._gauge_G = False
                else:
                    A_amb = Ac if Q is None else Ac @ Q.T
                    self._gauge_G = A_amb / beta[:, None]
        return None if self._gauge_G is False else self._gauge_G

    @property
    def facet_normals(self):
        """Rows g with  K = { x in span : <g, x> <= 1 }  (origin interior)."""
        G = self._gauge_matrix_or_none()
        if G is None:
            raise OriginNotInterior("origin is not interior to the polytope")
        return G

    # -- evaluation ---------------------------------------------------------

    def gauge(self, x):
        return float(self.gauge_many(np.asarray(x, dtype=float))[0])

    def gauge_many(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise DimensionMismatch("point dimension does not match the body")
        G = self._gauge_matrix_or_none()
        if G is None:
            raise OriginNotInterior("origin is not interior to the polytope")
        vals = np.maximum((G @ X.T).max(axis=0), 0.0)
        Q = self._centered_rep()[1]
        if Q is not None:
            resid = np.linalg.norm(X - (X @ Q) @ Q.T, axis=1)
            norms = np.linalg.norm(X, axis=1)
            vals = np.where(resid > 1e-9 * (norms + self._scale), np.inf, vals)
        return vals

    def support(self, u):
        return float(self.support_many(u)[0])

    def support_many(self, U):
        U = np.atleast_2d(np.asarray(U, dtype=float))
        if U.shape[1] != self.dim:
            raise DimensionMismatch("direction dimension does not match the body")
        return (U @ self.vertices.T).max(axis=1)

    def contains(self, x, tol=PRUNE_TOL):
        x = np.asarray(x, dtype=float).ravel()
        if x.shape != (self.dim,):
            raise DimensionMismatch("point dimension does not match the body")
        center, Q, Ac, bc, d = self._centered_rep()
        if d == 0:
            return bool(np.linalg.norm(x - self.vertices[0]) <= tol * self._scale)
        w = x - center
        if Q is not None:
            xi = Q.T @ w
            if np.linalg.norm(w - Q @ xi) > tol * self._scale:
                return False
        else:
            xi = w
        return bool(np.all(Ac @ xi <= bc + tol * self._scale))

    def __eq__(self, other):
        return (
            isinstance(other, Polytope)
            and other.dim == self.dim
            and other.symmetric == self.symmetric
            and other.vertices.shape == self.vertices.shape
            and bool(np.all(other.vertices == self.vertices))
        )

    def __repr__(self):
        return (
            f"Polytope(m={self.vertices.shape[0]}, dim={self.dim}, "
            f"symmetric={self.symmetric})"
        )


def _facets_centered(Xi, d):
    """H-representation  A xi <= b  of conv(Xi) in centered intrinsic
    coordinates (the centroid sits at 0, so b > 0).  Rows are unit-normal,
    deduplicated, and sorted for determinism."""
    if d == 0:
        return np.zeros((0, 0)), np.zeros(0)
    if d == 1:
        hi = float(Xi[:, 0].max())
        lo = float(Xi[:, 0].min())
        return np.array([[1.0], [-1.0]]), np.array([hi, -lo])
    if d == 2:
        ang = np.arctan2(Xi[:, 1], Xi[:, 0])
        order = np.argsort(ang, kind="stable")
        P = Xi[order]
        m = P.shape[0]
        A = np.empty((m, 2))
        b = np.empty(m)
        for i in range(m):
            v1 = P[i]
            v2 = P[(i + 1) % m]
            e = v2 - v1
            nrm = np.array([e[1], -e[0]])
            ln = np.linalg.norm(nrm)
            if ln <= 1e-14:
                raise MalformedSpec("degenerate edge in polygon facet build")
            nrm /= ln
            A[i] = nrm
            b[i] = nrm @ v1
        if np.any(b <= 0):
            # angular order picked the wrong orientation; flip
            A, b = -A, -b
    else:
        from scipy.spatial import ConvexHull

        hull = ConvexHull(Xi)
        eq = hull.equations  # rows (normal, offset) with normal.x + off <= 0
        A = eq[:, :-1]
        b = -eq[:, -1]
    key = np.round(np.column_stack([A, b]), 9)
    _, idx = np.unique(key, axis=0, return_index=True)
    A, b = A[sorted(idx)], b[sorted(idx)]
    order = np.lexsort(np.round(np.column_stack([A, b]), 9).T[::-1])
    return A[order], b[order]


class Ball(Body):
    """The Euclidean unit ball."""

    kind = "ball"

    def __init__(self, dim):
        if int(dim) < 1:
            raise MalformedSpec("ball dimension must be >= 1")
        self.dim = int(dim)
        self.symmetric = True

    @property
    def origin_interior(self):
        return True

    def gauge(self, x):
        return float(np.linalg.norm(np.asarray(x, dtype=float)))

    def gauge_many(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.linalg.norm(X, axis=1)

    def support(self, u):
        return float(np.linalg.norm(np.asarray(u, dtype=float)))

    def support_many(self, U):
        U = np.atleast_2d(np.asarray(U, dtype=float))
        return np.linalg.norm(U, axis=1)

    def contains(self, x, tol=PRUNE_TOL):
        return bool(np.linalg.norm(np.asarray(x, dtype=float)) <= 1 + tol)

    def __eq__(self, other):
        return isinstance(other, Ball) and other.dim == self.dim

    def __repr__(self):
        return f"Ball(dim={self.dim})"


class LpSumBody(Body):
    """lp-sum of bodies on block coordinates: the gauge is the lp norm of
    the child gauges.  Children must have the origin interior."""

    kind = "lpsum"

    def __init__(self, p, children):
        p = float(p)
        if math.isnan(p) or p < 1:
            raise InvalidP(f"lp-sum exponent must satisfy 1 <= p <= inf, got {p}")
        if not children:
            raise MalformedSpec("lp-sum needs at least one child")
        for c in children:
            if not isinstance(c, Body):
                raise MalformedSpec("lp-sum children must be bodies")
            if not c.origin_interior:
                raise OriginNotInterior("lp-sum children need the origin interior")
        self.p = p
        self.children = list(children)
        dims = [c.dim for c in self.children]
        self._offsets = np.concatenate([[0], np.cumsum(dims)])
        self.dim = int(self._offsets[-1])
        self.symmetric = all(c.symmetric for c in self.children)

    @property
    def origin_interior(self):
        return True

    def _blocks(self, X):
        o = self._offsets
        return [X[:, o[i] : o[i + 1]] for i in range(len(self.children))]

    def gauge(self, x):
        return float(self.gauge_many(np.asarray(x, dtype=float))[0])

    def gauge_many(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise DimensionMismatch("point dimension does not match the body")
        parts = np.column_stack(
            [c.gauge_many(B) for c, B in zip(self.children, self._blocks(X))]
        )
        if np.isinf(self.p):
            return parts.max(axis=1)
        return (parts ** self.p).sum(axis=1) ** (1.0 / self.p)

    def support(self, u):
        return float(self.support_many(u)[0])

    def support_many(self, U):
        U = np.atleast_2d(np.asarray(U, dtype=float))
        if U.shape[1] != self.dim:
            raise DimensionMismatch("direction dimension does not match the body")
        parts = np.column_stack(
            [c.support_many(B) for c, B in zip(self.children, self._blocks(U))]
        )
        if np.isinf(self.p):
            return parts.sum(axis=1)
        if self.p == 1:
            return parts.max(axis=1)
        q = self.p / (self.p - 1.0)
        return (parts ** q).sum(axis=1) ** (1.0 / q)

    def contains(self, x, tol=PRUNE_TOL):
        return bool(self.gauge(x) <= 1 + tol)

    def __eq__(self, other):
        return (
            isinstance(other, LpSumBody)
            and other.p == self.p
            and len(other.children) == len(self.children)
            and all(a == b for a, b in zip(other.children, self.children))
        )

    def __repr__(self):
        return f"LpSumBody(p={self.p}, children={self.children!r})"


class LinearImageBody(Body):
    """Invertible linear image M K of a child body."""

    kind = "linear_image"

    def __init__(self, matrix, child):
        if not isinstance(child, Body):
            raise MalformedSpec("linear image child must be a body")
        M = np.atleast_2d(np.asarray(matrix, dtype=float))
        if M.shape != (child.dim, child.dim):
            raise DimensionMismatch("matrix shape must match the child dimension")
        probe = LinearMap(M)  # validates invertibility
        self.matrix = probe.matrix
        self.inverse = probe.inverse
        self.child = child
        self.dim = child.dim
        self.symmetric = child.symmetric

    @property
    def origin_interior(self):
        return self.child.origin_interior

    def gauge(self, x):
        return self.child.gauge(self.inverse @ np.asarray(x, dtype=float))

    def gauge_many(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.child.gauge_many(X @ self.inverse.T)

    def support(self, u):
        return self.child.support(self.matrix.T @ np.asarray(u, dtype=float))

    def support_many(self, U):
        U = np.atleast_2d(np.asarray(U, dtype=float))
        return self.child.support_many(U @ self.matrix)

    def contains(self, x, tol=PRUNE_TOL):
        return self.child.contains(self.inverse @ np.asarray(x, dtype=float), tol)

    def __eq__(self, other):
        return (
            isinstance(other, LinearImageBody)
            and bool(np.all(other.matrix == self.matrix))
            and other.child == self.child
        )

    def __repr__(self):
        return f"LinearImageBody(dim={self.dim}, child={self.child!r})"


class TranslateBody(Body):
    """Translate K + t of a child body.  Only allowed while the origin stays
    interior, so gauges remain well-defined."""

    kind = "translate"

    def __init__(self, offset, child):
        if not isinstance(child, Body):
            raise MalformedSpec("translate child must be a body")
        t = np.asarray(offset, dtype=float).ravel()
        if t.shape != (child.dim,):
            raise DimensionMismatch("offset length must match the child dimension")
        # 0 in K + t  iff  -t in K; demand strict interiority.
        if child.gauge(-t) >= 1 - 1e-9:
            raise OriginNotInterior("translate would move the origin out of K")
        self.offset = t
        self.child = child
        self.dim = child.dim
        self.symmetric = bool(child.symmetric and np.all(t == 0))

    @property
    def origin_interior(self):
        return True

    def gauge(self, x):
        x = np.asarray(x, dtype=float).ravel()
        if np.linalg.norm(x) == 0:
            return 0.0
        g = self.child.gauge
        t = self.offset
        phi = lambda s: g(x - s * t) - s
        hi = 1.0
        for _ in range(200):
            if phi(hi) <= 0:
                break
            hi *= 2.0
        else:
            return np.inf
        lo = 0.0
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if phi(mid) <= 0:
                hi = mid
            else:
                lo = mid
            if hi - lo <= 1e-13 * max(1.0, hi):
                break
        return hi

    def support(self, u):
        u = np.asarray(u, dtype=float)
        return self.child.support(u) + float(self.offset @ u)

    def support_many(self, U):
        U = np.atleast_2d(np.asarray(U, dtype=float))
        return self.child.support_many(U) + U @ self.offset

    def contains(self, x, tol=PRUNE_TOL):
        return self.child.contains(np.asarray(x, dtype=float) - self.offset, tol)

    def __eq__(self, other):
        return (
            isinstance(other, TranslateBody)
            and bool(np.all(other.offset == self.offset))
            and other.child == self.child
        )

    def __repr__(self):
        return f"TranslateBody(dim={self.dim}, child={self.child!r})"


# ---------------------------------------------------------------------------
# derived operations


def as_polytope(body):
    """Materialize a vertex representation, or raise NotVertexEnumerable.

    Handles polytopes, their linear images and translates, and lp-sum nodes
    with p in {1, inf} (hull of the embedded children resp. their product).
    """
    if isinstance(body, Polytope):
        return body
    if isinstance(body, LinearImageBody):
        P = as_polytope(body.child)
        return Polytope(P.vertices @ body.matrix.T, symmetric=None, prune=False)
    if isinstance(body, TranslateBody):
        P = as_polytope(body.child)
        return Polytope(P.vertices + body.offset, symmetric=None, prune=False)
    if isinstance(body, LpSumBody):
        parts = [as_polytope(c) for c in body.children]
        if body.p == 1:
            return Polytope(_embed_union(parts), symmetric=None, prune=True)
        if np.isinf(body.p):
            return Polytope(_vertex_product(parts), symmetric=None, prune=False)
        raise NotVertexEnumerable(
            f"lp-sum with p = {body.p} has no vertex representation"
        )
    raise NotVertexEnumerable(f"{type(body).__name__} has no vertex representation")


def _embed_union(parts):
    dims = [P.dim for P in parts]
    total = sum(dims)
    rows = []
    off = 0
    for P, d in zip(parts, dims):
        block = np.zeros((P.vertices.shape[0], total))
        block[:, off : off + d] = P.vertices
        rows.append(block)
        off += d
    return np.vstack(rows)


def _vertex_product(parts):
    out = parts[0].vertices
    for P in parts[1:]:
        m1, d1 = out.shape
        m2, d2 = P.vertices.shape
        left = np.repeat(out, m2, axis=0)
        right = np.tile(P.vertices, (m1, 1))
        out = np.hstack([left, right])
    return out


def apply_map(T, body):
    """Image  M (K + u)  of a body under a LinearMap (u = pre_translate)."""
    if not isinstance(T, LinearMap):
        T = LinearMap(T)
    if T.dim != body.dim:
        raise DimensionMismatch("map and body dimensions differ")
    try:
        P = as_polytope(body)
    except NotVertexEnumerable:
        inner = body
        if np.any(T.pre_translate != 0):
            inner = TranslateBody(T.pre_translate, inner)
        return LinearImageBody(T.matrix, inner)
    W = (P.vertices + T.pre_translate) @ T.matrix.T
    return Polytope(W, symmetric=None, prune=False)


def project(P_matrix, body):
    """Image of a polytope under an idempotent matrix, vertices pruned."""
    P = np.atleast_2d(np.asarray(P_matrix, dtype=float))
    if P.shape[0] != P.shape[1]:
        raise MalformedSpec("projection matrix must be square")
    if float(np.abs(P @ P - P).max()) > 1e-10:
        raise NotIdempotent("matrix is not idempotent within 1e-10")
    poly = as_polytope(body)
    if P.shape[0] != poly.dim:
        raise DimensionMismatch("projection and body dimensions differ")
    return Polytope(poly.vertices @ P.T, symmetric=None, prune=True)


def polar(body):
    """Polar dual of an origin-interior polytope in dimension <= 3.

    Vertices of the polar are the facet functionals of the body (offsets
    normalized to 1); 2D facets come from the angular vertex sort, 3D from
    the convex hull."""
    poly = as_polytope(body)
    if poly.dim > 3:
        raise DimensionTooHigh("polar is implemented for ambient dimension <= 3")
    if poly.intrinsic_dim < poly.dim or not poly.origin_interior:
        raise OriginNotInterior("polar needs a full-dimensional body around 0")
    return Polytope(poly.facet_normals, symmetric=poly.symmetric, prune=True)


# ---------------------------------------------------------------------------
# direction grids and sampled extremes


def direction_grid(n, count=None):
    """Deterministic unit directions: uniform angles in 2D, a Fibonacci
    sphere in 3D, a fixed-seed Gaussian grid in dimension >= 4."""
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        count = GRID_2D if count is None else int(count)
        ang = np.arange(count) * (2 * np.pi / count)
        return np.column_stack([np.cos(ang), np.sin(ang)])
    if n == 3:
        count = GRID_3D if count is None else int(count)
        i = np.arange(count)
        z = 1.0 - 2.0 * (i + 0.5) / count
        rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        phi = i * (np.pi * (3.0 - np.sqrt(5.0)))
        return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    count = GRID_ND if count is None else int(count)
    rng = np.random.default_rng(_GRID_SEED_ND)
    U = rng.standard_normal((count, n))
    return U / np.linalg.norm(U, axis=1)[:, None]


def _golden_max(phi, a, b, iters=40):
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = phi(c), phi(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = phi(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = phi(d)
    x = 0.5 * (a + b)
    return x, phi(x)


def _refine_direction(f, u0, step, rounds=3):
    """Locally maximize f over the unit sphere near u0 by golden-section
    sweeps along tangent great circles."""
    u = np.asarray(u0, dtype=float).copy()
    u /= np.linalg.norm(u)
    best = f(u)
    n = len(u)
    for _ in range(rounds):
        # tangent basis at u
        Mb = np.eye(n) - np.outer(u, u)
        q, _ = np.linalg.qr(Mb)
        tangents = [q[:, j] for j in range(n) if abs(q[:, j] @ u) < 0.9]
        tangents = tangents[: n - 1]
        for t in tangents:
            t = t - (t @ u) * u
            nt = np.linalg.norm(t)
            if nt < 1e-12:
                continue
            t /= nt

            def phi(a, t=t, u=u):
                v = math.cos(a) * u + math.sin(a) * t
                return f(v / np.linalg.norm(v))

            a_star, val = _golden_max(phi, -step, step)
            if val > best:
                best = val
                u = math.cos(a_star) * u + math.sin(a_star) * t
                u /= np.linalg.norm(u)
        step *= 0.35
    return u, best


def _grid_step(n, count):
    if n == 2:
        return 2.0 * np.pi / count
    return 2.5 * math.sqrt(4.0 * np.pi / count)


def inclusion_scale(K, L, dirs=None):
    """min { s >= 0 : K subset s L }.

    Exact (max gauge_L over vertices) when K is vertex-enumerable; otherwise
    sampled on a deterministic direction grid with golden-section refinement.
    """
    if K.dim != L.dim:
        raise DimensionMismatch("bodies live in different dimensions")
    try:
        P = as_polytope(K)
    except NotVertexEnumerable:
        P = None
    if P is not None:
        try:
            vals = L.gauge_many(P.vertices)
        except OriginNotInterior:
            # Boundary-origin target (a cone over a base through 0, say):
            # the facet form breaks down, but the LP gauge needs only 0 in L.
            QL = as_polytope(L)
            if lp.convex_membership(QL.vertices, np.zeros(L.dim)) is None:
                raise
            vals = np.array([lp.gauge_lp(QL.vertices, x) for x in P.vertices])
        return float(vals.max())
    U = direction_grid(K.dim) if dirs is None else np.atleast_2d(dirs)
    gK = K.gauge_many(U)
    gL = L.gauge_many(U)
    ratio = gL / gK
    i = int(np.argmax(ratio))
    f = lambda u: L.gauge(u) / K.gauge(u)
    _, refined = _refine_direction(f, U[i], _grid_step(K.dim, U.shape[0]))
    return float(max(ratio[i], refined))


def _merge_close(points, eps=1e-6):
    """Merge point clusters of diameter <= eps by their centroid."""
    pts = [np.asarray(p, dtype=float) for p in points]
    out = []
    used = [False] * len(pts)
    for i, p in enumerate(pts):
        if used[i]:
            continue
        cluster = [p]
        used[i] = True
        for j in range(i + 1, len(pts)):
            if not used[j] and np.linalg.norm(pts[j] - p) <= eps:
                cluster.append(pts[j])
                used[j] = True
        out.append(np.mean(cluster, axis=0))
    return np.array(out)


def radial_extremes(K, tol=1e-7):
    """(r, R, inner, outer): extreme Euclidean radii of the boundary and all
    boundary points achieving them within relative `tol`.

    Exact for polytopes (outer candidates are the vertices, inner candidates
    the per-facet least-norm points); sampled grid plus refinement otherwise.
    """
    if not K.origin_interior:
        raise OriginNotInterior("radial extremes need the origin interior")
    try:
        P = as_polytope(K)
    except NotVertexEnumerable:
        P = None
    if P is not None:
        V = P.vertices
        norms = np.linalg.norm(V, axis=1)
        R = float(norms.max())
        outer = V[norms >= R * (1.0 - tol)]
        G = P.facet_normals
        gn2 = (G * G).sum(axis=1)
        feet = G / gn2[:, None]
        feas = P.gauge_many(feet) <= 1.0 + 1e-9
        fnorm = 1.0 / np.sqrt(gn2)
        if not feas.any():
            raise OriginNotInterior("no facet foot lies inside the body")
        r = float(fnorm[feas].min())
        inner = feet[feas & (fnorm <= r * (1.0 + tol))]
        return r, R, inner, outer

    U = direction_grid(K.dim)
    g = K.gauge_many(U)
    radial = 1.0 / g
    step = _grid_step(K.dim, U.shape[0])
    f_out = lambda u: 1.0 / K.gauge(u)
    f_in = lambda u: K.gauge(u)
    R, outer = _sampled_extreme(K, U, radial, f_out, step, tol, largest=True)
    r_inv, inner = _sampled_extreme(K, U, g, f_in, step, tol, largest=True)
    return 1.0 / r_inv, R, inner, outer


def _sampled_extreme(K, U, vals, f, step, tol, largest=True):
    """Shared cluster-and-refine loop for sampled radial extremes.  Returns
    the refined extreme value of f and the boundary points attaining it."""
    order = np.argsort(-vals, kind="stable")
    reps = []
    cos_sep = math.cos(min(2.5 * step, np.pi / 4))
    cutoff = vals[order[0]] * (1.0 - 1e-3)
    for idx in order:
        if vals[idx] < cutoff:
            break
        u = U[idx]
        if any(u @ r > cos_sep for r in reps):
            continue
        reps.append(u)
        if len(reps) >= 48:
            break
    refined = [_refine_direction(f, u, step) for u in reps]
    best = max(v for _, v in refined)
    pts = [u / K.gauge(u) for u, v in refined if v >= best * (1.0 - tol)]
    return best, _merge_close(pts, eps=1e-6)


# ---------------------------------------------------------------------------
# serialization

_P_INF = "inf"


def body_to_dict(body):
    if isinstance(body, Polytope):
        return {
            "kind": "polytope",
            "dim": body.dim,
            "vertices": body.vertices.tolist(),
            "symmetric": body.symmetric,
        }
    if isinstance(body, Ball):
        return {"kind": "ball", "dim": body.dim}
    if isinstance(body, LpSumBody):
        p = _P_INF if np.isinf(body.p) else body.p
        return {
            "kind": "lpsum",
            "p": p,
            "children": [body_to_dict(c) for c in body.children],
        }
    if isinstance(body, LinearImageBody):
        return {
            "kind": "linear_image",
            "matrix": body.matrix.tolist(),
            "child": body_to_dict(body.child),
        }
    if isinstance(body, TranslateBody):
        return {
            "kind": "translate",
            "offset": body.offset.tolist(),
            "child": body_to_dict(body.child),
        }
    raise MalformedSpec(f"cannot serialize {type(body).__name__}")


def body_from_dict(d):
    if not isinstance(d, dict) or "kind" not in d:
        raise MalformedSpec("body object needs a 'kind' field")
    kind = d["kind"]
    try:
        if kind == "polytope":
            body = Polytope(d["vertices"], symmetric=d.get("symmetric"))
            if "dim" in d and int(d["dim"]) != body.dim:
                raise MalformedSpec(
                    f"declared dim {d['dim']} does not match vertices ({body.dim})"
                )
            return body
        if kind == "ball":
            return Ball(d["dim"])
        if kind == "lpsum":
            p = d["p"]
            if p == _P_INF:
                p = np.inf
            children = [body_from_dict(c) for c in d["children"]]
            return LpSumBody(p, children)
        if kind == "linear_image":
            return LinearImageBody(d["matrix"], body_from_dict(d["child"]))
        if kind == "translate":
            return TranslateBody(d["offset"], body_from_dict(d["child"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedSpec(f"bad body object: {exc}") from None
    raise MalformedSpec(f"unknown body kind {kind!r}")


def body_to_json(body, indent=None):
    return json.dumps(body_to_dict(body), indent=indent)


def body_from_json(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedSpec(f"invalid JSON: {exc}") from None
    return body_from_dict(data)
