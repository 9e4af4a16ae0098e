"""Builders for the bodies the toolkit reasons about.

Covers lp-sums, cones and double cones over lower-dimensional bases, Hanner
polytopes from a seg/l1/linf tree grammar, a small catalogue of standard
bodies, and an experimental generator of equilateral families of planar
symmetric bodies.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .bodies import (
    Ball,
    Body,
    LpSumBody,
    Polytope,
    as_polytope,
    polar,
    _embed_union,
    _vertex_product,
)
from .errors import (
    DegenerateCone,
    GeneratorCapacityExceeded,
    InvalidP,
    MalformedSpec,
    NotSymmetricBase,
    NotVertexEnumerable,
    UnknownName,
)


def segment():
    """The 1D unit ball [-1, 1]."""
    return Polytope([[-1.0], [1.0]], symmetric=True, prune=False)


def lp_sum(bodies, p):
    """lp-sum of bodies on block coordinates.

    p = 1 and p = inf produce explicit polytopes whenever every child is
    vertex-enumerable (hull of the embedded children, resp. the cartesian
    product of their vertex sets); other exponents return an LpSum node.
    """
    p = float(p)
    if math.isnan(p) or p < 1:
        raise InvalidP(f"lp-sum exponent must satisfy 1 <= p <= inf, got {p}")
    bodies = list(bodies)
    if not bodies:
        raise MalformedSpec("lp_sum needs at least one body")
    if len(bodies) == 1:
        return bodies[0]
    if p == 1 or np.isinf(p):
        try:
            parts = [as_polytope(b) for b in bodies]
        except NotVertexEnumerable:
            return LpSumBody(p, bodies)
        sym = all(P.symmetric for P in parts)
        if p == 1:
            return Polytope(_embed_union(parts), symmetric=sym, prune=True)
        return Polytope(_vertex_product(parts), symmetric=sym, prune=False)
    return LpSumBody(p, bodies)


def cone(base, apexes):
    """conv(base union apexes), vertices pruned.

    The base is any vertex-enumerable body (typically embedded with a lower
    intrinsic dimension); apexes is one point or a sequence of points.  The
    result must be full-dimensional in its ambient space.
    """
    P = as_polytope(base)
    A = np.atleast_2d(np.asarray(apexes, dtype=float))
    if A.shape[1] != P.dim:
        raise MalformedSpec("apex dimension does not match the base")
    C = Polytope(np.vstack([P.vertices, A]), symmetric=None, prune=True)
    if C.intrinsic_dim < C.dim:
        raise DegenerateCone(
            "cone is not full-dimensional; apexes lie in the base's affine span"
        )
    return C


def double_cone(base, apexes):
    """conv(base union {+-v}) over a 0-symmetric base.

    With orthogonal unit apexes this is the unit ball of  X  plus_1  l_1^m.
    """
    P = as_polytope(base)
    if not P.symmetric:
        raise NotSymmetricBase("double cone needs a 0-symmetric base")
    A = np.atleast_2d(np.asarray(apexes, dtype=float))
    if A.shape[1] != P.dim:
        raise MalformedSpec("apex dimension does not match the base")
    C = Polytope(np.vstack([P.vertices, A, -A]), symmetric=True, prune=True)
    if C.intrinsic_dim < C.dim:
        raise DegenerateCone(
            "double cone is not full-dimensional; apexes lie in the base's span"
        )
    return C


# ---------------------------------------------------------------------------
# Hanner polytopes


def parse_hanner(spec):
    """Parse `seg` / `l1(a,b,...)` / `linf(a,b,...)` into a nested tree of
    ("seg",) leaves and (op, [children]) nodes.  Nested tuples or lists in
    that shape pass through unchanged."""
    if isinstance(spec, (tuple, list)):
        if len(spec) == 1 and spec[0] == "seg":
            return ("seg",)
        if (
            len(spec) == 2
            and spec[0] in ("l1", "linf")
            and isinstance(spec[1], (tuple, list))
            and spec[1]
        ):
            return (spec[0], [parse_hanner(c) for c in spec[1]])
        raise MalformedSpec(f"bad hanner tree node: {spec!r}")
    if not isinstance(spec, str):
        raise MalformedSpec("hanner spec must be a string or a nested tree")
    text = spec.replace(" ", "")
    tree, rest = _parse_hanner_term(text)
    if rest:
        raise MalformedSpec(f"trailing input in hanner spec: {rest!r}")
    return tree


def _parse_hanner_term(text):
    if text.startswith("seg"):
        return ("seg",), text[3:]
    for op in ("linf", "l1"):
        if text.startswith(op + "("):
            rest = text[len(op) + 1 :]
            children = []
            while True:
                child, rest = _parse_hanner_term(rest)
                children.append(child)
                if rest.startswith(","):
                    rest = rest[1:]
                    continue
                if rest.startswith(")"):
                    return (op, children), rest[1:]
                raise MalformedSpec(f"expected ',' or ')' in hanner spec at {rest!r}")
    raise MalformedSpec(f"expected 'seg', 'l1(' or 'linf(' at {text!r}")


def hanner_leaves(tree):
    """Dimension of the Hanner polytope for a tree or spec string."""
    tree = parse_hanner(tree)
    if tree[0] == "seg":
        return 1
    return sum(hanner_leaves(c) for c in tree[1])


def hanner(spec):
    """The Hanner polytope of a seg/l1/linf tree, as an explicit polytope."""
    tree = parse_hanner(spec)
    return _hanner_build(tree)


def _hanner_build(tree):
    if tree[0] == "seg":
        return segment()
    p = 1.0 if tree[0] == "l1" else np.inf
    return lp_sum([_hanner_build(c) for c in tree[1]], p)


def hanner_optimal_position(spec):
    """(P, d): the Hanner polytope positioned so that  B_2 in P in d B_2
    with d = sqrt(dim), the extreme ratio a linear image can achieve.

    linf nodes take cartesian products of positioned children (the chain
    multiplies in quadrature); l1 nodes take the hull of the children scaled
    by 1/d_i and rescale by ||(d_1,...,d_k)||_2, which restores the chain by
    the Cauchy-Schwarz inequality.
    """
    tree = parse_hanner(spec)
    P, d = _hanner_position(tree)
    return P, d


def _hanner_position(tree):
    if tree[0] == "seg":
        return segment(), 1.0
    parts = [_hanner_position(c) for c in tree[1]]
    ds = np.array([d for _, d in parts])
    d = float(np.sqrt((ds * ds).sum()))
    if tree[0] == "linf":
        V = _vertex_product([P for P, _ in parts])
        return Polytope(V, symmetric=True, prune=False), d
    scaled = [
        Polytope(P.vertices / di, symmetric=True, prune=False)
        for (P, _), di in zip(parts, ds)
    ]
    V = _embed_union(scaled) * d
    return Polytope(V, symmetric=True, prune=True), d


# ---------------------------------------------------------------------------
# standard bodies


def cross_polytope(n):
    eye = np.eye(int(n))
    return Polytope(np.vstack([eye, -eye]), symmetric=True, prune=False)


def cube(n):
    V = np.array(list(itertools.product([-1.0, 1.0], repeat=int(n))))
    return Polytope(V, symmetric=True, prune=False)


def regular_polygon(m):
    m = int(m)
    if m < 3:
        raise MalformedSpec("regular polygon needs at least 3 vertices")
    ang = np.arange(m) * (2 * np.pi / m)
    V = np.column_stack([np.cos(ang), np.sin(ang)])
    return Polytope(V, symmetric=(m % 2 == 0), prune=False)


def polygon_disc(m=512):
    """Regular m-gon proxy for the Euclidean disc (vertices on the circle)."""
    return regular_polygon(m)


def simplex_regular_centered(n):
    """Regular n-simplex with centroid 0, inradius 1, circumradius n."""
    n = int(n)
    if n < 1:
        raise MalformedSpec("simplex dimension must be >= 1")
    # Helmert basis of the hyperplane orthogonal to (1,...,1) in R^{n+1}.
    H = np.zeros((n, n + 1))
    for k in range(1, n + 1):
        H[k - 1, :k] = 1.0
        H[k - 1, k] = -k
        H[k - 1] /= math.sqrt(k * (k + 1))
    E = np.eye(n + 1) - 1.0 / (n + 1)
    V = E @ H.T  # n+1 points in R^n, circumradius sqrt(n/(n+1))
    V *= n / math.sqrt(n / (n + 1))
    return Polytope(V, symmetric=False, prune=False)


def standard_body(name, n=None, m=None):
    """Catalogue lookup: cross_polytope(n), cube(n), simplex_regular_centered(n),
    regular_polygon(m), polygon_disc(m=512)."""
    if name == "cross_polytope":
        _need(n, "n", name)
        return cross_polytope(n)
    if name == "cube":
        _need(n, "n", name)
        return cube(n)
    if name == "simplex_regular_centered":
        _need(n, "n", name)
        return simplex_regular_centered(n)
    if name == "regular_polygon":
        _need(m, "m", name)
        return regular_polygon(m)
    if name == "polygon_disc":
        return polygon_disc(512 if m is None else m)
    raise UnknownName(f"unknown standard body {name!r}")


def _need(value, pname, name):
    if value is None:
        raise MalformedSpec(f"standard body {name!r} needs parameter {pname!r}")


def ball(n):
    return Ball(n)


# ---------------------------------------------------------------------------
# equilateral families (experimental generator)


def clip_polygon(vertices, normal, offset):
    """Intersect a cyclically ordered polygon with  { <normal, x> <= offset }
    (Sutherland-Hodgman, one halfplane)."""
    V = np.asarray(vertices, dtype=float)
    nrm = np.asarray(normal, dtype=float)
    d = V @ nrm - offset
    out = []
    m = len(V)
    tol = 1e-12
    for i in range(m):
        j = (i + 1) % m
        if d[i] <= tol:
            out.append(V[i])
        if (d[i] < -tol and d[j] > tol) or (d[i] > tol and d[j] < -tol):
            t = d[i] / (d[i] - d[j])
            out.append(V[i] + t * (V[j] - V[i]))
    if not out:
        raise MalformedSpec("halfplane clip removed the whole polygon")
    return np.array(out)


def _chord_cut_disc(N, angles, disc_m):
    """Disc proxy cut by antipodal chord pairs tangent to the concentric disc
    of radius cos(pi/4N); each chord is a side of a rotated regular 4N-gon
    circumscribed about that inner disc."""
    c = math.cos(math.pi / (4 * N))
    V = polygon_disc(disc_m).vertices
    for a in angles:
        nrm = np.array([math.cos(a), math.sin(a)])
        V = clip_polygon(V, nrm, c)
        V = clip_polygon(V, -nrm, c)
    return Polytope(V, symmetric=True, prune=True)


# Chord directions {0, a, a+b} for the two seed shapes of the default family,
# found by numerically equalizing the pairwise distances (see below).
_FAMILY_ANGLES = (
    (25 * math.pi / 64, 7 * math.pi / 16),
    (13 * math.pi / 32, math.pi / 2),
)


def equilateral_family(N, count, generator=None, disc_m=256):
    """A family of planar symmetric bodies built to be pairwise equidistant
    in Banach-Mazur distance (target 1/cos^2(pi/4N), reached only as the
    cited construction's parameter grows; reported, never asserted).

    EXPERIMENTAL.  Every body lies between the disc and its inscribed copy
    at radius cos(pi/4N), touching both, so each is within 1/cos(pi/4N) of
    the disc and any two are within the squared target of each other.  The
    default generator takes two seed shapes (the disc cut by three rotated
    4N-gon side pairs each) together with their polars rescaled into the
    same sandwich.  Polarity preserves the distance, which collapses the six
    pairwise values to four; the chord directions were tuned so the four
    agree to ~2e-3 at N = 2 (common value near 1.070).  For other N the
    same directions are used with the shallower chords and only the sandwich
    bounds are guaranteed.  Pass generator(N, count) returning a list of
    bodies to replace the construction.
    """
    N = int(N)
    count = int(count)
    if N < 2 or count < 1:
        raise MalformedSpec("need N >= 2 and count >= 1")
    if generator is not None:
        return list(generator(N, count))
    if count > 4:
        raise GeneratorCapacityExceeded(
            f"default generator holds 4 bodies, requested {count}"
        )
    c = math.cos(math.pi / (4 * N))
    out = []
    for a, b in _FAMILY_ANGLES:
        X = _chord_cut_disc(N, (0.0, a, a + b), disc_m)
        out.append(X)
        Q = polar(X)
        out.append(Polytope(c * Q.vertices, symmetric=True, prune=False))
    return out[:count]


def equilateral_target(N):
    """Closed-form target for pairwise distances in an equilateral family."""
    return 1.0 / math.cos(math.pi / (4 * int(N))) ** 2
