"""Body expressions: gauges, supports, polars, inclusion scales, radial
extremes, pruning, maps, and serialization."""
import math

import numpy as np
import pytest

from bmdist import (
    Ball,
    LinearImageBody,
    LinearMap,
    LpSumBody,
    Polytope,
    TranslateBody,
    apply_map,
    as_polytope,
    body_from_dict,
    body_from_json,
    body_to_dict,
    body_to_json,
    cross_polytope,
    cube,
    inclusion_scale,
    polar,
    project,
    radial_extremes,
    regular_polygon,
    simplex_regular_centered,
)
from bmdist.bodies import direction_grid, prune_vertices
from bmdist.errors import (
    DimensionMismatch,
    DimensionTooHigh,
    MalformedSpec,
    NotIdempotent,
    NotVertexEnumerable,
    OriginNotInterior,
    SingularMap,
    SymmetryFlagViolated,
)
from bmdist.lp import gauge_lp


def _random_symmetric_polytope(rng, n):
    k = int(rng.integers(n + 1, n + 5))
    P = rng.normal(size=(k, n))
    return Polytope(np.vstack([P, -P]), symmetric=True, prune=True)


def _random_polytope_with_origin(rng, n):
    # Hull of points spread around 0; recenter so the origin is interior.
    P = rng.normal(size=(2 * n + 4, n))
    P -= P.mean(axis=0)
    return Polytope(P, prune=True)


# ---------------------------------------------------------------------------
# gauge and support


def test_gauge_homogeneity():
    rng = np.random.default_rng(0)
    for n in (2, 3):
        K = _random_symmetric_polytope(rng, n)
        for _ in range(50):
            x = rng.normal(size=n)
            lam = float(rng.uniform(0.0, 5.0))
            g1 = K.gauge(lam * x)
            g2 = lam * K.gauge(x)
            assert g1 == pytest.approx(g2, rel=1e-12, abs=1e-12)


def test_gauge_triangle_inequality_symmetric():
    rng = np.random.default_rng(1)
    for n in (2, 3):
        K = _random_symmetric_polytope(rng, n)
        for _ in range(50):
            x = rng.normal(size=n)
            y = rng.normal(size=n)
            assert K.gauge(x + y) <= K.gauge(x) + K.gauge(y) + 1e-12


def test_gauge_agrees_with_lp_formulation():
    rng = np.random.default_rng(2)
    for n in (2, 3):
        for K in (_random_symmetric_polytope(rng, n),
                  _random_polytope_with_origin(rng, n)):
            for _ in range(20):
                x = rng.normal(size=n)
                assert K.gauge(x) == pytest.approx(
                    gauge_lp(K.vertices, x), abs=1e-9
                )


def test_gauge_requires_interior_origin():
    K = Polytope([[1.0, 0.0], [2.0, 0.0], [1.0, 1.0]])
    assert not K.origin_interior
    with pytest.raises(OriginNotInterior):
        K.gauge([1.0, 0.0])


def test_gauge_outside_span_is_infinite():
    flat = Polytope([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0],
                     [0.0, 1.0, 0.0], [0.0, -1.0, 0.0]])
    assert flat.gauge([0.5, 0.0, 0.0]) == pytest.approx(0.5)
    assert flat.gauge([0.0, 0.0, 1.0]) == np.inf


def test_support_is_max_over_vertices():
    K = cube(2)
    assert K.support([1.0, 0.0]) == pytest.approx(1.0)
    assert K.support([1.0, 1.0]) == pytest.approx(2.0)
    assert K.support([-3.0, 0.5]) == pytest.approx(3.5)


# ---------------------------------------------------------------------------
# polar duality


def test_polar_of_cross_polytope_is_cube():
    Q = polar(cross_polytope(2))
    assert sorted(map(tuple, np.round(Q.vertices, 9))) == sorted(
        map(tuple, cube(2).vertices)
    )


def test_polar_involution_random():
    rng = np.random.default_rng(3)
    for n in (2, 3):
        for _ in range(20):
            K = _random_symmetric_polytope(rng, n)
            KK = polar(polar(K))
            A = np.array(sorted(map(tuple, np.round(K.vertices, 9))))
            B = np.array(sorted(map(tuple, np.round(KK.vertices, 9))))
            assert A.shape == B.shape
            assert np.allclose(A, B, atol=1e-9)


def test_gauge_support_duality():
    rng = np.random.default_rng(4)
    for n in (2, 3):
        K = _random_symmetric_polytope(rng, n)
        Q = polar(K)
        for _ in range(100):
            x = rng.normal(size=n)
            assert Q.gauge(x) == pytest.approx(K.support(x), abs=1e-9)


def test_polar_rejects_high_dimension_and_bad_origin():
    with pytest.raises(DimensionTooHigh):
        polar(cross_polytope(4))
    with pytest.raises(OriginNotInterior):
        polar(Polytope([[1.0, 0.0], [2.0, 0.0], [1.0, 1.0]]))


# ---------------------------------------------------------------------------
# inclusion scales and radial extremes


def test_inclusion_scale_known_pairs():
    assert inclusion_scale(cube(2), cross_polytope(2)) == pytest.approx(2.0)
    assert inclusion_scale(cross_polytope(2), cube(2)) == pytest.approx(1.0)
    assert inclusion_scale(cube(3), Ball(3)) == pytest.approx(math.sqrt(3))


def test_inclusion_scale_product_at_least_one():
    rng = np.random.default_rng(5)
    for n in (2, 3):
        for _ in range(10):
            K = _random_symmetric_polytope(rng, n)
            L = _random_polytope_with_origin(rng, n)
            assert inclusion_scale(K, L) * inclusion_scale(L, K) >= 1.0 - 1e-12


def test_radial_extremes_exact_for_polytopes():
    r, R, inner, outer = radial_extremes(cross_polytope(2))
    assert r == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert R == pytest.approx(1.0, abs=1e-12)
    assert len(inner) == 4 and len(outer) == 4
    assert np.allclose(np.linalg.norm(inner, axis=1), r, atol=1e-12)
    assert np.allclose(np.linalg.norm(outer, axis=1), R, atol=1e-12)

    r, R, inner, outer = radial_extremes(simplex_regular_centered(2))
    assert r == pytest.approx(1.0, abs=1e-9)
    assert R == pytest.approx(2.0, abs=1e-9)
    assert len(inner) == 3 and len(outer) == 3


def test_radial_extremes_sampled_for_composites():
    # l3-sum of two segments: gauge is the l3 norm, extremes 1 and 2^(1/6).
    S = LpSumBody(3.0, [Polytope([[-1.0], [1.0]]), Polytope([[-1.0], [1.0]])])
    r, R, _, _ = radial_extremes(S)
    assert r == pytest.approx(1.0, abs=1e-5)
    assert R == pytest.approx(2 ** (1 / 6), abs=1e-5)


def test_direction_grid_shapes():
    D2 = direction_grid(2, 64)
    assert D2.shape == (64, 2)
    assert np.allclose(np.linalg.norm(D2, axis=1), 1.0, atol=1e-12)
    D3 = direction_grid(3, 256)
    assert D3.shape == (256, 3)
    assert np.allclose(np.linalg.norm(D3, axis=1), 1.0, atol=1e-12)
    D4 = direction_grid(4, 128)
    assert D4.shape == (128, 4)
    assert np.allclose(np.linalg.norm(D4, axis=1), 1.0, atol=1e-12)


# ---------------------------------------------------------------------------
# construction, pruning, flags


def test_prune_removes_redundant_points():
    V = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0],
                  [0.0, 0.0], [0.2, 0.2], [1.0, 0.0]])
    pruned = prune_vertices(V)
    assert pruned.shape == (4, 2)


def test_prune_is_idempotent():
    rng = np.random.default_rng(6)
    V = rng.normal(size=(12, 3))
    once = prune_vertices(V)
    twice = prune_vertices(once)
    assert once.shape == twice.shape
    assert np.allclose(np.sort(once, axis=0), np.sort(twice, axis=0))


def test_symmetry_detection_and_flag_violation():
    assert Polytope([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]).symmetric
    assert not Polytope([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]]).symmetric
    with pytest.raises(SymmetryFlagViolated):
        Polytope([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]], symmetric=True)


def test_vertices_reject_bad_input():
    with pytest.raises(MalformedSpec):
        Polytope(np.zeros((0, 2)))
    with pytest.raises(MalformedSpec):
        Polytope([[np.nan, 0.0], [1.0, 0.0]])


# ---------------------------------------------------------------------------
# linear maps and body operators


def test_linear_map_validation():
    with pytest.raises(SingularMap):
        LinearMap([[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(MalformedSpec):
        LinearMap([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    with pytest.raises(DimensionMismatch):
        LinearMap(np.eye(2), pre_translate=[1.0, 2.0, 3.0])
    T = LinearMap([[0.0, 1.0], [2.0, 0.0]])
    assert np.allclose(T.matrix @ T.inverse, np.eye(2), atol=1e-12)
    back = LinearMap.from_dict(T.to_dict())
    assert np.allclose(back.matrix, T.matrix)


def test_apply_map_matches_gauge_transform():
    rng = np.random.default_rng(8)
    K = _random_symmetric_polytope(rng, 2)
    M = np.array([[1.0, 0.5], [-0.25, 2.0]])
    img = apply_map(LinearMap(M), K)
    Minv = np.linalg.inv(M)
    for _ in range(20):
        x = rng.normal(size=2)
        assert img.gauge(x) == pytest.approx(K.gauge(Minv @ x), abs=1e-9)


def test_apply_map_on_composite_stays_lazy():
    S = LpSumBody(3.0, [cross_polytope(2), Polytope([[-1.0], [1.0]])])
    img = apply_map(LinearMap(2.0 * np.eye(3)), S)
    assert isinstance(img, LinearImageBody)
    assert img.gauge([2.0, 0.0, 0.0]) == pytest.approx(S.gauge([1.0, 0.0, 0.0]))


def test_project_requires_idempotent():
    with pytest.raises(NotIdempotent):
        project([[1.0, 1.0], [0.0, 1.0]], cube(2))
    P = project([[1.0, 0.0], [0.0, 0.0]], cube(2))
    assert P.vertices.shape == (2, 2)
    assert np.allclose(np.abs(P.vertices[:, 0]), 1.0)
    assert np.allclose(P.vertices[:, 1], 0.0)


def test_translate_body_semantics():
    K = cube(2)
    T = TranslateBody([0.5, 0.0], K)
    assert T.support([1.0, 0.0]) == pytest.approx(1.5)
    assert T.support([-1.0, 0.0]) == pytest.approx(0.5)
    # gauge of the right vertex direction: (1.5, 0) sits on the boundary
    assert T.gauge([1.5, 0.0]) == pytest.approx(1.0, abs=1e-9)
    assert T.contains([1.4, 0.9]) and not T.contains([-0.6, 0.0])
    with pytest.raises(OriginNotInterior):
        TranslateBody([2.5, 0.0], K)


def test_as_polytope_on_sums_and_images():
    seg = Polytope([[-1.0], [1.0]])
    assert as_polytope(LpSumBody(1.0, [seg, seg])).vertices.shape == (4, 2)
    assert as_polytope(LpSumBody(np.inf, [seg, seg])).vertices.shape == (4, 2)
    with pytest.raises(NotVertexEnumerable):
        as_polytope(LpSumBody(3.0, [seg, seg]))
    img = LinearImageBody(2 * np.eye(2), cube(2))
    assert np.abs(as_polytope(img).vertices).max() == pytest.approx(2.0)


# ---------------------------------------------------------------------------
# serialization


def test_serialization_round_trips_every_kind():
    seg = Polytope([[-1.0], [1.0]])
    bodies = [
        cube(2),
        Ball(3),
        LpSumBody(2.5, [cross_polytope(2), seg]),
        LinearImageBody([[1.0, 0.5], [0.0, 1.0]], cube(2)),
        TranslateBody([0.25, 0.0], cube(2)),
    ]
    for body in bodies:
        again = body_from_dict(body_to_dict(body))
        assert again == body
        assert body_from_json(body_to_json(body)) == body


def test_deserialization_rejects_garbage():
    with pytest.raises(MalformedSpec):
        body_from_dict({"kind": "nonsense"})
    with pytest.raises(MalformedSpec):
        body_from_dict({"vertices": [[1.0, 0.0]]})
    with pytest.raises(MalformedSpec):
        body_from_json("{not json")


def test_regular_polygon_symmetry_flag():
    assert regular_polygon(6).symmetric
    assert not regular_polygon(5).symmetric
