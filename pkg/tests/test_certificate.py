"""Contact-point certification: exact distances to the Euclidean ball."""
import math

import numpy as np
import pytest

from bmdist import (
    ContactCertificate,
    Infeasible,
    LinearMap,
    Polytope,
    apply_map,
    certify_euclidean_distance,
    check_decomposition,
    cross_polytope,
    cube,
    estimate_distance,
    find_contacts,
    hanner_optimal_position,
    lp_sum_contact_points,
    polygon_disc,
    simplex_regular_centered,
    verify_certificate,
)
from bmdist.errors import (
    DimensionMismatch,
    EmptyContactSet,
    HypothesisViolated,
    InvalidP,
    MalformedSpec,
    NotOptimalPosition,
)

SQRT2 = math.sqrt(2.0)


def _random_orthogonal(rng, n):
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    return Q


# ---------------------------------------------------------------------------
# certify_euclidean_distance on classical bodies


def test_certify_diamond():
    cert = certify_euclidean_distance(cross_polytope(2))
    assert cert.value == pytest.approx(SQRT2, abs=1e-9)
    assert cert.certificate.residual <= 1e-8
    assert cert.certificate.lam.sum() == pytest.approx(1.0, abs=1e-9)
    assert cert.certificate.lam.min() > 1e-10
    assert cert.certificate.mu.min() > 1e-10
    assert not cert.certificate.balanced


def test_certify_square():
    cert = certify_euclidean_distance(cube(2))
    assert cert.value == pytest.approx(SQRT2, abs=1e-9)
    assert verify_certificate(cert.certificate)["ok"]


def test_certify_cube_3d():
    cert = certify_euclidean_distance(cube(3))
    assert cert.value == pytest.approx(math.sqrt(3.0), abs=1e-9)
    assert cert.certificate.residual <= 1e-8


def test_certify_simplex_uses_balanced_decomposition():
    for n in (2, 3):
        cert = certify_euclidean_distance(simplex_regular_centered(n))
        assert cert.value == pytest.approx(float(n), abs=1e-9)
        assert cert.certificate.balanced
        assert cert.certificate.residual <= 1e-8


def test_certify_rejects_suboptimal_position():
    stretched = apply_map(LinearMap(np.diag([2.0, 1.0])), cross_polytope(2))
    with pytest.raises(NotOptimalPosition):
        certify_euclidean_distance(stretched)


def test_certify_orthogonal_invariance():
    rng = np.random.default_rng(7)
    for n, K in ((2, cross_polytope(2)), (3, cube(3))):
        base = certify_euclidean_distance(K).value
        for _ in range(10):
            Q = _random_orthogonal(rng, n)
            rotated = Polytope(K.vertices @ Q.T, symmetric=True, prune=False)
            cert = certify_euclidean_distance(rotated)
            assert cert.value == pytest.approx(base, abs=1e-9)
            assert cert.certificate.residual <= 1e-8


def test_certificate_value_matches_radii():
    cert = certify_euclidean_distance(cross_polytope(3)).certificate
    r = np.linalg.norm(cert.inner, axis=1).mean()
    R = np.linalg.norm(cert.outer, axis=1).mean()
    assert cert.value == pytest.approx(R / r, rel=1e-12)


# ---------------------------------------------------------------------------
# verify_certificate replay


def test_verify_accepts_fresh_certificate():
    cert = certify_euclidean_distance(cube(2)).certificate
    out = verify_certificate(cert)
    assert out["ok"]
    assert out["residual"] <= 1e-8
    assert all(out["checks"].values())


def test_verify_flags_tampered_weights():
    cert = certify_euclidean_distance(cube(2)).certificate
    bad = ContactCertificate(
        inner=cert.inner,
        outer=cert.outer,
        lam=cert.lam * 1.5,
        mu=cert.mu,
        balanced=cert.balanced,
        residual=cert.residual,
    )
    out = verify_certificate(bad)
    assert not out["ok"]
    assert not out["checks"]["normalized"]


def test_verify_flags_count_mismatch():
    cert = certify_euclidean_distance(cube(2)).certificate
    bad = ContactCertificate(
        inner=cert.inner,
        outer=cert.outer,
        lam=cert.lam[:-1],
        mu=cert.mu,
        balanced=cert.balanced,
        residual=cert.residual,
    )
    out = verify_certificate(bad)
    assert not out["ok"]
    assert not out["checks"]["counts_match"]
    assert math.isinf(out["residual"])


def test_verify_flags_uneven_radii():
    inner = np.array([[1.0, 0.0], [0.0, 1.2]])
    outer = np.array([[2.0, 0.0]])
    bad = ContactCertificate(inner, outer, [0.5, 0.5], [0.5], False, 0.0)
    assert not verify_certificate(bad)["checks"]["inner_radius_common"]


# ---------------------------------------------------------------------------
# serialization


def test_certificate_json_round_trip():
    cert = certify_euclidean_distance(cross_polytope(2)).certificate
    back = ContactCertificate.from_json(cert.to_json())
    assert np.allclose(back.inner, cert.inner)
    assert np.allclose(back.outer, cert.outer)
    assert np.allclose(back.lam, cert.lam)
    assert np.allclose(back.mu, cert.mu)
    assert back.balanced == cert.balanced
    assert back.residual == cert.residual
    assert verify_certificate(back)["ok"]


def test_certificate_rejects_malformed_input():
    with pytest.raises(MalformedSpec):
        ContactCertificate.from_json("{not json")
    with pytest.raises(MalformedSpec):
        ContactCertificate.from_dict({"inner": [[1.0, 0.0]]})
    with pytest.raises(MalformedSpec):
        ContactCertificate.from_dict([1, 2, 3])


# ---------------------------------------------------------------------------
# check_decomposition


def test_decomposition_identity_resolution():
    inner = np.eye(2)
    outer = SQRT2 * np.eye(2)
    cert = check_decomposition(inner, outer)
    assert isinstance(cert, ContactCertificate)
    assert cert.residual <= 1e-10
    assert cert.value == pytest.approx(SQRT2, rel=1e-12)


def test_decomposition_empty_and_mismatched_inputs():
    with pytest.raises(EmptyContactSet):
        check_decomposition(np.zeros((0, 2)), np.eye(2))
    with pytest.raises(DimensionMismatch):
        check_decomposition(np.eye(2), np.eye(3))


def test_decomposition_infeasible():
    out = check_decomposition([[1.0, 0.0]], [[0.0, 1.0]])
    assert isinstance(out, Infeasible)
    assert out.reason


def test_decomposition_drops_zero_weight_contacts():
    # full positive floor is impossible: the diagonal contact forces cross
    # terms no outer point can match, so the solver must fall back to the
    # e1-only support
    inner = np.array([[1.0, 0.0], [0.0, 1.0], [SQRT2 / 2, SQRT2 / 2]])
    outer = np.array([[SQRT2, 0.0]])
    cert = check_decomposition(inner, outer)
    assert isinstance(cert, ContactCertificate)
    assert cert.inner.shape[0] < 3
    assert cert.residual <= 1e-9
    assert verify_certificate(cert)["ok"]


def test_decomposition_balanced_requires_symmetric_sums():
    # one-sided contacts satisfy the plain system but not the balanced one
    inner = np.array([[1.0, 0.0], [0.0, 1.0]])
    outer = np.array([[1.0, 0.0], [0.0, 1.0]])
    plain = check_decomposition(inner, outer)
    assert isinstance(plain, ContactCertificate)
    balanced = check_decomposition(inner, outer, balanced=True)
    assert isinstance(balanced, Infeasible)


# ---------------------------------------------------------------------------
# constructed contacts for lp-sums


def test_lp_sum_contacts_two_diamonds():
    K = Polytope(SQRT2 * cross_polytope(2).vertices, symmetric=True)
    contacts = find_contacts(K)
    for p, expected in ((4.0, 8.0 ** 0.25), (math.inf, 2.0)):
        R, inner, outer = lp_sum_contact_points(contacts, contacts, p)
        assert R == pytest.approx(expected, rel=1e-12)
        assert np.allclose(np.linalg.norm(inner, axis=1), 1.0, atol=1e-9)
        assert np.allclose(np.linalg.norm(outer, axis=1), R, atol=1e-9)
        cert = check_decomposition(inner, outer)
        assert isinstance(cert, ContactCertificate)
        assert cert.residual <= 1e-8
        assert cert.value == pytest.approx(R, rel=1e-9)


def test_lp_sum_contacts_mixed_children():
    sq = find_contacts(cube(2))
    seg = find_contacts(Polytope([[-1.0], [1.0]], symmetric=True))
    R, inner, outer = lp_sum_contact_points(sq, seg, 4.0)
    # d = (sqrt(2), 1), r-exponent 4: R = (4 + 1)^(1/4)
    assert R == pytest.approx(5.0 ** 0.25, rel=1e-12)
    assert inner.shape[1] == 3
    cert = check_decomposition(inner, outer)
    assert isinstance(cert, ContactCertificate)
    assert cert.residual <= 1e-8


def test_lp_sum_contacts_validation():
    contacts = find_contacts(cube(2))
    with pytest.raises(InvalidP):
        lp_sum_contact_points(contacts, contacts, 2.0)
    with pytest.raises(InvalidP):
        lp_sum_contact_points(contacts, contacts, 1.5)
    grown = find_contacts(Polytope(2.0 * cube(2).vertices, symmetric=True))
    with pytest.raises(HypothesisViolated):
        lp_sum_contact_points(grown, contacts, 4.0)


# ---------------------------------------------------------------------------
# soundness against the numerical engine


def test_certified_value_bounds_estimates():
    K, _ = hanner_optimal_position("l1(seg,linf(seg,seg))")
    cert = certify_euclidean_distance(K)
    assert cert.value == pytest.approx(math.sqrt(3.0), abs=1e-9)
    ball = polygon_disc(64)
    square, _ = hanner_optimal_position("linf(seg,seg)")
    est = estimate_distance(square, ball, restarts=25, seed=0)
    assert est.upper >= certify_euclidean_distance(square).value - 0.02


def test_find_contacts_on_hanner_bodies():
    K, _ = hanner_optimal_position("linf(seg,l1(seg,seg))")
    r, R, inner, outer = find_contacts(K)
    assert r == pytest.approx(1.0, abs=1e-9)
    assert R == pytest.approx(math.sqrt(3.0), abs=1e-9)
    assert inner.shape[0] >= 3 and outer.shape[0] >= 3
