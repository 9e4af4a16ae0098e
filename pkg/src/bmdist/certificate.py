"""Exact optimality certificates for positions relative to the Euclidean ball.

A position r*B <= K <= R*B attains the least possible ratio exactly when
positive weights on inner and outer contact points make the rank-one sums
sum(lam_i y_i y_i^T) and sum(mu_j z_j z_j^T) equal; non-symmetric bodies
additionally need both weighted point sums to vanish (the balanced variant).
Feasibility is decided by a small dense LP, and the resulting certificate
replays with plain arithmetic, no solver required.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .bodies import _merge_close, radial_extremes
from .errors import (
    DimensionMismatch,
    EmptyContactSet,
    HypothesisViolated,
    InvalidP,
    MalformedSpec,
    NotOptimalPosition,
)
from .lp import solve_lp

# Relative radial tolerance for contact detection.
CONTACT_TOL = 1e-7
# Contacts closer than this merge into one LP column.
CLUSTER_EPS = 1e-6
# Weights must clear this floor for a certificate to count.
POSITIVITY_TOL = 1e-10
# Replayed decomposition residual must stay below this.
RESIDUAL_TOL = 1e-8


@dataclass
class ContactCertificate:
    """Positive-weight decomposition equating inner and outer rank-one sums.

    `inner` and `outer` are (N, n) and (M, n) point arrays on the inner and
    outer spheres, `lam` and `mu` the matching weights with sum(lam) = 1.
    `residual` is the max-abs entry of the weighted sum difference, including
    the two balancing sums when `balanced` is set.
    """

    inner: np.ndarray
    outer: np.ndarray
    lam: np.ndarray
    mu: np.ndarray
    balanced: bool
    residual: float

    def __post_init__(self):
        self.inner = np.atleast_2d(np.asarray(self.inner, dtype=float))
        self.outer = np.atleast_2d(np.asarray(self.outer, dtype=float))
        self.lam = np.asarray(self.lam, dtype=float).ravel()
        self.mu = np.asarray(self.mu, dtype=float).ravel()
        self.balanced = bool(self.balanced)
        self.residual = float(self.residual)

    @property
    def value(self) -> float:
        """Certified ratio R/r, recovered from the contact radii."""
        r = float(np.linalg.norm(self.inner, axis=1).mean())
        R = float(np.linalg.norm(self.outer, axis=1).mean())
        return R / r

    def to_dict(self):
        return {
            "inner": self.inner.tolist(),
            "outer": self.outer.tolist(),
            "lambda": self.lam.tolist(),
            "mu": self.mu.tolist(),
            "balanced": self.balanced,
            "residual": self.residual,
        }

    @staticmethod
    def from_dict(d) -> "ContactCertificate":
        if not isinstance(d, dict):
            raise MalformedSpec("certificate must be a JSON object")
        missing = {"inner", "outer", "lambda", "mu", "balanced", "residual"} - d.keys()
        if missing:
            raise MalformedSpec(
                f"certificate object is missing keys: {sorted(missing)}"
            )
        try:
            return ContactCertificate(
                inner=np.array(d["inner"], dtype=float),
                outer=np.array(d["outer"], dtype=float),
                lam=np.array(d["lambda"], dtype=float),
                mu=np.array(d["mu"], dtype=float),
                balanced=d["balanced"],
                residual=d["residual"],
            )
        except (TypeError, ValueError) as exc:
            raise MalformedSpec(f"certificate fields are not numeric: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "ContactCertificate":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedSpec(f"certificate is not valid JSON: {exc}") from exc
        return ContactCertificate.from_dict(d)


@dataclass(frozen=True)
class Infeasible:
    """Negative LP outcome: no positive-weight decomposition exists for the
    supplied contacts.  `eps` is the best weight floor the relaxation reached
    (None when even zero weights admit no solution)."""

    eps: float | None
    reason: str


def decomposition_residual(inner, outer, lam, mu, balanced=False) -> float:
    """Max-abs entry of sum(lam y y^T) - sum(mu z z^T); when balanced, also
    of the two weighted point sums.  Pure arithmetic."""
    inner = np.atleast_2d(np.asarray(inner, dtype=float))
    outer = np.atleast_2d(np.asarray(outer, dtype=float))
    lam = np.asarray(lam, dtype=float).ravel()
    mu = np.asarray(mu, dtype=float).ravel()
    S = inner.T @ (lam[:, None] * inner) - outer.T @ (mu[:, None] * outer)
    res = float(np.abs(S).max())
    if balanced:
        res = max(res, float(np.abs(lam @ inner).max()))
        res = max(res, float(np.abs(mu @ outer).max()))
    return res


def verify_certificate(
    cert: ContactCertificate,
    residual_tol: float = RESIDUAL_TOL,
    positivity_tol: float = POSITIVITY_TOL,
):
    """Arithmetic-only replay of a certificate.  Checks weight positivity,
    normalization, common contact radii, and the decomposition residual.
    Returns {"ok": bool, "residual": float, "checks": {name: bool}}."""
    checks = {}
    checks["nonempty"] = cert.inner.shape[0] >= 1 and cert.outer.shape[0] >= 1
    checks["weights_positive"] = bool(
        cert.lam.size
        and cert.mu.size
        and cert.lam.min(initial=np.inf) > positivity_tol
        and cert.mu.min(initial=np.inf) > positivity_tol
    )
    checks["normalized"] = bool(abs(cert.lam.sum() - 1.0) <= 1e-9)
    checks["counts_match"] = (
        cert.inner.shape[0] == cert.lam.size and cert.outer.shape[0] == cert.mu.size
    )
    rin = np.linalg.norm(cert.inner, axis=1)
    rout = np.linalg.norm(cert.outer, axis=1)
    checks["inner_radius_common"] = bool(
        rin.size and rin.min() > 0 and rin.max() / rin.min() - 1.0 <= 1e-6
    )
    checks["outer_radius_common"] = bool(
        rout.size and rout.min() > 0 and rout.max() / rout.min() - 1.0 <= 1e-6
    )
    if checks["counts_match"]:
        residual = decomposition_residual(
            cert.inner, cert.outer, cert.lam, cert.mu, cert.balanced
        )
    else:
        residual = math.inf
    checks["residual_small"] = residual <= residual_tol
    return {"ok": all(checks.values()), "residual": residual, "checks": checks}


def find_contacts(K, tol: float = CONTACT_TOL):
    """(r, R, inner, outer) for a body with the origin interior: the extreme
    Euclidean radii and every boundary point attaining them within relative
    `tol`.  Exact and finite for polytopes; clustered refined grid extremes
    for composite bodies.  Near-duplicates merge before use in the LP."""
    r, R, inner, outer = radial_extremes(K, tol)
    return r, R, _merge_close(inner, CLUSTER_EPS), _merge_close(outer, CLUSTER_EPS)


def _decomposition_system(inner, outer, balanced):
    """Equality system A w = b over weight variables w = (lam, mu) >= 0:
    matrix equality on the upper triangle, sum(lam) = 1, and, when balanced,
    both vanishing point sums."""
    N, n = inner.shape
    M = outer.shape[0]
    iu, ju = np.triu_indices(n)
    Y = inner[:, iu] * inner[:, ju]  # (N, n(n+1)/2)
    Z = outer[:, iu] * outer[:, ju]
    blocks = [np.hstack([Y.T, -Z.T])]
    rhs = [np.zeros(iu.size)]
    blocks.append(np.concatenate([np.ones(N), np.zeros(M)])[None, :])
    rhs.append(np.ones(1))
    if balanced:
        blocks.append(np.hstack([inner.T, np.zeros((n, M))]))
        rhs.append(np.zeros(n))
        blocks.append(np.hstack([np.zeros((n, N)), outer.T]))
        rhs.append(np.zeros(n))
    return np.vstack(blocks), np.concatenate(rhs)


def _max_floor(inner, outer, balanced):
    """Max eps s.t. some decomposition has every weight >= eps.  Substitutes
    w = slack + eps so the LP stays in standard form.  Returns (eps, lam, mu)
    or None when infeasible."""
    N = inner.shape[0]
    M = outer.shape[0]
    A, b = _decomposition_system(inner, outer, balanced)
    A_eps = np.hstack([A, A.sum(axis=1, keepdims=True)])
    c = np.zeros(N + M + 1)
    c[-1] = -1.0
    res = solve_lp(c, A_eps, b)
    if res.status != "optimal":
        return None
    eps = float(res.x[-1])
    w = res.x[:-1] + eps
    return eps, w[:N], w[N:]


def check_decomposition(inner, outer, balanced: bool = False):
    """Decide whether positive weights equate the two rank-one contact sums
    (plus balancing sums when `balanced`).  Returns a ContactCertificate or
    an Infeasible record.

    Zero-weight contacts are legitimate: when forcing every supplied point
    positive fails, a plain feasibility solve picks a support and the floor
    maximization reruns on that subset."""
    inner = np.atleast_2d(np.asarray(inner, dtype=float))
    outer = np.atleast_2d(np.asarray(outer, dtype=float))
    if inner.size == 0 or outer.size == 0:
        raise EmptyContactSet("both inner and outer contact lists must be nonempty")
    if inner.shape[1] != outer.shape[1]:
        raise DimensionMismatch(
            f"inner points live in R^{inner.shape[1]}, outer in R^{outer.shape[1]}"
        )

    full = _max_floor(inner, outer, balanced)
    if full is not None and full[0] > POSITIVITY_TOL:
        eps, lam, mu = full
        residual = decomposition_residual(inner, outer, lam, mu, balanced)
        return ContactCertificate(inner, outer, lam, mu, balanced, residual)

    # Subset pass: zero-eps feasibility, drop the zero-weight points, then
    # maximize the floor again on the surviving support.
    A, b = _decomposition_system(inner, outer, balanced)
    res = solve_lp(np.zeros(A.shape[1]), A, b)
    if res.status != "optimal":
        return Infeasible(
            eps=None if full is None else full[0],
            reason="no nonnegative weights equate the contact sums",
        )
    N = inner.shape[0]
    keep_in = res.x[:N] > POSITIVITY_TOL
    keep_out = res.x[N:] > POSITIVITY_TOL
    if not keep_in.any() or not keep_out.any():
        return Infeasible(eps=0.0, reason="feasible only with an empty side")
    sub = _max_floor(inner[keep_in], outer[keep_out], balanced)
    if sub is None or sub[0] <= POSITIVITY_TOL:
        return Infeasible(
            eps=None if sub is None else sub[0],
            reason="support subset admits no strictly positive weights",
        )
    eps, lam, mu = sub
    residual = decomposition_residual(
        inner[keep_in], outer[keep_out], lam, mu, balanced
    )
    return ContactCertificate(
        inner[keep_in], outer[keep_out], lam, mu, balanced, residual
    )


@dataclass(frozen=True)
class Certification:
    """Certified equality: the distance of the body, as positioned, to the
    Euclidean ball is exactly `value` = R/r."""

    value: float
    certificate: ContactCertificate

    def to_dict(self):
        return {"value": self.value, "certificate": self.certificate.to_dict()}


def certify_euclidean_distance(K, tol: float = CONTACT_TOL) -> Certification:
    """Certify that the position of K realizes its distance to the Euclidean
    ball, returning the exact value R/r with the weight decomposition.

    The body is tested as given, no repositioning happens here.  Symmetric
    bodies use the plain decomposition, non-symmetric ones the balanced
    variant.  Raises NotOptimalPosition when the LP is infeasible; that only
    means this position is uncertified, never that the ratio is wrong.
    """
    r, R, inner, outer = find_contacts(K, tol)
    balanced = not K.symmetric
    outcome = check_decomposition(inner, outer, balanced)
    if isinstance(outcome, Infeasible):
        raise NotOptimalPosition(
            "no positive contact decomposition at this position "
            f"({outcome.reason}); reposition the body and retry"
        )
    return Certification(value=R / r, certificate=outcome)


def lp_sum_contact_points(contacts1, contacts2, p):
    """Contact data of an lp-sum built from two children's contact data.

    Children must sit in inscribed position (inner radius 1, outer radius
    d_i).  For p in (2, inf], the sum then spans radii 1 and
    R = ||(d1, d2)||_r with r = 2p/(p-2): it touches the unit sphere at every
    embedded child inner contact (y, 0) and (0, u), and the R-sphere at one
    point per outer pair (z, v), rescaled to

        (d1^(2/(p-2)) z, d2^(2/(p-2)) v) * R / sqrt(d1^r + d2^r).

    At p = inf the rescaling degenerates to the identity and r = 2.  Returns
    (R, inner, outer) in the combined dimension.
    """
    if not (isinstance(p, (int, float)) and p > 2):
        raise InvalidP(f"constructed contacts need p in (2, inf], got {p!r}")
    r1, R1, in1, out1 = contacts1
    r2, R2, in2, out2 = contacts2
    for name, r in (("first", r1), ("second", r2)):
        if abs(r - 1.0) > 1e-9:
            raise HypothesisViolated(
                f"{name} child is not inscribed: inner radius {r!r} != 1"
            )
    in1 = np.atleast_2d(np.asarray(in1, dtype=float))
    in2 = np.atleast_2d(np.asarray(in2, dtype=float))
    out1 = np.atleast_2d(np.asarray(out1, dtype=float))
    out2 = np.atleast_2d(np.asarray(out2, dtype=float))
    n1, n2 = in1.shape[1], in2.shape[1]
    d1, d2 = float(R1), float(R2)

    if math.isinf(p):
        R = math.hypot(d1, d2)
        s1 = s2 = 1.0
    else:
        r_exp = 2.0 * p / (p - 2.0)
        e = 2.0 / (p - 2.0)
        R = (d1**r_exp + d2**r_exp) ** (1.0 / r_exp)
        scale = R / math.sqrt(d1**r_exp + d2**r_exp)
        s1 = scale * d1**e
        s2 = scale * d2**e

    inner = np.vstack(
        [
            np.hstack([in1, np.zeros((in1.shape[0], n2))]),
            np.hstack([np.zeros((in2.shape[0], n1)), in2]),
        ]
    )
    outer = np.array(
        [
            np.concatenate([s1 * z, s2 * v])
            for z, v in itertools.product(out1, out2)
        ]
    )
    return R, inner, outer
