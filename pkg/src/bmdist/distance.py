"""Numeric Banach-Mazur distance estimation.

The upper bound  d(K, L) <= s * t  is witnessed by a positioned pair
K + u  in  T(L + v)  in  s*t (K + u): `position_ratio` evaluates one such
position, `estimate_distance` minimizes it over invertible T (and over the
two translations when either body is unsymmetric) by multi-start
Nelder-Mead, and `verify_chain` re-checks a claimed chain at a tolerance.

Determinism: restart i derives all its randomness from seed + i, so results
are reproducible and the reported upper bound is non-increasing in the
restart budget for a fixed seed.  Ties between equally good restarts go to
the lowest restart index.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .bodies import (
    Body,
    LinearMap,
    Polytope,
    TranslateBody,
    apply_map,
    as_polytope,
    direction_grid,
    inclusion_scale,
)
from .errors import (
    DimensionMismatch,
    NotVertexEnumerable,
    SymmetryFlagViolated,
)

_BIG = 1e7


@dataclass
class EstimateConfig:
    restarts: int = 200
    seed: int = 0
    max_iters: int = 2000
    tol: float = 1e-9
    symmetric: bool | None = None  # None: use the bodies' flags
    inits: tuple = ()  # extra starting positions (LinearMap), run after the restarts


@dataclass
class DistanceEstimate:
    upper: float
    certified: float | None
    witness: LinearMap
    restarts_used: int
    best_restart_seed: int
    residual: float

    def to_dict(self):
        return {
            "upper": self.upper,
            "certified": self.certified,
            "witness": self.witness.to_dict(),
            "restarts_used": self.restarts_used,
            "best_restart_seed": self.best_restart_seed,
            "residual": self.residual,
        }


def _positioned(K, L, T):
    """(K + u, M(L + v)) as body expressions."""
    K_pos = K
    if np.any(T.pre_translate != 0):
        K_pos = _translated(K, T.pre_translate)
    L_map = LinearMap(T.matrix, pre_translate=T.post_translate)
    return K_pos, apply_map(L_map, L)


def _translated(body, t):
    try:
        P = as_polytope(body)
    except NotVertexEnumerable:
        return TranslateBody(t, body)
    return Polytope(P.vertices + t, symmetric=None, prune=False)


def position_ratio(K, L, T):
    """s * t  with  K + u  in  s T(L + v)  and  T(L + v)  in  t (K + u).

    Scale-invariant in T; equals the best ratio achievable by rescaling T.
    """
    if K.dim != L.dim or T.dim != K.dim:
        raise DimensionMismatch("bodies and map must share one dimension")
    K_pos, L_img = _positioned(K, L, T)
    s = inclusion_scale(K_pos, L_img)
    t = inclusion_scale(L_img, K_pos)
    return float(s * t)


def verify_chain(K, L, T, rho, tol=1e-9, grid=None):
    """True iff  K + u  in  (1+tol) T(L + v)  and  T(L + v)  in
    rho (1+tol) (K + u), checked on vertices or a direction grid."""
    if not isinstance(T, LinearMap):
        T = LinearMap(T)
    K_pos, L_img = _positioned(K, L, T)
    dirs = None if grid is None else direction_grid(K.dim, grid)
    s = inclusion_scale(K_pos, L_img, dirs=dirs)
    t = inclusion_scale(L_img, K_pos, dirs=dirs)
    return bool(s <= 1.0 + tol and t <= rho * (1.0 + tol))


# ---------------------------------------------------------------------------
# multi-start engine


def _intrinsic_polytope(P):
    """Rewrite an embedded polytope in intrinsic coordinates (distances are
    invariant under the orthogonal change and, for unsymmetric bodies, the
    centering translation)."""
    Q = P.span_basis
    if Q is None:
        return P
    V = P.vertices
    if P.symmetric:
        return Polytope(V @ Q, symmetric=True, prune=False)
    return Polytope((V - V.mean(axis=0)) @ Q, symmetric=None, prune=False)


class _PolyEval:
    """Vertices + offset-1 facet matrix of a full-dimensional polytope."""

    def __init__(self, body):
        P = as_polytope(body)
        if P.intrinsic_dim < P.dim:
            raise DimensionMismatch("reduce embedded bodies before evaluation")
        self.V = P.vertices
        self.G = P.facet_normals
        self.R = float(np.linalg.norm(self.V, axis=1).max())
        self.centroid = P.vertices.mean(axis=0)


class _SampledEval:
    """Boundary sample + gauge callable for composite bodies (symmetric
    search only)."""

    def __init__(self, body, n_dirs):
        self.body = body
        dirs = direction_grid(body.dim, n_dirs)
        g = body.gauge_many(dirs)
        self.V = dirs / g[:, None]
        self.R = float((1.0 / g).max())
        self.centroid = np.zeros(body.dim)

    def gauge_many(self, X):
        return self.body.gauge_many(X)


def _seed_matrix(i, n, seed):
    if i == 0:
        return np.eye(n)
    perms = _signed_permutations(n)
    if i <= len(perms):
        return perms[i - 1]
    rng = np.random.default_rng(seed + i)
    G = rng.standard_normal((n, n))
    if i % 2 == 0:
        q, r = np.linalg.qr(G)
        return q * np.sign(np.diag(r))
    return G + 0.3 * np.eye(n)


def _signed_permutations(n):
    out = []
    eye = np.eye(n)
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1.0, -1.0), repeat=n):
            M = np.zeros((n, n))
            for i, p in enumerate(perm):
                M[i, p] = signs[i]
            if not np.array_equal(M, eye):
                out.append(M)
    return out


# Initial-simplex scales for the scheduled polish rounds.  The big first
# kick lets a collapsed simplex tumble further down a kinked valley; later
# rounds refine at decreasing radii.  Failed rounds are discarded, so the
# schedule can only improve on the main run.
_POLISH_SCALES = (0.25, 0.08, 0.02, 0.005)


def _budget(nparams):
    """Per-parameter evaluation caps (main, polish), the polish plan, and
    the relative gate deciding which restarts earn the polish (None: all).

    The plan is either a tuple of initial-simplex scales (every scale is
    tried, improvements kept) or a round count (restart at the incumbent
    with the default simplex until a round stalls).  Restarting the simplex
    escapes the collapsed state Nelder-Mead reaches at objective kinks.  Up
    to nine parameters the main runs land within a few percent of each
    other, so only restarts whose main value sits near the best main value
    seen so far are worth finishing; the rest cannot catch up within the
    polish budget.  In larger searches (translations in three dimensions
    and up) a single basin needs thousands of evaluations, so every restart
    gets the stall-break chain.
    """
    if nparams <= 9:
        return 120, 200, _POLISH_SCALES, 0.05
    return 120, 400, 8, None


def _restart_simplex(x, scale):
    """Initial polish simplex: axis steps proportional to each parameter,
    floored so near-zero coordinates still move."""
    S = np.tile(x, (x.size + 1, 1))
    for j in range(x.size):
        S[j + 1, j] += scale * max(abs(x[j]), 0.25)
    return S


def estimate_distance(K, L, cfg=None, **overrides):
    """Multi-start Nelder-Mead upper bound on the Banach-Mazur distance.

    Returns a DistanceEstimate whose witness is rescaled so the inclusion
    K + u  in  T(L + v)  is tight; `residual` is the recomputed violation of
    that inclusion at the witness (float noise for polytope pairs).

    cfg.inits supplies known positions (a witness lifted from a related
    pair, say) polished alongside the random restarts; any evaluated
    position is a valid upper bound, so seeding never hurts soundness.
    """
    if cfg is None:
        cfg = EstimateConfig(**overrides)
    elif overrides:
        raise TypeError("pass either cfg or keyword overrides, not both")
    if K.dim != L.dim:
        raise DimensionMismatch("bodies live in different ambient dimensions")

    Kw, Lw = K, L
    if isinstance(Kw, Polytope) and isinstance(Lw, Polytope):
        dK = Kw.intrinsic_dim
        dL = Lw.intrinsic_dim
        if dK != dL:
            raise DimensionMismatch("bodies have different intrinsic dimensions")
        if dK < Kw.dim:
            Kw = _intrinsic_polytope(Kw)
            Lw = _intrinsic_polytope(Lw)

    if cfg.symmetric is None:
        symmetric = Kw.symmetric and Lw.symmetric
    elif cfg.symmetric:
        if not (Kw.symmetric and Lw.symmetric):
            raise SymmetryFlagViolated("symmetric search needs 0-symmetric bodies")
        symmetric = True
    else:
        symmetric = False

    n = Kw.dim
    try:
        eK, eL = _PolyEval(Kw), _PolyEval(Lw)
        fast = True
    except NotVertexEnumerable:
        if not symmetric:
            raise NotVertexEnumerable(
                "translation search needs vertex-enumerable bodies"
            )
        n_dirs = 256 if n == 2 else 512
        eK, eL = _SampledEval(Kw, n_dirs), _SampledEval(Lw, n_dirs)
        fast = False

    obj = _make_objective(eK, eL, n, symmetric, fast)
    nn = n * n
    uhat0 = -eK.centroid / eK.R
    vhat0 = -eL.centroid / eL.R

    # Budget evaluations by parameter count: the objective is a max of
    # smooth pieces, so Nelder-Mead stalls near kinks instead of meeting
    # shrink tolerances; restarts, not long tails, buy accuracy.
    nparams = nn if symmetric else nn + 2 * n
    fev_main, fev_polish, polish_plan, polish_gate = _budget(nparams)
    main_opts = {
        "maxiter": cfg.max_iters,
        "maxfev": min(2 * cfg.max_iters, fev_main * nparams),
        "xatol": 1e-6,
        "fatol": 1e-8,
        "adaptive": True,
    }
    polish_opts = dict(
        main_opts, maxfev=min(2 * cfg.max_iters, fev_polish * nparams)
    )
    if cfg.inits and (Kw is not K or Lw is not L):
        raise DimensionMismatch(
            "starting positions require full-dimensional bodies"
        )
    starts = [None] * cfg.restarts + [
        W if isinstance(W, LinearMap) else LinearMap(W) for W in cfg.inits
    ]

    def run(x0, gate_ref):
        res = minimize(obj, x0, method="Nelder-Mead", options=main_opts)
        val, x = res.fun, res.x
        main_val = val
        # gate_ref only ever reflects earlier restarts, so gating keeps the
        # reported minimum monotone in the restart budget.
        if polish_gate is not None and val > gate_ref * (1.0 + polish_gate):
            return val, x, main_val
        if isinstance(polish_plan, tuple):
            for scale in polish_plan:
                opts = dict(polish_opts,
                            initial_simplex=_restart_simplex(x, scale))
                res2 = minimize(obj, x, method="Nelder-Mead", options=opts)
                if res2.fun < val - 1e-12:
                    val, x = res2.fun, res2.x
        else:
            for _ in range(polish_plan):
                res2 = minimize(obj, x, method="Nelder-Mead",
                                options=polish_opts)
                if res2.fun >= val - 1e-12:
                    break
                val, x = res2.fun, res2.x
        return val, x, main_val

    best_val = np.inf
    best_main = np.inf
    best_x = None
    best_idx = -1
    for i, W in enumerate(starts):
        if W is not None:
            if symmetric:
                x0 = W.matrix.ravel()
            else:
                x0 = np.concatenate(
                    [W.matrix.ravel(), W.pre_translate / eK.R, W.post_translate / eL.R]
                )
        elif symmetric:
            x0 = _seed_matrix(i, n, cfg.seed).ravel()
        else:
            rng = np.random.default_rng(cfg.seed + i)
            jit = 0.15 * rng.standard_normal(2 * n) if i > 0 else np.zeros(2 * n)
            x0 = np.concatenate(
                [_seed_matrix(i, n, cfg.seed).ravel(), uhat0 + jit[:n], vhat0 + jit[n:]]
            )
        val, x, main_val = run(x0, best_main)
        best_main = min(best_main, main_val)
        if val < best_val:
            best_val, best_x, best_idx = val, x, i

    M = best_x[:nn].reshape(n, n)
    M = M / np.linalg.norm(M)
    if symmetric:
        u = np.zeros(n)
        v = np.zeros(n)
    else:
        u = best_x[nn : nn + n] * eK.R
        v = best_x[nn + n :] * eL.R
    witness0 = LinearMap(M, u, v)

    K_pos, L_img = _positioned(Kw, Lw, witness0)
    s = inclusion_scale(K_pos, L_img)
    t = inclusion_scale(L_img, K_pos)
    upper = max(1.0, float(s * t))
    witness = LinearMap(s * M, u, v)
    _, L_img_scaled = _positioned(Kw, Lw, witness)
    s_check = inclusion_scale(K_pos, L_img_scaled)
    residual = max(0.0, float(s_check) - 1.0)
    return DistanceEstimate(
        upper=upper,
        certified=None,
        witness=witness,
        restarts_used=len(starts),
        best_restart_seed=cfg.seed + best_idx,
        residual=residual,
    )


def _make_objective(eK, eL, n, symmetric, fast):
    nn = n * n
    eye = np.eye(n)
    VK, VL = eK.V, eL.V
    RK, RL = eK.R, eL.R

    if fast:
        GK, GL = eK.G, eL.G

        def ratio(M, Minv, u, v):
            den_L = 1.0 + GL @ v
            den_K = 1.0 + GK @ u
            m1 = min(den_L.min(), den_K.min())
            if m1 <= 1e-9:
                return _BIG * (1.0 + abs(m1))
            s = ((GL @ (Minv @ (VK + u).T)) / den_L[:, None]).max()
            t = ((GK @ (M @ (VL + v).T)) / den_K[:, None]).max()
            if not (s > 0 and t > 0) or not math.isfinite(s * t):
                return _BIG
            return s * t

    else:

        def ratio(M, Minv, u, v):
            s = eL.gauge_many(VK @ Minv.T).max()
            t = eK.gauge_many(VL @ M.T).max()
            if not (s > 0 and t > 0) or not math.isfinite(s * t):
                return _BIG
            return s * t

    def obj(theta):
        M = theta[:nn].reshape(n, n)
        fro = math.sqrt(float((M * M).sum()))
        if fro < 1e-12:
            return _BIG
        M = M / fro
        try:
            Minv = np.linalg.inv(M)
        except np.linalg.LinAlgError:
            return _BIG
        err = float(np.abs(M @ Minv - eye).max())
        if err > 1e-10:
            # stay inside the region where the witness map is constructible
            return _BIG * (1.0 + min(err, 1.0))
        if symmetric:
            u = _ZERO_CACHE.setdefault(n, np.zeros(n))
            v = u
        else:
            u = theta[nn : nn + n] * RK
            v = theta[nn + n :] * RL
            over = max(np.linalg.norm(u) - 2 * RK, np.linalg.norm(v) - 2 * RL)
            if over > 0:
                return _BIG * (1.0 + over)
        return ratio(M, Minv, u, v)

    return obj


_ZERO_CACHE: dict[int, np.ndarray] = {}
