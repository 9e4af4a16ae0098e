"""Dense two-phase simplex solver with Bland's rule, plus small LP helpers.

Solves   min c.x   s.t.  A x = b,  x >= 0   on the small dense problems the
toolkit produces: convex-membership tests, vertex pruning, the polytope gauge
in its LP formulation, and the contact-point decomposition of the Euclidean
certificate.  Bland's pivoting rule (lowest eligible index enters, lowest
basic index leaves on ratio ties) makes cycling impossible, which matters
because the certificate LPs are highly degenerate by construction.

Problems here have at most a few hundred variables, so a full tableau is
simpler and fast enough; no attempt is made at sparse or revised variants.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Pivot entries smaller than this are treated as zero.
PIVOT_TOL = 1e-11
# Reduced costs above -RCOST_TOL count as nonnegative (optimality).
RCOST_TOL = 1e-9
# Phase-1 objective below this counts as feasible.
FEAS_TOL = 1e-9


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    objective: float | None


def _iterate(tab, basis, ncols):
    """Run simplex pivots on a tableau whose last row holds reduced costs
    and last column the rhs.  Returns "optimal" or "unbounded"."""
    m = len(basis)
    while True:
        enter = -1
        for j in range(ncols):
            if tab[m, j] < -RCOST_TOL:
                enter = j
                break
        if enter < 0:
            return "optimal"
        leave = -1
        best = np.inf
        for i in range(m):
            a = tab[i, enter]
            if a > PIVOT_TOL:
                ratio = tab[i, -1] / a
                if ratio < best - PIVOT_TOL or (
                    ratio < best + PIVOT_TOL
                    and (leave < 0 or basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return "unbounded"
        _pivot(tab, basis, leave, enter)


def _pivot(tab, basis, row, col):
    tab[row] /= tab[row, col]
    piv = tab[row]
    for r in range(tab.shape[0]):
        if r != row:
            f = tab[r, col]
            if f != 0.0:
                tab[r] -= f * piv
    basis[row] = col


def solve_lp(c, A, b, feas_tol=FEAS_TOL):
    """Minimize c.x subject to A x = b, x >= 0."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    c = np.asarray(c, dtype=float).ravel()
    m, n = A.shape
    if b.shape != (m,) or c.shape != (n,):
        raise ValueError("inconsistent LP shapes")

    # Phase 1: artificial basis, minimize sum of artificials.
    A = A.copy()
    b = b.copy()
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0
    tab = np.zeros((m + 1, n + m + 1))
    tab[:m, :n] = A
    tab[:m, n : n + m] = np.eye(m)
    tab[:m, -1] = b
    # Reduced costs of phase-1 objective (sum of artificials) after pricing
    # out the artificial basis: -sum of constraint rows on original columns.
    tab[m, :n] = -A.sum(axis=0)
    tab[m, -1] = -b.sum()
    basis = list(range(n, n + m))
    if _iterate(tab, basis, n + m) != "optimal":
        raise RuntimeError("phase 1 cannot be unbounded")
    if -tab[m, -1] > feas_tol:
        return LPResult("infeasible", None, None)

    # Drive remaining artificials out of the basis; drop redundant rows.
    keep = []
    for i in range(m):
        if basis[i] >= n:
            piv = -1
            for j in range(n):
                if abs(tab[i, j]) > 1e-8:
                    piv = j
                    break
            if piv >= 0:
                _pivot(tab, basis, i, piv)
                keep.append(i)
            # else: row is redundant, drop it
        else:
            keep.append(i)
    if len(keep) < m:
        rows = keep + [m]
        tab = tab[rows][:, list(range(n)) + [n + m]]
        basis = [basis[i] for i in keep]
        m = len(keep)
    else:
        tab = tab[:, list(range(n)) + [n + m]]

    # Phase 2: price out the real objective over the current basis.
    tab[m, :n] = c
    tab[m, -1] = 0.0
    for i, k in enumerate(basis):
        if abs(tab[m, k]) > 0:
            tab[m] -= tab[m, k] * tab[i]
    status = _iterate(tab, basis, n)
    if status == "unbounded":
        return LPResult("unbounded", None, None)
    x = np.zeros(n)
    for i, k in enumerate(basis):
        x[k] = tab[i, -1]
    return LPResult("optimal", x, float(c @ x))


def convex_membership(points, x, tol=1e-9):
    """Weights of a convex combination of `points` equal to `x`, or None.

    `points` is (m, n).  Feasibility is judged by the phase-1 objective, so
    `tol` is an l1 bound on the coordinate residual.
    """
    P = np.asarray(points, dtype=float)
    x = np.asarray(x, dtype=float).ravel()
    m = P.shape[0]
    scale = max(1.0, float(np.abs(P).max()), float(np.abs(x).max()))
    A = np.vstack([P.T / scale, np.ones((1, m))])
    b = np.concatenate([x / scale, [1.0]])
    res = solve_lp(np.zeros(m), A, b, feas_tol=tol)
    if res.status != "optimal":
        return None
    return res.x


def gauge_lp(vertices, x):
    """Gauge of conv(vertices) at x by the LP  min sum(c)  s.t.
    sum c_i v_i = x, c >= 0.  Returns inf when x is outside the vertex cone.

    This is the reference formulation; the geometry module evaluates gauges
    from the facet representation instead and is cross-checked against this.
    """
    V = np.asarray(vertices, dtype=float)
    x = np.asarray(x, dtype=float).ravel()
    m = V.shape[0]
    res = solve_lp(np.ones(m), V.T, x)
    if res.status != "optimal":
        return np.inf
    return max(res.objective, 0.0)
