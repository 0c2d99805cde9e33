"""Consistency equations for the lam = 0 endpoint of a critical-point path.

Write Phi_lam = lam S + (1/2)(W - V)^Sigma.  A path starting at c0 in Sigma_0
exists only if every row of S(c0) is the same row vector; together with the
column-sum constraint this gives m equations in the m chart coordinates.
"""

import math
from dataclasses import dataclass

import numpy as np

from .charts import DELTA_SK, _check_chart_k, _check_xi, column_sums, in_omega_a
from .errors import NoConvergence, NotAdmissible, NotConsistent
from .newton import NewtonConfig, newton_solve
from .objective import _s_rows, reduced_geometry, s_reduced
from .validation import check_matrix, check_rows_nonzero


def s_map(W):
    """S(W) = Phi_1(W) - Phi_0(W), row by row; W must lie in Omega_a."""
    W = check_matrix(W)
    nw = check_rows_nonzero(W)
    if not in_omega_a(W):
        raise NotAdmissible("W has parallel rows or rows parallel to a target row")
    return _s_rows(W, nw)


@dataclass
class ConsistencySeed:
    """Seed coordinates: rho (p=0); rho, nu, eps (p=1); rho, eps, eta, nu (p>=2)."""

    rho: float
    nu: float = 0.0
    eps: float = 0.0
    eta: float = 0.0

    def to_xi(self, chart, k):
        k = _check_chart_k(chart, k, integer=False)
        p = chart.p
        r, n, e, h = self.rho, self.nu, self.eps, self.eta
        if p == 0:
            return np.array([1 + r, -r / (k - 1)])
        if p == 1:
            return np.array([1 + r, e, -n / (k - 1), -r - (k - 2) * e, 1 + n])
        # column sums: xi1 + (k-p-1) xi2 + p xi4 = 1 and (k-p) xi3 + xi5 + (p-1) xi6 = 1
        x3 = (1 - h - (p - 1) * (1 + n)) / (k - p)
        x4 = -(r + (k - p - 1) * e) / p
        return np.array([1 + r, e, x3, x4, h, 1 + n])

    @classmethod
    def from_xi(cls, chart, xi):
        xi = _check_xi(chart, xi)
        if chart.p == 0:
            return cls(rho=xi[0] - 1)
        if chart.p == 1:
            return cls(rho=xi[0] - 1, nu=xi[4] - 1, eps=xi[1])
        return cls(rho=xi[0] - 1, eps=xi[1], eta=xi[4], nu=xi[5] - 1)


def _row_differences(chart, s):
    if chart.p == 0:
        return [s[0] - s[1]]
    if chart.p == 1:
        # phi_11 - phi_12, phi_11 - phi_k1, phi_1k - phi_kk
        return [s[0] - s[1], s[0] - s[3], s[2] - s[4]]
    # own/off in each block, then block-0 row vs block-1 row in each column class
    return [s[0] - s[1], s[4] - s[5], s[0] - s[3], s[2] - s[4]]


def consistency_residual(chart, xi, k):
    xi = _check_xi(chart, xi)
    s = s_reduced(chart, xi, k)
    return np.concatenate([_row_differences(chart, s), column_sums(chart, xi, k) - 1.0])


def consistency_residual_closed_p0(rho, k):
    """(P0 + Theta0)(1 + rho + rho/(k-1)) + beta0 - alpha0 on xi = (1+rho, -rho/(k-1))."""
    k = _check_chart_k(DELTA_SK, k, integer=False)
    if rho == 0.0:
        return 0.0
    xi = ConsistencySeed(rho).to_xi(DELTA_SK, k)
    g = reduced_geometry(DELTA_SK, xi, k)
    tau, Th, al, be = g.tau, g.Theta, g.alpha, g.beta
    P0 = (k - 1) * (math.sin(Th) - math.sin(al) / tau) - math.sin(be) / tau
    return (P0 + Th) * (1 + rho + rho / (k - 1)) + be - al


def _as_xi(chart, seed, k):
    if isinstance(seed, ConsistencySeed):
        return seed.to_xi(chart, k)
    return _check_xi(chart, seed).copy()


def solve_consistency(chart, k, seed, cfg=None, return_info=False):
    """Newton solve of the consistency equations from a seed (ConsistencySeed or xi)."""
    cfg = cfg or NewtonConfig()
    k = _check_chart_k(chart, k, integer=False)
    x0 = _as_xi(chart, seed, k)
    res = newton_solve(lambda x: consistency_residual(chart, x, k), x0, cfg)
    return (res.x, res) if return_info else res.x


def k_track(chart, xi0, k_from, k_to, dk=0.1, cfg=None, adaptive=False, dk_max=None):
    """Continue a consistency solution in real k.

    Fixed mode takes steps of +-dk, seeding each solve with the previous
    solution.  Adaptive mode extrapolates linearly from the last two points
    and doubles (halves) the step after easy (failed) solves, up to ``dk_max``.
    Raises NoConvergence carrying the partial path.
    """
    cfg = cfg or NewtonConfig()
    k_from = _check_chart_k(chart, k_from, integer=False)
    k_to = _check_chart_k(chart, k_to, integer=False)
    xi = _check_xi(chart, xi0).copy()
    path = [(k_from, xi.copy())]
    if k_from == k_to:
        return path
    direction = 1.0 if k_to > k_from else -1.0
    step = abs(dk)
    dk_max = dk_max if dk_max is not None else max(abs(dk), abs(k_to - k_from))
    k_cur = k_from
    while direction * (k_to - k_cur) > 1e-12:
        k_next = k_cur + direction * step
        if direction * (k_next - k_to) > -1e-12 * max(1.0, abs(k_to)):
            k_next = k_to
        guess = path[-1][1]
        if adaptive and len(path) >= 2:
            (k0, x0), (k1, x1) = path[-2], path[-1]
            guess = x1 + (x1 - x0) * (k_next - k1) / (k1 - k0)
        try:
            x_new, info = solve_consistency(chart, k_next, guess, cfg, return_info=True)
        except (NoConvergence, NotAdmissible, ArithmeticError) as exc:
            if adaptive and step > 1e-3:
                step /= 4
                continue
            raise NoConvergence(f"k_track failed at k={k_next}: {exc}", partial=path, index=len(path)) from exc
        path.append((k_next, x_new))
        k_cur = k_next
        if adaptive and info.iterations <= 3:
            step = min(2 * step, dk_max)
    return path


def implied_column_derivative(chart, xi0, k):
    """Distinct column sums of Xi(xi'(0)) forced by the O(lam) terms.

    At a consistency point S has a common row s, and lam^{-1} Phi = 0 at lam = 0
    gives Xi(xi')^Sigma = -2 s.
    """
    xi0 = _check_xi(chart, xi0)
    r = consistency_residual(chart, xi0, k)
    if np.max(np.abs(r)) > 1e-8:
        raise NotConsistent(f"consistency residual {np.max(np.abs(r)):.2e} exceeds 1e-8")
    s = s_reduced(chart, xi0, k)
    if chart.p == 0:
        return np.array([-2 * s[0]])
    # block-0 columns, block-1 columns
    return np.array([-2 * s[0], -2 * s[2]])
