"""The lam-path from a consistency solution xi0 in Sigma_0 to a critical point in Sigma_1.

Along the path Phi(xi0 + lam * xihat, lam) is divisible by lam; the O(lam) term fixes
the column sums of xi'(0) and the O(lam^2) row differences fix the rest.
"""

import math
from dataclasses import dataclass

import numpy as np

from .charts import DELTA_SK, DELTA_SK1, _check_chart_k, _check_xi, column_sum_matrix
from .consistency import ConsistencySeed, _row_differences, consistency_residual, implied_column_derivative
from .errors import InconsistentSystem, NoConvergence, NotConsistent, SingularJStar, UnsupportedChart
from .newton import NewtonConfig, fd_jacobian, newton_solve
from .objective import TWO_PI, gradient_reduced, reduced_geometry, s_reduced
from .validation import check_lambda

CONSISTENCY_TOL = 1e-8


@dataclass
class PathSample:
    lam: float
    xi: np.ndarray
    residual_norm: float


def _scaled_gradient(chart, k, lam):
    # Phi / lam keeps the Jacobian O(1) for small lam
    return lambda x: gradient_reduced(chart, x, k, lam) / lam


def lambda_step_solve(chart, guess, k, lam, cfg=None, return_info=False):
    """Solve Phi(xi, lam) = 0 by Newton from ``guess``; lam must be positive."""
    lam = check_lambda(lam)
    if lam == 0.0:
        raise ValueError("lam = 0 is the degenerate manifold Sigma_0; use solve_consistency")
    k = _check_chart_k(chart, k, integer=False)
    guess = _check_xi(chart, guess)
    cfg = cfg or NewtonConfig()
    fun = _scaled_gradient(chart, k, lam)
    res = newton_solve(fun, guess, cfg)
    return (res.x, res) if return_info else res.x


def _grad_norm(chart, xi, k, lam):
    return float(np.max(np.abs(gradient_reduced(chart, xi, k, lam))))


def direct_jump(chart, xi0, k, cfg=None, return_info=False):
    """Newton at lam = 1 started from xi0; the fast production path."""
    return lambda_step_solve(chart, xi0, k, 1.0, cfg, return_info)


def lambda_path(chart, xi0, k, lam_inc=0.01, cfg=None, derivative=None):
    """Samples at lam = lam_inc, 2 lam_inc, ..., 1.

    The first guess is xi0 + lam_inc * derivative (``derivative=None`` computes it
    from ``initial_derivative``; pass ``False`` to start at xi0); later guesses
    are the previous solution.
    """
    if not 0.0 < lam_inc <= 0.5:
        raise ValueError("lam_inc must lie in (0, 0.5]")
    xi0 = _check_xi(chart, xi0)
    n = int(round(1.0 / lam_inc))
    if abs(n * lam_inc - 1.0) > 1e-9:
        n = int(math.ceil(1.0 / lam_inc))
    if derivative is None:
        derivative = initial_derivative(chart, xi0, k)
    guess = xi0.copy() if derivative is False else xi0 + lam_inc * np.asarray(derivative, dtype=float)
    samples = []
    for i in range(1, n + 1):
        lam = 1.0 if i == n else i * lam_inc
        try:
            x = lambda_step_solve(chart, guess, k, lam, cfg)
        except NoConvergence as exc:
            raise NoConvergence(f"lambda_path failed at lam={lam}: {exc}", partial=samples, index=i) from exc
        samples.append(PathSample(lam, x, _grad_norm(chart, x, k, lam)))
        guess = x
    return samples


def _check_consistent(chart, xi0, k):
    r = float(np.max(np.abs(consistency_residual(chart, xi0, k))))
    if r > CONSISTENCY_TOL:
        raise NotConsistent(f"consistency residual {r:.2e} exceeds {CONSISTENCY_TOL:g}")


def initial_derivative(chart, xi0, k, fd_step=1e-7):
    """xi'(0) for any chart by the implicit function theorem.

    Row differences of S are stationary to first order along the path and the
    column sums of xi' equal -2 s: [d(row diffs); C] xi' = [0; -2 s].
    """
    xi0 = _check_xi(chart, xi0)
    k = _check_chart_k(chart, k, integer=False)
    _check_consistent(chart, xi0, k)
    J = fd_jacobian(lambda x: np.array(_row_differences(chart, s_reduced(chart, x, k))), xi0, fd_step)
    M = np.vstack([J, column_sum_matrix(chart, k)])
    rhs = np.concatenate([np.zeros(J.shape[0]), implied_column_derivative(chart, xi0, k)])
    if np.linalg.cond(M) > 1e14:
        raise InconsistentSystem("derivative system is singular")
    return np.linalg.solve(M, rhs)


def derivative_fd_oracle(chart, xi0, k, delta=1e-4, cfg=None):
    """(xi(delta) - xi0) / delta, with xi(delta) solved from xi0."""
    if not 1e-6 <= delta <= 1e-2:
        raise ValueError("delta must lie in [1e-6, 1e-2]")
    xi0 = _check_xi(chart, xi0)
    x = lambda_step_solve(chart, xi0, k, delta, cfg)
    return (x - xi0) / delta


# --------------------------------------------------------------------------
# p = 0: closed forms


@dataclass
class SensitivityP0:
    A1: float
    A2: float
    rhs: float


def sensitivity_p0(xi0, k):
    """A1 = dH12/dxihat_1, A2 = dH12/dxihat_2 (H12 = h1 - h2, scaled by 2 pi) and
    the column-sum value xi'_1 + (k-1) xi'_2."""
    xi0 = _check_xi(DELTA_SK, xi0)
    k = _check_chart_k(DELTA_SK, k, integer=False)
    g = reduced_geometry(DELTA_SK, xi0, k)
    tr, ep = xi0
    eta = tr + (k - 2) * ep
    A = 2 * tr * ep + (k - 2) * ep ** 2
    t0, Th, al, be = g.tau, g.Theta, g.alpha, g.beta
    sT, sa, sb = math.sin(Th), math.sin(al), math.sin(be)
    J1 = ep - A / t0 ** 2 * tr
    J2 = eta - A / t0 ** 2 * (k - 1) * ep
    K1 = ep * tr / t0 ** 2
    K2 = (k - 1) * ep ** 2 / t0 ** 2 - 1
    L1 = sa ** 2 - ep ** 2 / t0
    L2 = sb ** 2 - tr ** 2 / t0
    M1 = 1 - tr ** 2 / t0 ** 2
    M2 = -(k - 1) * ep * tr / t0 ** 2
    N1 = t0 + (k - 1) * sa ** 2 - (k - 1) * ep ** 2 / t0
    N2 = t0 + sb ** 2 - tr ** 2 / t0
    P = (k - 1) * (sT - sa / t0) - sb / t0
    c = 1 - k * ep
    G = 2 * A * (k - 1) * c / (t0 ** 4 * sT) + 2 * c / (t0 ** 2 * sT)
    A1 = (P + Th - G * J1 + (k - 1) * tr * c / (t0 ** 3 * sa) * L1 + tr * c / (t0 ** 3 * sb) * N2
          - M1 / (t0 * sb) - K1 / (t0 * sa))
    # the xihat_2 coefficient of the h2 term (K1 xihat_1 + K2 xihat_2) / (tau0 sin alpha0) is K2
    A2 = (-P - Th - G * J2 + (k - 1) * ep * c / (t0 ** 3 * sa) * N1 + (k - 1) * ep * c / (t0 ** 3 * sb) * L2
          - K2 / (t0 * sa) - M2 / (t0 * sb))
    rhs = ((k - 1) * (sa / t0 - sT) * tr + (k - 1) * ep * Th - be + sb / t0 * tr) / math.pi
    return SensitivityP0(A1, A2, rhs)


def initial_derivative_p0(rho_root, k):
    """(xi'_01, xi'_02) from A1 xi'_1 + A2 xi'_2 = 0 and the column-sum value."""
    k = _check_chart_k(DELTA_SK, k, integer=False)
    xi0 = ConsistencySeed(rho_root).to_xi(DELTA_SK, k)
    _check_consistent(DELTA_SK, xi0, k)
    s = sensitivity_p0(xi0, k)
    M = np.array([[s.A1, s.A2], [1.0, k - 1]])
    if abs(np.linalg.det(M)) < 1e-12 * max(1.0, abs(s.A1), abs(s.A2)):
        raise InconsistentSystem("A2 / A1 = k - 1")
    return np.linalg.solve(M, [0.0, s.rhs])


# --------------------------------------------------------------------------
# p = 1: coefficient families


@dataclass
class SensitivityCoefficients:
    """First-order coefficients of norms and angles along Xi(xi0 + lam xihat).

    Each family is a length-5 array c with (angle or ratio)(lam) = value_0 + lam c . xihat:
    R (Theta), S (Lambda), J (sin Theta), Kkj (sin Lambda tau/kappa),
    Kik (sin Lambda kappa/tau), E (target angles), F (sin(target angle) / row norm).
    """

    k: float
    xi0: np.ndarray
    tau: float
    kappa: float
    A: float
    Ak: float
    Theta: float
    Lambda: float
    alpha: dict
    R: np.ndarray
    S: np.ndarray
    J: np.ndarray
    Kkj: np.ndarray
    Kik: np.ndarray
    E: dict
    F: dict

    def N(self, xh):
        r, n, e = self._t()
        k = self.k
        return (1 + r) * xh[0] + (k - 2) * e * xh[1] - n * xh[2] / (k - 1)

    def Nk(self, xh):
        r, n, e = self._t()
        k = self.k
        return -(k - 1) * (r + (k - 2) * e) * xh[3] + (1 + n) * xh[4]

    def D(self, xh):
        r, n, e = self._t()
        k = self.k
        return e * xh[0] + (1 + r + (k - 3) * e) * xh[1] - n * xh[2] / (k - 1)

    def Dk(self, xh):
        r, n, e = self._t()
        k = self.k
        return (-(r + (k - 2) * e) * (xh[0] + (k - 2) * xh[1]) + (1 + r + (k - 2) * e) * xh[3]
                + (1 + n) * xh[2] - n * xh[4] / (k - 1))

    def _t(self):
        t = ConsistencySeed.from_xi(DELTA_SK1, self.xi0)
        return t.rho, t.nu, t.eps


def sensitivity_p1(xi0, k):
    xi0 = _check_xi(DELTA_SK1, xi0)
    k = _check_chart_k(DELTA_SK1, k, integer=False)
    g = reduced_geometry(DELTA_SK1, xi0, k)
    t = ConsistencySeed.from_xi(DELTA_SK1, xi0)
    r, n, e = t.rho, t.nu, t.eps
    rk = r + (k - 2) * e  # = -xi4
    tau, kap = g.tau, g.kappa
    A, Ak = g.ip_blk[0], g.ip_cross
    Th, La = g.Theta, g.Lambda
    sT, sL = math.sin(Th), math.sin(La)
    al = {"ii": g.alpha_ii, "ij": g.alpha_ij, "ik": g.alpha_ik, "kj": g.alpha_kj, "kk": g.alpha_kk}
    sa = {key: math.sin(v) for key, v in al.items()}

    cR = 2 / (tau ** 2 * sT)
    R = np.array([
        cR * ((1 + r) * A / tau ** 2 - e),
        cR * ((k - 2) * e * A / tau ** 2 - (1 + r + (k - 3) * e)),
        cR * (n / (k - 1) * (1 - A / tau ** 2)),
        0.0, 0.0,
    ])
    cS = 1 / (tau * kap * sL)
    S = np.array([
        cS * (Ak * (1 + r) / tau ** 2 + rk),
        cS * (Ak * (k - 2) * e / tau ** 2 + (k - 2) * rk),
        -cS * (Ak * n / ((k - 1) * tau ** 2) + (1 + n)),
        -cS * (Ak * (k - 1) * rk / kap ** 2 + (1 + r + (k - 2) * e)),
        cS * (Ak * (1 + n) / kap ** 2 + n / (k - 1)),
    ])
    J = A / tau ** 2 * R
    Kkj = Ak * S / kap ** 2 + np.array([
        (1 + r) * sL / (tau * kap),
        (k - 2) * e * sL / (tau * kap),
        -n * sL / ((k - 1) * tau * kap),
        (k - 1) * rk * tau * sL / kap ** 3,
        -(1 + n) * tau * sL / kap ** 3,
    ])
    Kik = Ak * S / tau ** 2 + np.array([
        -(1 + r) * kap * sL / tau ** 3,
        -(k - 2) * e * kap * sL / tau ** 3,
        n * kap * sL / ((k - 1) * tau ** 3),
        -(k - 1) * rk * sL / (tau * kap),
        (1 + n) * sL / (tau * kap),
    ])

    # F = d(sin(alpha) / |w|) = (cos(alpha) / |w|) E - sin(alpha) d|w| / |w|^2,
    # with cos(alpha) = <w, v> / |w|
    E, F = {}, {}
    t3 = tau ** 3
    s = sa["ij"]
    E["ij"] = np.array([e * (1 + r) / (t3 * s), ((k - 2) * e ** 2 / tau ** 2 - 1) / (tau * s),
                        -e * n / ((k - 1) * t3 * s), 0.0, 0.0])
    F["ij"] = e / tau ** 2 * E["ij"] + np.array([-(1 + r) * s / t3, -(k - 2) * e * s / t3, n * s / ((k - 1) * t3), 0.0, 0.0])
    s = sa["ik"]
    E["ik"] = np.array([-n * (1 + r) / (t3 * (k - 1) * s), -(k - 2) * e * n / (t3 * (k - 1) * s),
                        (n ** 2 / ((k - 1) ** 2 * tau ** 2) - 1) / (tau * s), 0.0, 0.0])
    F["ik"] = -n / ((k - 1) * tau ** 2) * E["ik"] + np.array([-(1 + r) * s / t3, -(k - 2) * e * s / t3,
                                                         n * s / ((k - 1) * t3), 0.0, 0.0])
    s = sa["ii"]
    E["ii"] = np.array([((1 + r) ** 2 / tau ** 2 - 1) / (tau * s), (1 + r) * (k - 2) * e / (t3 * s),
                        -(1 + r) * n / ((k - 1) * t3 * s), 0.0, 0.0])
    F["ii"] = (1 + r) / tau ** 2 * E["ii"] + np.array([-(1 + r) * s / t3, -(k - 2) * e * s / t3,
                                                  n * s / ((k - 1) * t3), 0.0, 0.0])
    k3 = kap ** 3
    s = sa["kj"]
    E["kj"] = np.array([0.0, 0.0, 0.0, ((k - 1) * rk ** 2 / kap ** 2 - 1) / (kap * s), -(1 + n) * rk / (k3 * s)])
    F["kj"] = -rk / kap ** 2 * E["kj"] + np.array([0.0, 0.0, 0.0, (k - 1) * rk * s / k3, -(1 + n) * s / k3])
    s = sa["kk"]
    E["kk"] = np.array([0.0, 0.0, 0.0, -(k - 1) * (1 + n) * rk / (k3 * s), ((1 + n) ** 2 / kap ** 2 - 1) / (kap * s)])
    F["kk"] = (1 + n) / kap ** 2 * E["kk"] + np.array([0.0, 0.0, 0.0, (k - 1) * rk * s / k3, -(1 + n) * s / k3])
    return SensitivityCoefficients(k, xi0, tau, kap, A, Ak, Th, La, al, R, S, J, Kkj, Kik, E, F)


def h_hat_p1(sc, xh):
    """(h11, h12, h1k, hk1, hkk): the xihat-linear part of lam^-2 (2 pi Phi), without
    the common pi Xi(xihat')^Sigma term."""
    xh = np.asarray(xh, dtype=float)
    k = sc.k
    x1, x2, x3, x4, x5 = sc.xi0
    y1, y2, y3, y4, y5 = xh
    sT, sL = math.sin(sc.Theta), math.sin(sc.Lambda)
    sa = {key: math.sin(v) for key, v in sc.alpha.items()}
    tau, kap, Th, La = sc.tau, sc.kappa, sc.Theta, sc.Lambda
    d = lambda c: float(np.dot(c, xh))  # noqa: E731
    R, S = d(sc.R), d(sc.S)

    # row 1, columns (1, j, k); sums over rows 2..k-1 evaluated column by column
    coefA = (k - 2) * sT + kap / tau * sL - ((k - 2) * sa["ij"] + sa["ik"] + sa["ii"]) / tau
    Xi1 = np.array([y1, y2, y3])
    sumXi = np.array([(k - 2) * y2, y1 + (k - 3) * y2, (k - 2) * y3])
    Xik = np.array([y4, y4, y5])
    w1 = np.array([x1, x2, x3])
    sumw = np.array([(k - 2) * x2, x1 + (k - 3) * x2, (k - 2) * x3])
    wk = np.array([x4, x4, x5])
    scal1 = (k - 2) * d(sc.J) + d(sc.Kik) - (k - 2) * d(sc.F["ij"]) - d(sc.F["ik"]) - d(sc.F["ii"])
    h1 = (coefA * Xi1 - Th * sumXi - La * Xik + scal1 * w1 - R * sumw - S * wk
          + d(sc.E["ij"]) * np.array([0.0, 1.0, 0.0]) + d(sc.E["ik"]) * np.array([0.0, 0.0, 1.0])
          + d(sc.E["ii"]) * np.array([1.0, 0.0, 0.0]))

    # row k, columns (j, k)
    coefK = ((k - 1) * (tau * sL - sa["kj"]) - sa["kk"]) / kap
    Xik2 = np.array([y4, y5])
    sumXi_all = np.array([y1 + (k - 2) * y2, (k - 1) * y3])
    sumw_all = np.array([x1 + (k - 2) * x2, (k - 1) * x3])
    wk2 = np.array([x4, x5])
    scalk = (k - 1) * (d(sc.Kkj) - d(sc.F["kj"])) - d(sc.F["kk"])
    hk = (coefK * Xik2 - La * sumXi_all - S * sumw_all + scalk * wk2
          + d(sc.E["kj"]) * np.array([1.0, 0.0]) + d(sc.E["kk"]) * np.array([0.0, 1.0]))
    return np.array([h1[0], h1[1], h1[2], hk[0], hk[1]])


def zeta_jacobian(sc):
    """3 x 5 Jacobian of zeta = (h11 - h12, h11 - hk1, h1k - hkk) in xihat."""
    cols = []
    for ell in range(5):
        h = h_hat_p1(sc, np.eye(5)[ell])
        cols.append([h[0] - h[1], h[0] - h[3], h[2] - h[4]])
    return np.array(cols).T


def j_star(sc):
    """Columns 2, 3, 4 of the zeta Jacobian."""
    return zeta_jacobian(sc)[:, 1:4]


def initial_derivative_p1(t, k):
    """xi'(0) for the DeltaSk1 chart from the coefficient families.

    ``t`` is a ConsistencySeed or a chart vector at a consistency solution.
    """
    k = _check_chart_k(DELTA_SK1, k, integer=False)
    xi0 = t.to_xi(DELTA_SK1, k) if isinstance(t, ConsistencySeed) else _check_xi(DELTA_SK1, t)
    _check_consistent(DELTA_SK1, xi0, k)
    sc = sensitivity_p1(xi0, k)
    Js = j_star(sc)
    if abs(np.linalg.det(Js)) < 1e-12 or np.linalg.cond(Js) > 1e14:
        raise SingularJStar("J* is singular")
    M = np.vstack([zeta_jacobian(sc), column_sum_matrix(DELTA_SK1, k)])
    rhs = np.concatenate([np.zeros(3), implied_column_derivative(DELTA_SK1, xi0, k)])
    return np.linalg.solve(M, rhs)


def initial_derivative_closed(chart, xi0, k):
    """Closed-form derivative where one exists (p = 0, 1); generic otherwise."""
    if chart.p == 0:
        return initial_derivative_p0(_check_xi(chart, xi0)[0] - 1.0, k)
    if chart.p == 1:
        return initial_derivative_p1(xi0, k)
    raise UnsupportedChart("no closed-form derivative for p >= 2; use initial_derivative")
