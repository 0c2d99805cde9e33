"""Objective F_lam and gradient Phi_lam, as dense O(k^2) sums and as O(1)
symmetry-reduced formulas on a fixed-point chart.

The reduced path treats ``k`` as a real multiplicity, so it is valid for
non-integer ``k`` and costs the same at ``k = 6`` and ``k = 20000``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .charts import PARALLEL_TOL, column_sums, embed, _check_chart_k, _check_xi
from .errors import NotAdmissible, SizeLimit, UnsupportedChart, ZeroVector
from .validation import check_lambda, check_matrix, check_rows_nonzero

TWO_PI = 2.0 * math.pi
MAX_FULL_K = 512


# --------------------------------------------------------------------------
# dense path

def _angle_matrix(X, Y, nx, ny):
    c = (X @ Y.T) / np.outer(nx, ny)
    return np.arccos(np.clip(c, -1.0, 1.0))


def _full_prelude(W, lam):
    W = check_matrix(W)
    if W.shape[0] > MAX_FULL_K:
        raise SizeLimit(f"dense evaluation capped at k={MAX_FULL_K}")
    lam = check_lambda(lam)
    nw = check_rows_nonzero(W)
    return W, lam, nw


def objective_full(W, lam=1.0):
    W, lam, nw = _full_prelude(W, lam)
    V = np.eye(W.shape[0])
    nv = np.ones(W.shape[0])

    def f_sum(X, Y, nx, ny):
        th = _angle_matrix(X, Y, nx, ny)
        ip = X @ Y.T
        f = lam / TWO_PI * (np.outer(nx, ny) * np.sin(th) - th * ip) + ip / 2
        return math.fsum(f.ravel())

    return 0.5 * f_sum(W, W, nw, nw) - f_sum(W, V, nw, nv) + 0.5 * f_sum(V, V, nv, nv)


def _s_rows(W, nw):
    k = W.shape[0]
    V = np.eye(k)
    th_ww = _angle_matrix(W, W, nw, nw)
    np.fill_diagonal(th_ww, 0.0)
    sin_ww = np.sin(th_ww)
    np.fill_diagonal(sin_ww, 0.0)
    coef_self = (sin_ww @ nw) / nw
    th_wv = _angle_matrix(W, V, nw, np.ones(k))
    coef_t = np.sin(th_wv).sum(axis=1) / nw
    return ((coef_self - coef_t)[:, None] * W - th_ww @ W + th_wv) / TWO_PI


def gradient_full(W, lam=1.0):
    """Phi_lam(W) as a k x k matrix; parallel rows use the theta in {0, pi} limits."""
    W, lam, nw = _full_prelude(W, lam)
    colsum = W.sum(axis=0) - 1.0
    return lam * _s_rows(W, nw) + 0.5 * colsum[None, :]


# --------------------------------------------------------------------------
# reduced path

def _pair(classes):
    """Inner product, norms and angle of two vectors given as weighted column classes.

    ``classes`` is a list of (weight, x, y).  The angle uses
    2 atan2(|x^ - y^|, |x^ + y^|), which keeps full accuracy near 0 and pi.
    """
    classes = [c for c in classes if c[0] != 0.0]
    nx = math.sqrt(math.fsum(w * x * x for w, x, _ in classes))
    ny = math.sqrt(math.fsum(w * y * y for w, _, y in classes))
    if nx == 0.0 or ny == 0.0:
        raise ZeroVector("zero row in reduced geometry")
    ip = math.fsum(w * x * y for w, x, y in classes)
    dm = math.fsum(w * (x / nx - y / ny) ** 2 for w, x, y in classes)
    dp = math.fsum(w * (x / nx + y / ny) ** 2 for w, x, y in classes)
    theta = 2.0 * math.atan2(math.sqrt(max(dm, 0.0)), math.sqrt(max(dp, 0.0)))
    return ip, nx, ny, theta


@dataclass
class _Block:
    n: float
    D: float
    O: float


@dataclass
class ReducedGeometry:
    """Norms and angles of Xi(xi) computed from its distinct inner products.

    Row classes are indexed by block: block 0 holds rows i < k - p, block 1 the
    last p rows.  For ``p = 1`` the named fields follow the usual labels
    (tau, kappa, Theta, Lambda, alpha_ii, alpha_ij, alpha_ik, alpha_kj,
    alpha_kk); for ``p = 0`` ``alpha`` and ``beta`` are the off-diagonal and
    diagonal target angles.
    """

    chart: object
    k: float
    blocks: list
    C: dict
    norms: list
    Theta_blk: list
    ip_blk: list
    Lambda: float = None
    ip_cross: float = None
    # target angles per block: own column, other column in block, column in other block
    a_own: list = field(default_factory=list)
    a_off: list = field(default_factory=list)
    a_cross: list = field(default_factory=list)

    @property
    def tau(self):
        return self.norms[0]

    @property
    def kappa(self):
        return self.norms[1] if len(self.norms) > 1 else self.norms[0]

    @property
    def Theta(self):
        return self.Theta_blk[0]

    @property
    def alpha_ii(self):
        return self.a_own[0]

    @property
    def alpha_ij(self):
        return self.a_off[0]

    @property
    def alpha_ik(self):
        return self.a_cross[0] if len(self.a_cross) else self.a_off[0]

    @property
    def alpha_kj(self):
        return self.a_cross[1] if len(self.a_cross) > 1 else self.a_off[0]

    @property
    def alpha_kk(self):
        return self.a_own[1] if len(self.a_own) > 1 else self.a_own[0]

    @property
    def alpha(self):
        return self.a_off[0]

    @property
    def beta(self):
        return self.a_own[0]

    def angles(self):
        """Every angle that occurs in Xi(xi), for admissibility checks."""
        out = [t for t in self.Theta_blk if t is not None]
        if self.Lambda is not None:
            out.append(self.Lambda)
        out += [a for a in self.a_own + self.a_off + self.a_cross if a is not None]
        return out


def _blocks(chart, xi, k):
    p = chart.p
    if p == 0:
        return [_Block(k, xi[0], xi[1])], {}
    if p == 1:
        return [_Block(k - 1, xi[0], xi[1]), _Block(1.0, xi[4], 0.0)], {(0, 1): xi[2], (1, 0): xi[3]}
    return [_Block(k - p, xi[0], xi[1]), _Block(float(p), xi[4], xi[5])], {(0, 1): xi[2], (1, 0): xi[3]}


def _geometry_raw(chart, xi, k):
    blocks, C = _blocks(chart, xi, k)
    nb = len(blocks)
    g = ReducedGeometry(chart=chart, k=k, blocks=blocks, C=C, norms=[], Theta_blk=[], ip_blk=[])
    for a, B in enumerate(blocks):
        b = 1 - a
        other = [] if nb == 1 else [(blocks[b].n, C[(a, b)])]
        row = [(1.0, B.D), (B.n - 1, B.O)] + other
        g.norms.append(math.sqrt(math.fsum(w * x * x for w, x in row if w)))
        if g.norms[-1] == 0.0:
            raise ZeroVector(f"rows of block {a} vanish")
        if B.n > 1:
            cls = [(1.0, B.D, B.O), (1.0, B.O, B.D), (B.n - 2, B.O, B.O)]
            cls += [(w, x, x) for w, x in other]
            ip, _, _, th = _pair(cls)
            g.Theta_blk.append(th)
            g.ip_blk.append(ip)
        else:
            g.Theta_blk.append(None)
            g.ip_blk.append(None)
        own = [(1.0, B.D, 1.0), (B.n - 1, B.O, 0.0)] + [(w, x, 0.0) for w, x in other]
        g.a_own.append(_pair(own)[3])
        if B.n > 1:
            off = [(1.0, B.D, 0.0), (1.0, B.O, 1.0), (B.n - 2, B.O, 0.0)] + [(w, x, 0.0) for w, x in other]
            g.a_off.append(_pair(off)[3])
        else:
            g.a_off.append(None)
        if nb == 2:
            n_b = blocks[b].n
            cr = [(1.0, B.D, 0.0), (B.n - 1, B.O, 0.0), (1.0, C[(a, b)], 1.0), (n_b - 1, C[(a, b)], 0.0)]
            g.a_cross.append(_pair(cr)[3])
    if nb == 2:
        B0, B1 = blocks
        cls = [(1.0, B0.D, C[(1, 0)]), (B0.n - 1, B0.O, C[(1, 0)]),
               (1.0, C[(0, 1)], B1.D), (B1.n - 1, C[(0, 1)], B1.O)]
        g.ip_cross, _, _, g.Lambda = _pair(cls)
    return g


def reduced_geometry(chart, xi, k, tol=PARALLEL_TOL):
    """Closed-form norms and angles of Xi(xi); raises NotAdmissible near parallel rows."""
    xi = _check_xi(chart, xi)
    k = _check_chart_k(chart, k, integer=False)
    g = _geometry_raw(chart, xi, k)
    for th in g.angles():
        if th < tol or th > math.pi - tol:
            raise NotAdmissible(f"rows within {tol:g} rad of parallel (angle {th:.3e})")
    return g


def _s_entries(g):
    """Distinct entries of S = Phi_1 - Phi_0 per block: (own col, other col in block, col in other block)."""
    out = []
    nb = len(g.blocks)
    for a, B in enumerate(g.blocks):
        b = 1 - a
        na = B.n
        th_a = g.Theta_blk[a] if na > 1 else 0.0
        sin_th = math.sin(th_a) if na > 1 else 0.0
        coef_self = (na - 1) * sin_th
        coef_t = [math.sin(g.a_own[a])]
        if na > 1:
            coef_t.append((na - 1) * math.sin(g.a_off[a]))
        if nb == 2:
            Bb = g.blocks[b]
            coef_self += Bb.n * g.norms[b] / g.norms[a] * math.sin(g.Lambda)
            coef_t.append(Bb.n * math.sin(g.a_cross[a]))
            Cab, Cba = g.C[(a, b)], g.C[(b, a)]
            lam_part = Bb.n * g.Lambda * Cba
        else:
            lam_part = 0.0
        coef = coef_self - math.fsum(coef_t) / g.norms[a]
        own = coef * B.D - ((na - 1) * th_a * B.O + lam_part) + g.a_own[a]
        off = None
        if na > 1:
            off = coef * B.O - (th_a * (B.D + (na - 2) * B.O) + lam_part) + g.a_off[a]
        cross = None
        if nb == 2:
            cross = coef * Cab - (th_a * (na - 1) * Cab + g.Lambda * (Bb.D + (Bb.n - 1) * Bb.O)) + g.a_cross[a]
        out.append(tuple(None if v is None else v / TWO_PI for v in (own, off, cross)))
    return out


def _ordered(chart, blocks_vals):
    """Arrange per-block (own, off, cross) values in chart coordinate order."""
    p = chart.p
    b0 = blocks_vals[0]
    if p == 0:
        return np.array([b0[0], b0[1]])
    b1 = blocks_vals[1]
    if p == 1:
        return np.array([b0[0], b0[1], b0[2], b1[2], b1[0]])
    return np.array([b0[0], b0[1], b0[2], b1[2], b1[0], b1[1]])


def s_reduced(chart, xi, k):
    """Distinct entries of the S matrix of Xi(xi), in chart order."""
    g = reduced_geometry(chart, xi, k)
    return _ordered(chart, _s_entries(g))


def _colsum_entries(chart, xi, k):
    cs = column_sums(chart, xi, k) - 1.0
    if chart.p == 0:
        return np.array([cs[0], cs[0]])
    if chart.p == 1:
        return np.array([cs[0], cs[0], cs[1], cs[0], cs[1]])
    return np.array([cs[0], cs[0], cs[1], cs[0], cs[1], cs[1]])


def gradient_reduced(chart, xi, k, lam=1.0):
    """The m distinct entries of Phi_lam(Xi(xi)), in chart order."""
    lam = check_lambda(lam)
    xi = _check_xi(chart, xi)
    s = s_reduced(chart, xi, k)
    return lam * s + 0.5 * _colsum_entries(chart, xi, k)


def _f_from(ip, nx, ny, theta, lam):
    return lam / TWO_PI * (nx * ny * math.sin(theta) - theta * ip) + ip / 2


def objective_reduced(chart, xi, k, lam=1.0):
    """F_lam(Xi(xi)) from multiplicity-weighted pair terms."""
    lam = check_lambda(lam)
    g = reduced_geometry(chart, xi, k)
    k = g.k
    blocks, C = g.blocks, g.C
    nb = len(blocks)
    ww, wv = [], []
    for a, B in enumerate(blocks):
        tau = g.norms[a]
        ww.append(B.n * tau * tau / 2)
        if B.n > 1:
            ww.append(B.n * (B.n - 1) * _f_from(g.ip_blk[a], tau, tau, g.Theta_blk[a], lam))
        wv.append(B.n * _f_from(B.D, tau, 1.0, g.a_own[a], lam))
        if B.n > 1:
            wv.append(B.n * (B.n - 1) * _f_from(B.O, tau, 1.0, g.a_off[a], lam))
        if nb == 2:
            b = 1 - a
            wv.append(B.n * blocks[b].n * _f_from(C[(a, b)], tau, 1.0, g.a_cross[a], lam))
    if nb == 2:
        ww.append(2 * blocks[0].n * blocks[1].n * _f_from(g.ip_cross, g.norms[0], g.norms[1], g.Lambda, lam))
    vv = k / 4 + lam * (k * k - k) / (4 * math.pi)
    return 0.5 * math.fsum(ww) - math.fsum(wv) + vv


# --------------------------------------------------------------------------
# structured decomposition (p = 1, lam = 1)

def _psi(x):
    return math.sin(x) + (math.pi - x) * math.cos(x)


@dataclass
class StructuredTerms:
    E1: float
    E2: float
    F1: float
    F2: float
    G_ii: float
    G_ij: float
    G_ik: float
    G_kk: float
    G_kj: float
    PsiTheta: float
    PsiLambda: float
    gamma: dict

    def objective(self, k):
        """Assemble F from the terms; the same-block pair weight is (k-1)(k-2)/2."""
        ww = (k - 1) * self.E1 + self.E2 + 0.5 * (k - 1) * (k - 2) * self.F1 + (k - 1) * self.F2
        wv = ((k - 1) * self.G_ii + (k - 1) * (k - 2) * self.G_ij + (k - 1) * self.G_ik
              + self.G_kk + (k - 1) * self.G_kj)
        return ww - wv + k / 4 + (k * k - k) / (4 * math.pi)


def structured_terms(chart, xi, k):
    if chart.p != 1:
        raise UnsupportedChart("structured terms are defined for the DeltaSk1 chart")
    g = reduced_geometry(chart, xi, k)
    tau, kappa = g.tau, g.kappa
    gamma = {name: _psi(getattr(g, "alpha_" + name)) for name in ("ii", "ij", "ik", "kj", "kk")}
    ps_t, ps_l = _psi(g.Theta), _psi(g.Lambda)
    return StructuredTerms(
        E1=tau * tau / 4, E2=kappa * kappa / 4,
        F1=tau * tau * ps_t / TWO_PI, F2=tau * kappa * ps_l / TWO_PI,
        G_ii=tau * gamma["ii"] / TWO_PI, G_ij=tau * gamma["ij"] / TWO_PI, G_ik=tau * gamma["ik"] / TWO_PI,
        G_kk=kappa * gamma["kk"] / TWO_PI, G_kj=kappa * gamma["kj"] / TWO_PI,
        PsiTheta=ps_t, PsiLambda=ps_l, gamma=gamma,
    )


# --------------------------------------------------------------------------
# minimal lambda = 1 equations (p = 0, 1)

def critical_residual_lambda1(chart, xi, k):
    """Minimal scalar critical-point equations at lam = 1, in the printed P/Q form.

    p = 0: P xi_a + (pi - Theta) Xhat + Theta xi_a + (target angle) - Theta, a = 1, 2,
    with Xhat the common column sum minus one.  p = 1: the analogous five equations
    from P w^1 + E^1 = Q w^k + E^k = 0.  Only the zero set is meaningful: the
    equations agree with ``gradient_reduced`` at critical points.
    """
    xi = _check_xi(chart, xi)
    if chart.p not in (0, 1):
        raise UnsupportedChart("minimal equations exist for p = 0 and p = 1 only")
    g = reduced_geometry(chart, xi, k)
    k = g.k
    cs = column_sums(chart, xi, k) - 1.0
    pi = math.pi
    if chart.p == 0:
        tau, Th, al, be = g.tau, g.Theta, g.alpha, g.beta
        P = (k - 1) * (math.sin(Th) - math.sin(al) / tau) - math.sin(be) / tau
        return np.array([
            P * xi[0] + (pi - Th) * cs[0] + Th * xi[0] + be - Th,
            P * xi[1] + (pi - Th) * cs[0] + Th * xi[1] + al - Th,
        ])
    tau, kap, Th, La = g.tau, g.kappa, g.Theta, g.Lambda
    P = ((k - 2) * (math.sin(Th) - math.sin(g.alpha_ij) / tau)
         + (kap * math.sin(La) - math.sin(g.alpha_ik) - math.sin(g.alpha_ii)) / tau)
    Q = (k - 1) * (tau * math.sin(La) - math.sin(g.alpha_kj)) / kap - math.sin(g.alpha_kk) / kap
    x1, x2, x3, x4, x5 = xi
    # 2 pi (row 1): P w1 - Theta sum_{j<k, j!=1} w_j - Lambda w_k + alpha^1 + pi Xhat
    r11 = P * x1 - Th * (k - 2) * x2 - La * x4 + g.alpha_ii + pi * cs[0]
    r12 = P * x2 - Th * (x1 + (k - 3) * x2) - La * x4 + g.alpha_ij + pi * cs[0]
    r1k = P * x3 - Th * (k - 2) * x3 - La * x5 + g.alpha_ik + pi * cs[1]
    # 2 pi (row k): Q w_k - Lambda sum_{j<k} w_j + alpha^k + pi Xhat
    rk1 = Q * x4 - La * (x1 + (k - 2) * x2) + g.alpha_kj + pi * cs[0]
    rkk = Q * x5 - La * (k - 1) * x3 + g.alpha_kk + pi * cs[1]
    return np.array([r11, r12, r1k, rk1, rkk])
