"""Fixed-point charts, the S_k x S_k action and the isotypic splitting of M(k, k).

A chart parametrizes the matrices fixed by a diagonal isotropy group
Delta(S_{k-p} x S_p):

* ``p = 0``: diagonal ``xi1``, off-diagonal ``xi2``;
* ``p = 1``: leading block ``A(xi1, xi2)``, last column ``xi3``, last row ``xi4``,
  corner ``xi5``;
* ``p >= 2``: ``[[A(xi1, xi2), xi3], [xi4, A(xi5, xi6)]]`` with constant
  off-diagonal blocks.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotInFixedSpace, UnsupportedChart
from .kernel import stable_angle
from .validation import check_int_k, check_k, check_matrix, check_rows_nonzero

FIXED_SPACE_TOL = 1e-10
PARALLEL_TOL = 1e-8

FAMILIES = {"DeltaSk": 0, "DeltaSk1": 1, "DeltaBlock": 2}


@dataclass(frozen=True)
class Chart:
    family: str
    p: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedChart(f"unknown chart family {self.family!r}")
        if self.family != "DeltaBlock" and self.p != FAMILIES[self.family]:
            raise UnsupportedChart(f"{self.family} requires p={FAMILIES[self.family]}")
        if self.family == "DeltaBlock" and self.p < 2:
            raise UnsupportedChart("DeltaBlock requires p >= 2")

    @property
    def m(self):
        return {0: 2, 1: 5}.get(self.p, 6)

    @classmethod
    def from_p(cls, p):
        if p == 0:
            return cls("DeltaSk", 0)
        if p == 1:
            return cls("DeltaSk1", 1)
        return cls("DeltaBlock", int(p))

    def min_k(self):
        return self.p + 2


DELTA_SK = Chart("DeltaSk", 0)
DELTA_SK1 = Chart("DeltaSk1", 1)


def _check_xi(chart, xi):
    xi = np.asarray(xi, dtype=float).ravel()
    if xi.shape[0] != chart.m:
        raise DimensionMismatch(f"chart {chart.family} needs {chart.m} coordinates, got {xi.shape[0]}")
    return xi


def _check_chart_k(chart, k, integer=True):
    k = check_int_k(k, 2) if integer else check_k(k, 2)
    if k < chart.min_k():
        raise DimensionMismatch(f"k={k} too small for p={chart.p} (need k >= {chart.min_k()})")
    return k


def _block(n, diag, off):
    return np.full((n, n), off) + (diag - off) * np.eye(n)


def embed(chart, xi, k):
    """Matrix Xi(xi) in M(k, k)."""
    xi = _check_xi(chart, xi)
    k = _check_chart_k(chart, k)
    if chart.p == 0:
        return _block(k, xi[0], xi[1])
    q = k - chart.p
    W = np.empty((k, k))
    W[:q, :q] = _block(q, xi[0], xi[1])
    W[:q, q:] = xi[2]
    W[q:, :q] = xi[3]
    if chart.p == 1:
        W[q:, q:] = xi[4]
    else:
        W[q:, q:] = _block(chart.p, xi[4], xi[5])
    return W


def extract(chart, W, tol=FIXED_SPACE_TOL):
    """Inverse of ``embed``; raises NotInFixedSpace if W breaks the entry pattern."""
    W = check_matrix(W)
    k = W.shape[0]
    _check_chart_k(chart, k)
    q = k - chart.p
    if chart.p == 0:
        xi = np.array([W[0, 0], W[0, 1]])
    elif chart.p == 1:
        xi = np.array([W[0, 0], W[0, 1], W[0, k - 1], W[k - 1, 0], W[k - 1, k - 1]])
    else:
        xi = np.array([W[0, 0], W[0, 1], W[0, q], W[q, 0], W[q, q], W[q, q + 1]])
    dev = float(np.max(np.abs(embed(chart, xi, k) - W)))
    if dev > tol:
        raise NotInFixedSpace(dev)
    return xi


def column_sums(chart, xi, k):
    """Distinct column sums of Xi(xi); k may be real."""
    xi = _check_xi(chart, xi)
    k = _check_chart_k(chart, k, integer=False)
    p = chart.p
    if p == 0:
        return np.array([xi[0] + (k - 1) * xi[1]])
    if p == 1:
        return np.array([xi[0] + (k - 2) * xi[1] + xi[3], (k - 1) * xi[2] + xi[4]])
    return np.array([
        xi[0] + (k - p - 1) * xi[1] + p * xi[3],
        (k - p) * xi[2] + xi[4] + (p - 1) * xi[5],
    ])


def column_sum_matrix(chart, k):
    """Linear map xi -> column_sums(xi) as a matrix (rows: distinct sums)."""
    return np.array([column_sums(chart, e, k) for e in np.eye(chart.m)]).T


def _check_perm(perm, n):
    perm = np.asarray(perm, dtype=int)
    if perm.shape != (n,) or sorted(perm.tolist()) != list(range(n)):
        raise DimensionMismatch(f"expected a permutation of {n} elements")
    return perm


def group_act(rho, eta, W):
    """(rho, eta) . W, with result[rho(i), eta(j)] = W[i, j]."""
    W = check_matrix(W, square=False)
    rho = _check_perm(rho, W.shape[0])
    eta = _check_perm(eta, W.shape[1])
    out = np.empty_like(W)
    out[np.ix_(rho, eta)] = W
    return out


def compose(g1, g2):
    """Permutation g1 o g2."""
    return np.asarray(g1)[np.asarray(g2)]


def chart_generators(chart, k):
    """Adjacent transpositions generating S_{k-p} x S_p."""
    k = _check_chart_k(chart, k)
    q = k - chart.p
    gens = []
    for lo, hi in ((0, q), (q, k)):
        for i in range(lo, hi - 1):
            g = np.arange(k)
            g[i], g[i + 1] = i + 1, i
            gens.append(g)
    return gens


def isotropy_contains(W, chart, tol=FIXED_SPACE_TOL):
    W = check_matrix(W)
    k = W.shape[0]
    if k < chart.min_k():
        return False
    return all(np.max(np.abs(group_act(g, g, W) - W)) <= tol for g in chart_generators(chart, k))


@dataclass
class IsotypicParts:
    part_I: np.ndarray
    part_C1: np.ndarray
    part_R1: np.ndarray
    part_A: np.ndarray

    def as_tuple(self):
        return self.part_I, self.part_C1, self.part_R1, self.part_A


def isotypic_project(W):
    W = check_matrix(W, square=False)
    mean = W.mean()
    part_I = np.full_like(W, mean)
    part_R1 = np.broadcast_to(W.mean(axis=0) - mean, W.shape).copy()
    part_C1 = np.broadcast_to((W.mean(axis=1) - mean)[:, None], W.shape).copy()
    part_A = W - part_I - part_R1 - part_C1
    return IsotypicParts(part_I, part_C1, part_R1, part_A)


def _parallel(theta, tol):
    return theta < tol or theta > np.pi - tol


def in_omega_a(W, V=None, tol=PARALLEL_TOL):
    """True iff no row of W is (anti)parallel to another row of W or a row of V."""
    W = check_matrix(W, square=False)
    V = np.eye(W.shape[1]) if V is None else check_matrix(V, square=False)
    check_rows_nonzero(W)
    check_rows_nonzero(V)
    k = W.shape[0]
    for i in range(k):
        for j in range(i + 1, k):
            if _parallel(stable_angle(W[i], W[j]), tol):
                return False
        for v in V:
            if _parallel(stable_angle(W[i], v), tol):
                return False
    return True
