"""Series in s = 1/sqrt(k) for the type A, I and II critical points, closed-form
critical points with parallel rows, and large-k checks."""

import math
from dataclasses import dataclass, field

import numpy as np

from .charts import DELTA_SK1
from .errors import UnknownFamily
from .families import consistency_at, critical_point
from .objective import objective_reduced, reduced_geometry
from .seeds import family_chart
from .validation import check_int_k, check_k, check_lambda

PI = math.pi

# coordinate -> (constant term, {n: coefficient of k^(-n/2)})
_TYPE_II = {
    "xi1": (1.0, {4: 8 / PI, 5: -320 * PI / (3 * PI ** 4 * (PI - 2))}),
    "xi2": (0.0, {4: -4 / PI, 5: -32 / PI ** 3}),
    "xi3": (0.0, {2: 2.0, 3: 0.0}),
    "xi4": (0.0, {2: 4 / PI, 3: 32 / PI ** 3}),
    "xi5": (-1.0, {2: 2 + 8 * (PI + 1) / PI ** 2, 3: (64 * PI - 768) / (3 * PI ** 4 * (PI - 2))}),
}
_TYPE_A = {
    "xi1": (-1.0, {2: 2.0, 3: 0.0, 4: 8 / PI - 4}),
    "xi2": (0.0, {2: 2.0, 3: 0.0, 4: 4 / PI - 2}),
}
# type I xi4 coefficients are indexed n = 2, 3 (the indexing that reproduces the
# tabulated k = 1e4 approximation)
_TYPE_I = {
    "xi1": (-1.0, {2: 2.0, 3: 0.0, 4: 16 / PI - 4, 5: 4.441691}),
    "xi2": (0.0, {2: 2.0, 3: 0.0, 4: 8 / PI - 2, 5: 8 * (PI ** 2 + 4 * (PI - 1)) / PI ** 3}),
    "xi3": (0.0, {2: 0.0, 3: 0.0, 4: 16 / PI ** 2 - 12 / PI, 5: 6.205827}),
    "xi4": (0.0, {2: 2 - 4 / PI, 3: 32 / PI ** 2 * (1 / PI - 1)}),
    "xi5": (1.0, {2: 8 * (PI - 1) / PI ** 2, 3: -4.798751}),
}
_DECIMAL_ONLY = {"i": {("xi1", 5), ("xi5", 3), ("xi3", 5)}}
_DEFAULT_VARIANT = {"a": "truncated-3", "i": "full", "ii": "truncated-3"}
VARIANTS = ("truncated-3", "truncated-4", "full")


@dataclass
class SeriesModel:
    family: str
    constant_terms: dict
    coefficients: dict
    decimal_only: set = field(default_factory=set)

    @property
    def coordinates(self):
        return list(self.constant_terms)

    def coefficient(self, coord, n):
        return self.coefficients[(coord, n)]


def series_model(family):
    fam = str(family).lower()
    table = {"a": _TYPE_A, "i": _TYPE_I, "ii": _TYPE_II}.get(fam)
    if table is None:
        raise UnknownFamily(f"no series for family {family!r}")
    consts = {c: v[0] for c, v in table.items()}
    coefs = {(c, n): a for c, v in table.items() for n, a in v[1].items()}
    return SeriesModel(fam, consts, coefs, set(_DECIMAL_ONLY.get(fam, set())))


def _orders(model, coord, variant):
    ns = sorted(n for c, n in model.coefficients if c == coord)
    if variant == "full":
        return ns
    # truncated-N: the constant plus the first N-1 published orders
    keep = {"truncated-3": 2, "truncated-4": 3}[variant]
    return ns[:keep]


def series_eval(family, k, variant=None):
    """Chart vector from the truncated series at real k >= 3."""
    model = series_model(family)
    k = check_k(k, 3)
    variant = variant or _DEFAULT_VARIANT[model.family]
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    s = 1.0 / math.sqrt(k)
    out = []
    for coord in model.coordinates:
        terms = [model.coefficient(coord, n) * s ** n for n in _orders(model, coord, variant)]
        out.append(model.constant_terms[coord] + math.fsum(terms))
    return np.array(out)


@dataclass
class ComparisonRow:
    coordinate: str
    approx_series: float
    approx_series_plus: float
    approx_consistency: float
    solved: float
    abs_errors: dict


def compare_approximations(family, k=10_000, cfg=None):
    """Per coordinate: series approximation(s), consistency solution, critical point."""
    fam = str(family).lower()
    model = series_model(fam)
    pt = critical_point(fam, k, cfg)
    ca = series_eval(fam, k)
    cplus = series_eval(fam, k, "truncated-4") if fam == "a" else None
    rows = []
    for i, coord in enumerate(model.coordinates):
        errs = {"a": abs(ca[i] - pt.xi1[i]), "s": abs(pt.xi0[i] - pt.xi1[i])}
        if cplus is not None:
            errs["a+"] = abs(cplus[i] - pt.xi1[i])
        rows.append(ComparisonRow(coord, ca[i], None if cplus is None else cplus[i], pt.xi0[i], pt.xi1[i], errs))
    return rows


DECAY_LIMITS = {"ii": 0.5 - 2 / PI ** 2, "a": 0.5 - 1 / PI, "i": 0.5 - 1 / PI}


def decay_scan(family, k_list, cfg=None):
    """(k, F, normalized) with normalized = k F for II and M, F for A and I."""
    fam = str(family).lower()
    out = []
    for k in k_list:
        pt = critical_point(fam, k, cfg)
        F = objective_reduced(family_chart(fam), pt.xi1, k)
        out.append((k, F, k * F if fam in ("ii", "m") else F))
    return out


# --------------------------------------------------------------------------
# closed-form points with parallel rows


def _gap(k):
    return (math.sqrt(k - 1) - math.acos(1 / math.sqrt(k))) / PI


def closed_form_gamma_points(k):
    """(y_k, z_k): the zeros of Psi^k, i.e. critical points x 1_{k,k}."""
    k = check_int_k(k, 2)
    c = _gap(k)
    return -c / k, (1 + c) / k


def psi_k(x, k, lam=1.0):
    """(2 / k^2) Psi^k(x) for Phi_lam restricted to x 1_{k,k}."""
    k = check_int_k(k, 1)
    lam = check_lambda(lam)
    c = _gap(k) if k > 1 else 0.0
    if x > 0:
        return k * x - 1 - lam * c
    if x < 0:
        return k * x + lam * c
    raise ValueError("Psi^k is discontinuous at x = 0")


def reversed_row_residual(x, y, k):
    """Phi_1 at (-y 1_{1,k}; x 1_{1,k}; ...) with x, y > 0: (row 1 entry, row >= 2 entry).

    Rows 2..k are parallel to each other (theta = 0) and antiparallel to row 1
    (theta = pi); target angles are acos(1/sqrt k) and pi - acos(1/sqrt k).
    """
    k = check_int_k(k, 2)
    a = math.acos(1 / math.sqrt(k))
    r = math.sqrt(k - 1)
    cs = 0.5 * ((k - 1) * x - y - 1)
    row1 = (-PI * (k - 1) * x + r + PI - a) / (2 * PI) + cs
    rows = (PI * y - r + a) / (2 * PI) + cs
    return np.array([row1, rows])


@dataclass
class ReversedRowPoint:
    k: int
    x: float
    y: float
    W: np.ndarray
    certificate: float


def reversed_row_point(k):
    k = check_int_k(k, 2)
    a = math.acos(1 / math.sqrt(k))
    x = (math.sqrt(k - 1) + PI - a) / ((k - 1) * PI)
    y = (math.sqrt(k - 1) - a) / PI
    W = np.full((k, k), x)
    W[0, :] = -y
    cert = float(np.max(np.abs(reversed_row_residual(x, y, k))))
    return ReversedRowPoint(k, x, y, W, cert)


@dataclass
class ZCurveValue:
    printed: float
    consistent: float


def z_curve(k, lam):
    """The curve z_k(lam) 1_{k,k}: printed form 1/k + lam c and the Psi-consistent (1 + lam c)/k."""
    k = check_int_k(k, 1)
    lam = check_lambda(lam)
    c = _gap(k) if k > 1 else 0.0
    return ZCurveValue(1 / k + lam * c, (1 + lam * c) / k)


# --------------------------------------------------------------------------
# large-k expansions of the type II geometry


@dataclass
class AngleCheckRow:
    name: str
    measured: float
    expansion: float
    deviation: float
    next_order: float
    ratio: float


def asymptotic_angle_check(k, xi=None, order="full"):
    """Compare the type II large-k expansions of norms and angles with the geometry
    at the consistency solution.

    ``order="full"`` uses every printed term; ``"leading"`` keeps the constant and
    the first correction only.  ratio = deviation / s^(n+1), n the last power used.
    """
    if order not in ("full", "leading"):
        raise ValueError("order must be 'full' or 'leading'")
    k = check_k(k, 3)
    if xi is None:
        _, xi = consistency_at("ii", k)
    g = reduced_geometry(DELTA_SK1, xi, k)
    c4, c5 = _TYPE_II["xi1"][1][4], _TYPE_II["xi1"][1][5]
    e4, e5 = _TYPE_II["xi2"][1][4], _TYPE_II["xi2"][1][5]
    d2, d3 = _TYPE_II["xi5"][1][2], _TYPE_II["xi5"][1][3]
    s = 1 / math.sqrt(k)
    # name, measured, constant, [(power of s, coefficient), ...]
    checks = [
        ("tau", g.tau, 1.0, [(4, c4 + 2), (5, c5)]),
        ("tau_k", g.kappa, 1.0, [(2, (e4 ** 2 - 2 * d2) / 2), (3, e4 * e5 - d3)]),
        ("Theta_ij", g.Theta, PI / 2, [(4, -(2 * e4 + 4)), (5, -2 * e5)]),
        ("Theta_ik", g.Lambda, PI / 2, [(2, e4 + 2), (3, e5)]),
        ("alpha_ii", g.alpha_ii, 0.0, [(2, 2.0), (4, e4 ** 2 / 4 + 2 - d2)]),
        ("alpha_ij", g.alpha_ij, PI / 2, [(4, -e4), (5, -e5)]),
        ("alpha_ik", g.alpha_ik, PI / 2, [(2, -2.0), (4, -(2 - d2))]),
        ("alpha_kk", g.alpha_kk, PI, [(1, e4), (2, e5)]),
        ("alpha_kj", g.alpha_kj, PI / 2, [(2, e4), (3, e5)]),
    ]
    rows = []
    for name, meas, const, terms in checks:
        used = terms if order == "full" else terms[:1]
        exp = const + math.fsum(c * s ** n for n, c in used)
        nxt = s ** (used[-1][0] + 1)
        dev = abs(meas - exp)
        rows.append(AngleCheckRow(name, meas, exp, dev, nxt, dev / nxt))
    return rows
