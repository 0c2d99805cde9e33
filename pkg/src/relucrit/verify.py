"""Property suites behind ``relucrit verify``.

Each check returns a CheckResult; ``run_verify`` groups them by suite name.
All randomness comes from a seeded numpy Generator so runs are reproducible.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from .charts import Chart, column_sums, embed, extract, group_act, isotypic_project, in_omega_a
from .continuation import direct_jump, lambda_path
from .families import FAMILIES, consistency_at
from .kernel import kernel_f_lambda, kernel_grad_lambda, mc_kernel_samples
from .newton import NewtonConfig
from .objective import gradient_full, gradient_reduced, objective_full, objective_reduced
from .seeds import load_seeds
from .series import asymptotic_angle_check

SUITES = ("kernel", "symmetry", "objective", "consistency", "continuation", "series")
SUITE_ALIASES = {
    "kernel_geometry": "kernel",
    "symmetry_charts": "symmetry",
    "charts": "symmetry",
    "objective_gradient": "objective",
    "consistency_solver": "consistency",
    "path_continuation": "continuation",
    "series_asymptotics": "series",
}


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _random_rotation(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def _random_pair(rng, n, max_cos=0.999):
    while True:
        w, v = rng.standard_normal(n), rng.standard_normal(n)
        if abs(w @ v) / (np.linalg.norm(w) * np.linalg.norm(v)) <= max_cos:
            return w, v


def _random_admissible(rng, k):
    while True:
        W = rng.standard_normal((k, k))
        if in_omega_a(W):
            return W


def _random_chart_point(rng):
    while True:
        k = int(rng.integers(3, 17))
        chart = Chart.from_p(int(rng.integers(0, k - 1)))
        xi = rng.standard_normal(chart.m)
        if in_omega_a(embed(chart, xi, k)):
            return chart, xi, k


# --------------------------------------------------------------------------
# kernel


def check_kernel_invariance(rng, n=100):
    worst = 0.0
    for _ in range(n):
        d = int(rng.integers(2, 8))
        w, v = _random_pair(rng, d)
        g = _random_rotation(rng, d)
        lam = float(rng.uniform())
        worst = max(worst, abs(kernel_f_lambda(g @ w, g @ v, lam) - kernel_f_lambda(w, v, lam)))
    return worst <= 1e-12, f"max |f(gw, gv) - f(w, v)| = {worst:.2e} (tol 1e-12)"


def check_kernel_gradient_fd(rng, n=50, h=1e-6):
    worst = 0.0
    for _ in range(n):
        d = int(rng.integers(2, 8))
        w, v = _random_pair(rng, d)
        lam = float(rng.uniform())
        g = kernel_grad_lambda(w, v, lam)
        fd = np.array([
            (kernel_f_lambda(w + h * e, v, lam) - kernel_f_lambda(w - h * e, v, lam)) / (2 * h) for e in np.eye(d)
        ])
        worst = max(worst, float(np.max(np.abs(g - fd)) / max(1.0, np.max(np.abs(g)))))
    return worst <= 1e-6, f"max relative FD error = {worst:.2e} (tol 1e-6)"


def check_kernel_monte_carlo(rng, n_samples=200_000):
    cases = [(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 1.0)]
    for _ in range(4):
        w, v = _random_pair(rng, 3)
        cases.append((w, v, float(rng.uniform(0.1, 1.0))))
    worst = 0.0
    for i, (w, v, lam) in enumerate(cases):
        samples = mc_kernel_samples(w, v, lam, n_samples, seed=1000 + i)
        se = samples.std(ddof=1) / math.sqrt(n_samples)
        worst = max(worst, abs(samples.mean() - kernel_f_lambda(w, v, lam)) / se)
    return worst <= 3.0, f"max |MC - f| / sigma = {worst:.2f} (tol 3)"


# --------------------------------------------------------------------------
# symmetry


def check_gamma_invariance(rng, n=20):
    worst = 0.0
    for _ in range(n):
        k = int(rng.integers(3, 9))
        W = _random_admissible(rng, k)
        rho, eta = rng.permutation(k), rng.permutation(k)
        lam = float(rng.uniform())
        worst = max(worst, abs(objective_full(group_act(rho, eta, W), lam) - objective_full(W, lam)))
    return worst <= 1e-12, f"max |F(gW) - F(W)| = {worst:.2e} (tol 1e-12)"


def check_equivariance(rng, n=20):
    worst = 0.0
    for _ in range(n):
        k = int(rng.integers(3, 9))
        W = _random_admissible(rng, k)
        rho = rng.permutation(k)
        lam = float(rng.uniform())
        lhs = gradient_full(group_act(rho, rho, W), lam)
        rhs = group_act(rho, rho, gradient_full(W, lam))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst <= 1e-12, f"max |Phi(gW) - g Phi(W)| = {worst:.2e} (tol 1e-12)"


def check_isotypic(rng, n=20):
    worst = 0.0
    for _ in range(n):
        k = int(rng.integers(2, 12))
        W = rng.standard_normal((k, k))
        scale = float(np.linalg.norm(W))
        parts = isotypic_project(W).as_tuple()
        worst = max(worst, float(np.max(np.abs(sum(parts) - W))) / scale)
        for i in range(4):
            for j in range(i + 1, 4):
                worst = max(worst, abs(float(np.sum(parts[i] * parts[j]))) / scale ** 2)
    return worst <= 1e-12, f"max reconstruction / cross inner product = {worst:.2e} (tol 1e-12)"


def check_chart_roundtrip(rng, n=50):
    worst = 0.0
    for _ in range(n):
        chart, xi, k = _random_chart_point(rng)
        worst = max(worst, float(np.max(np.abs(extract(chart, embed(chart, xi, k)) - xi))))
    return worst <= 1e-15, f"max |extract(embed(xi)) - xi| = {worst:.2e} (tol 1e-15)"


# --------------------------------------------------------------------------
# objective


def check_reduced_vs_full(rng, n=100):
    worst_g, worst_f = 0.0, 0.0
    for _ in range(n):
        chart, xi, k = _random_chart_point(rng)
        lam = float(rng.uniform())
        W = embed(chart, xi, k)
        G = gradient_full(W, lam)
        scale = max(1.0, float(np.max(np.abs(G))))
        worst_g = max(worst_g, float(np.max(np.abs(gradient_reduced(chart, xi, k, lam) - extract(chart, G)))) / scale)
        F = objective_full(W, lam)
        worst_f = max(worst_f, abs(objective_reduced(chart, xi, k, lam) - F) / max(1.0, abs(F)))
    ok = worst_g <= 1e-12 and worst_f <= 1e-12
    return ok, f"gradient {worst_g:.2e}, objective {worst_f:.2e} (tol 1e-12, k <= 16)"


def check_gradient_fd(rng, n=50, h=1e-6):
    worst = 0.0
    for _ in range(n):
        k = int(rng.integers(3, 7))
        W = _random_admissible(rng, k)
        lam = float(rng.uniform())
        G = gradient_full(W, lam)
        fd = np.zeros_like(W)
        for i in range(k):
            for j in range(k):
                E = np.zeros_like(W)
                E[i, j] = h
                fd[i, j] = (objective_full(W + E, lam) - objective_full(W - E, lam)) / (2 * h)
        worst = max(worst, float(np.max(np.abs(G - fd)) / max(1.0, np.max(np.abs(G)))))
    return worst <= 1e-6, f"max relative FD error = {worst:.2e} (tol 1e-6)"


def check_sigma0(rng, n=100):
    on, off = 0.0, math.inf
    for _ in range(n):
        k = int(rng.integers(3, 10))
        W = _random_admissible(rng, k)
        if np.max(np.abs(W.sum(axis=0) - 1.0)) >= 2e-3:
            off = min(off, float(np.max(np.abs(gradient_full(W, 0.0)))))
        W0 = W - (W.sum(axis=0) - 1.0) / k
        on = max(on, float(np.max(np.abs(gradient_full(W0, 0.0)))))
    return on <= 1e-13 and off >= 1e-3, f"on Sigma_0 {on:.2e} (tol 1e-13), off Sigma_0 min {off:.2e} (>= 1e-3)"


# --------------------------------------------------------------------------
# consistency / continuation


def check_seeds(seeds=None, tol=1e-10):
    """Every seed leads to a consistent xi0 with column sums 1 and a critical point."""
    records = seeds if seeds is not None else load_seeds()
    cfg = NewtonConfig()
    lines, ok = [], True
    fams = sorted({r.family for r in records}, key=FAMILIES.index)
    if not fams:
        return False, "seed file holds no records"
    for fam in fams:
        rec = next(r for r in records if r.family == fam)
        try:
            chart, xi0 = consistency_at(fam, rec.k, cfg, records)
            cs = float(np.max(np.abs(column_sums(chart, xi0, rec.k) - 1)))
            xi1 = direct_jump(chart, xi0, rec.k, cfg)
            g = float(np.max(np.abs(gradient_reduced(chart, xi1, rec.k))))
        except (ArithmeticError, ValueError) as exc:
            ok = False
            lines.append(f"{fam}: {type(exc).__name__}")
            continue
        good = cs <= 1e-12 and g <= tol
        ok &= good
        lines.append(f"{fam}: colsum {cs:.1e} grad {g:.1e}")
    return ok, "; ".join(lines)


def check_path_independence(seeds=None):
    worst = 0.0
    for fam in ("a", "i", "ii"):
        chart, xi0 = consistency_at(fam, 6, seeds=seeds)
        a = direct_jump(chart, xi0, 6)
        b = lambda_path(chart, xi0, 6, 0.05)[-1].xi
        worst = max(worst, float(np.max(np.abs(a - b))))
    return worst <= 1e-10, f"max |jump - path| at k=6 = {worst:.2e} (tol 1e-10)"


# --------------------------------------------------------------------------
# series


def check_expansion_orders(k_values=(1e3, 1e4, 1e5), lead_bound=10.0, full_bound=50.0, spread=2.0):
    """Expansion errors over the next-order term: leading-order ratios <= 10; full-order
    ratios bounded and roughly constant in k; Theta_ij - pi/2 scales like 1/k^2."""
    bad = []
    full = {}
    worst_lead = 0.0
    for k in k_values:
        for row in asymptotic_angle_check(k, order="leading"):
            worst_lead = max(worst_lead, row.ratio)
            if row.ratio > lead_bound:
                bad.append(f"{row.name}@{k:g}")
        for row in asymptotic_angle_check(k, order="full"):
            full.setdefault(row.name, []).append(row.ratio)
    for name, r in full.items():
        if max(r) > full_bound or max(r) / min(r) > spread:
            bad.append(f"{name} (full)")
    k1, k2 = 1e3, 1e4
    t1, t2 = (next(r for r in asymptotic_angle_check(k, order="leading") if r.name == "Theta_ij") for k in (k1, k2))
    scale = (t2.measured - math.pi / 2) / (t1.measured - math.pi / 2) / (k2 / k1) ** -2
    if abs(scale - 1) > 0.3:
        bad.append("Theta_ij scaling")
    worst_full = max(max(r) for r in full.values())
    detail = f"leading ratio max {worst_lead:.2f} (<= {lead_bound:g}), full ratio max {worst_full:.1f}, Theta_ij k^-2 scaling {scale:.3f}"
    return not bad, detail + (f"; failing: {', '.join(bad)}" if bad else "")


def _registry(rng, seeds):
    return {
        "kernel": [
            ("orthogonal_invariance", lambda: check_kernel_invariance(rng)),
            ("gradient_vs_fd", lambda: check_kernel_gradient_fd(rng)),
            ("monte_carlo_3sigma", lambda: check_kernel_monte_carlo(rng)),
        ],
        "symmetry": [
            ("gamma_invariance", lambda: check_gamma_invariance(rng)),
            ("equivariance", lambda: check_equivariance(rng)),
            ("isotypic_decomposition", lambda: check_isotypic(rng)),
            ("chart_roundtrip", lambda: check_chart_roundtrip(rng)),
        ],
        "objective": [
            ("reduced_vs_full", lambda: check_reduced_vs_full(rng)),
            ("gradient_vs_fd", lambda: check_gradient_fd(rng)),
            ("sigma0_zero_set", lambda: check_sigma0(rng)),
        ],
        "consistency": [("seeds_reach_critical_points", lambda: check_seeds(seeds))],
        "continuation": [("jump_equals_path", lambda: check_path_independence(seeds))],
        "series": [("expansion_orders", check_expansion_orders)],
    }


def resolve_suite(name):
    key = SUITE_ALIASES.get(name, name)
    if key not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    return key


def run_verify(only=None, seeds=None, rng_seed=20240601):
    """Run all suites (or those in ``only``); returns a list of CheckResult."""
    rng = np.random.default_rng(rng_seed)
    selected = SUITES if not only else tuple(resolve_suite(s) for s in only)
    reg = _registry(rng, seeds)
    results = []
    for suite in SUITES:
        if suite not in selected:
            continue
        for name, fn in reg[suite]:
            t0 = time.perf_counter()
            try:
                ok, detail = fn()
            except (ArithmeticError, ValueError) as exc:
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            results.append(CheckResult(suite, name, bool(ok), detail, time.perf_counter() - t0))
    return results
