"""scikit-learn style front end: consistency solution at k, then the lam-path to lam = 1."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .consistency import consistency_residual
from .continuation import PathSample, direct_jump, lambda_path, lambda_step_solve
from .families import FAMILIES, consistency_at
from .newton import NewtonConfig
from .objective import gradient_reduced, objective_reduced
from .validation import check_k, check_lambda

METHODS = ("jump", "path")


class CriticalPointSolver(BaseEstimator):
    """Critical point of a symmetry family for the leaky-ReLU objective at lam = 1.

    Parameters
    ----------
    family : {"a", "i", "ii", "m"}
    k : real >= 3 (>= 5 for family "m")
    method : "jump" runs Newton at lam = 1 from the consistency solution;
        "path" samples lam = lam_inc, 2 lam_inc, ..., 1.
    lam_inc : path increment in (0, 0.5].
    tol : Newton residual target (infinity norm).
    max_iter : Newton iteration cap per solve.
    seeds : optional list of SeedRecord overriding the built-in seeds.
    """

    def __init__(self, family="ii", k=6, method="jump", lam_inc=0.01, tol=1e-13, max_iter=50, seeds=None):
        self.family = family
        self.k = k
        self.method = method
        self.lam_inc = lam_inc
        self.tol = tol
        self.max_iter = max_iter
        self.seeds = seeds

    def _config(self):
        return NewtonConfig(max_iters=int(self.max_iter), tol_residual=float(self.tol))

    def _validate(self):
        fam = str(self.family).lower()
        if fam not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if not 0.0 < float(self.lam_inc) <= 0.5:
            raise ValueError("lam_inc must lie in (0, 0.5]")
        return fam, check_k(self.k, 5 if fam == "m" else 3)

    def fit(self, X=None, y=None):
        """Solve; X and y are ignored (present for API compatibility)."""
        fam, k = self._validate()
        cfg = self._config()
        chart, xi0 = consistency_at(fam, k, cfg, self.seeds)
        if self.method == "jump":
            xi1 = direct_jump(chart, xi0, k, cfg)
            path = [PathSample(1.0, xi1, float(np.max(np.abs(gradient_reduced(chart, xi1, k)))))]
        else:
            path = lambda_path(chart, xi0, k, float(self.lam_inc), cfg)
            xi1 = path[-1].xi
        self.chart_ = chart
        self.k_ = k
        self.xi0_ = xi0
        self.consistency_residual_ = float(np.max(np.abs(consistency_residual(chart, xi0, k))))
        self.xi_ = xi1
        self.residual_ = path[-1].residual_norm
        self.objective_ = float(objective_reduced(chart, xi1, k))
        self.path_ = [PathSample(0.0, xi0, 0.0)] + path
        return self

    def predict(self, lams):
        """xi(lam) for each lam in [0, 1]; returns an array of shape (n, m)."""
        check_is_fitted(self, "xi_")
        lams = np.atleast_1d(np.asarray(lams, dtype=float))
        cfg = self._config()
        known_l = np.array([s.lam for s in self.path_])
        known_x = np.array([s.xi for s in self.path_])
        out = []
        for lam in lams:
            lam = check_lambda(float(lam))
            if lam == 0.0:
                out.append(self.xi0_.copy())
                continue
            # linear interpolation along the stored path as the Newton guess
            guess = np.array([np.interp(lam, known_l, known_x[:, j]) for j in range(known_x.shape[1])])
            out.append(lambda_step_solve(self.chart_, guess, self.k_, lam, cfg))
        return np.array(out)

    def gradient(self, lam=1.0):
        check_is_fitted(self, "xi_")
        return gradient_reduced(self.chart_, self.xi_, self.k_, lam)
