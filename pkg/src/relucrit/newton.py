"""Damped Newton-Raphson for small dense systems with finite-difference Jacobians."""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotAdmissible, SingularJacobian

log = logging.getLogger(__name__)


@dataclass
class NewtonConfig:
    """Solver settings.

    ``tol_residual`` is the target infinity-norm.  When round-off makes that
    target unreachable (large k), the iteration stops once a full Newton step
    no longer reduces the residual and the residual is below ``tol_stall``.
    """

    max_iters: int = 50
    tol_residual: float = 1e-13
    fd_step: float = 1e-7
    damping: bool = True
    max_halvings: int = 20
    tol_stall: float = 1e-10

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.tol_residual > 0:
            raise ValueError("tol_residual must be positive")


@dataclass
class NewtonResult:
    x: np.ndarray
    residual: float
    iterations: int
    status: str


def fd_jacobian(fun, x, step=1e-7):
    """Central-difference Jacobian, step max(step, step*|x_j|) per column."""
    x = np.asarray(x, dtype=float)
    cols = []
    for j in range(x.size):
        h = max(step, step * abs(x[j]))
        xp, xm = x.copy(), x.copy()
        xp[j] += h
        xm[j] -= h
        cols.append((np.asarray(fun(xp)) - np.asarray(fun(xm))) / (2 * h))
    return np.column_stack(cols)


def _norm(r):
    return float(np.max(np.abs(r)))


def newton_solve(fun, x0, cfg=None, jac=None):
    cfg = cfg or NewtonConfig()
    x = np.array(x0, dtype=float)
    r = np.asarray(fun(x), dtype=float)
    res = _norm(r)
    for it in range(cfg.max_iters + 1):
        if res <= cfg.tol_residual:
            return NewtonResult(x, res, it, "converged")
        if it == cfg.max_iters:
            break
        J = jac(x) if jac is not None else fd_jacobian(fun, x, cfg.fd_step)
        if not np.all(np.isfinite(J)) or np.linalg.cond(J) > 1e15:
            raise SingularJacobian(f"Jacobian is singular at iteration {it}")
        # LAPACK getrf/getrs: LU with partial pivoting
        dx = np.linalg.solve(J, -r)
        t = 1.0
        accepted = False
        for _ in range(cfg.max_halvings + 1 if cfg.damping else 1):
            xt = x + t * dx
            try:
                rt = np.asarray(fun(xt), dtype=float)
            except NotAdmissible:
                rt = None
            if rt is not None and np.all(np.isfinite(rt)) and (_norm(rt) < res or not cfg.damping):
                accepted = True
                break
            t *= 0.5
        if not accepted:
            if res <= cfg.tol_stall:
                return NewtonResult(x, res, it, "stalled")
            raise NoConvergence(f"no descent step at iteration {it} (residual {res:.3e})", partial=x)
        new_res = _norm(rt)
        stagnant = new_res > 0.5 * res and new_res <= cfg.tol_stall
        x, r, res = xt, rt, new_res
        if stagnant and res > cfg.tol_residual:
            # round-off floor reached
            return NewtonResult(x, res, it + 1, "stalled")
        log.debug("newton it=%d residual=%.3e step=%g", it, res, t)
    if res <= cfg.tol_stall:
        return NewtonResult(x, res, cfg.max_iters, "stalled")
    raise NoConvergence(f"no convergence in {cfg.max_iters} iterations (residual {res:.3e})", partial=x)
