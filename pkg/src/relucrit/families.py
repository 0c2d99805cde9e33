"""Family-level drivers: seed -> consistency solution at k -> critical point at k."""

from dataclasses import dataclass

import numpy as np

from .consistency import k_track, solve_consistency
from .continuation import direct_jump
from .newton import NewtonConfig
from .seeds import load_seeds, seed_for

FAMILIES = ("a", "i", "ii", "m")
DK_FIXED = 0.1


@dataclass
class FamilyPoint:
    family: str
    k: float
    xi0: np.ndarray
    xi1: np.ndarray
    newton_iterations: int
    status: str


def consistency_at(family, k, cfg=None, seeds=None, fixed_step=False):
    """Consistency solution of ``family`` at real k, k-tracked from the family seed.

    ``fixed_step`` uses the 0.1 k-increment throughout; otherwise the step adapts.
    """
    rec = seed_for(family, seeds if seeds is not None else load_seeds())
    chart = rec.chart
    cfg = cfg or NewtonConfig()
    x = solve_consistency(chart, rec.k, rec.xi, cfg)
    if float(k) == float(rec.k):
        return chart, x
    if fixed_step:
        path = k_track(chart, x, rec.k, k, DK_FIXED, cfg)
    else:
        path = k_track(chart, x, rec.k, k, DK_FIXED, cfg, adaptive=True, dk_max=max(1.0, abs(k - rec.k) / 8))
    return chart, path[-1][1]


def critical_point(family, k, cfg=None, seeds=None):
    chart, xi0 = consistency_at(family, k, cfg, seeds)
    xi1, info = direct_jump(chart, xi0, k, cfg, return_info=True)
    return FamilyPoint(str(family).lower(), float(k), xi0, xi1, info.iterations, info.status)
