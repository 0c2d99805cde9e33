"""Symmetric critical points of the two-layer ReLU student-teacher objective."""

from .charts import DELTA_SK, DELTA_SK1, Chart, embed, extract, group_act, isotypic_project
from .consistency import ConsistencySeed, consistency_residual, k_track, solve_consistency
from .continuation import direct_jump, initial_derivative, lambda_path, lambda_step_solve
from .estimator import CriticalPointSolver
from .families import FAMILIES, consistency_at, critical_point
from .kernel import kernel_f_lambda, kernel_grad_lambda
from .newton import NewtonConfig
from .objective import gradient_full, gradient_reduced, objective_full, objective_reduced
from .series import compare_approximations, decay_scan, series_eval

__version__ = "0.1.0"

__all__ = [
    "Chart",
    "ConsistencySeed",
    "CriticalPointSolver",
    "DELTA_SK",
    "DELTA_SK1",
    "FAMILIES",
    "NewtonConfig",
    "compare_approximations",
    "consistency_at",
    "consistency_residual",
    "critical_point",
    "decay_scan",
    "direct_jump",
    "embed",
    "extract",
    "gradient_full",
    "gradient_reduced",
    "group_act",
    "initial_derivative",
    "isotypic_project",
    "k_track",
    "kernel_f_lambda",
    "kernel_grad_lambda",
    "lambda_path",
    "lambda_step_solve",
    "objective_full",
    "objective_reduced",
    "series_eval",
    "solve_consistency",
]
