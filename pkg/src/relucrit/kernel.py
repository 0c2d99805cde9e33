"""Arc-cosine kernel of the (leaky) ReLU student-teacher loss.

All functions are pure.  ``lam`` interpolates between the linear
network (``lam=0``) and ReLU (``lam=1``).
"""

import math

import numpy as np

from .errors import DomainError
from .validation import check_lambda, check_pair

COS_SLACK = 1e-9


def angle_between(w, v):
    """Angle in [0, pi] between two nonzero vectors."""
    w, v = check_pair(w, v)
    c = float(np.dot(w, v) / (np.linalg.norm(w) * np.linalg.norm(v)))
    if abs(c) > 1.0 + COS_SLACK:
        raise DomainError(f"cosine {c!r} outside [-1, 1]")
    return math.acos(min(1.0, max(-1.0, c)))


def kernel_f_lambda(w, v, lam):
    w, v = check_pair(w, v)
    lam = check_lambda(lam)
    theta = angle_between(w, v)
    nw, nv = np.linalg.norm(w), np.linalg.norm(v)
    ip = float(np.dot(w, v))
    return lam * nw * nv / (2 * math.pi) * (math.sin(theta) - theta * math.cos(theta)) + ip / 2


def kernel_grad_lambda(w, v, lam):
    """Gradient of ``kernel_f_lambda`` with respect to ``w``."""
    w, v = check_pair(w, v)
    lam = check_lambda(lam)
    theta = angle_between(w, v)
    nw, nv = np.linalg.norm(w), np.linalg.norm(v)
    return lam / (2 * math.pi) * (nv * math.sin(theta) / nw * w - theta * v) + v / 2


def alpha_from_lambda(lam):
    """Invert lam = a^2 / (2 + a^2 - 2a) for the leak parameter a in [0, 1]."""
    lam = check_lambda(lam)
    if lam == 1.0:
        return 1.0
    # root of a^2 (1 - lam) + 2 lam a - 2 lam = 0
    return (-lam + math.sqrt(2 * lam - lam * lam)) / (1 - lam)


def leaky_relu(t, alpha):
    return np.maximum(t, (1 - alpha) * t)


def mc_kernel_estimate(w, v, lam, n, seed):
    """Monte-Carlo estimate of f_lam(w, v) under standard Gaussian inputs."""
    w, v = check_pair(w, v)
    lam = check_lambda(lam)
    if int(n) < 1:
        raise DomainError("n must be >= 1")
    alpha = alpha_from_lambda(lam)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((int(n), w.shape[0]))
    prod = leaky_relu(x @ w, alpha) * leaky_relu(x @ v, alpha)
    return float(prod.mean() / (2 + alpha * alpha - 2 * alpha))


def mc_kernel_samples(w, v, lam, n, seed):
    """Per-sample normalized products, useful for standard-error estimates."""
    w, v = check_pair(w, v)
    alpha = alpha_from_lambda(lam)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((int(n), w.shape[0]))
    return leaky_relu(x @ w, alpha) * leaky_relu(x @ v, alpha) / (2 + alpha * alpha - 2 * alpha)


def stable_angle(w, v):
    """Angle via 2*atan2(|u - z|, |u + z|) on unit vectors; accurate near 0 and pi."""
    w, v = check_pair(w, v)
    u = w / np.linalg.norm(w)
    z = v / np.linalg.norm(v)
    return 2.0 * math.atan2(np.linalg.norm(u - z), np.linalg.norm(u + z))
