"""Input validation helpers."""

import math
import numbers

import numpy as np

from .errors import DimensionMismatch, DomainError, ZeroVector


def check_lambda(lam):
    lam = float(lam)
    if not (0.0 <= lam <= 1.0) or math.isnan(lam):
        raise DomainError(f"lambda must lie in [0, 1], got {lam!r}")
    return lam


def check_k(k, minimum=2):
    if isinstance(k, bool) or not isinstance(k, numbers.Real):
        raise DomainError(f"k must be a real number, got {k!r}")
    k = float(k)
    if not math.isfinite(k) or k < minimum:
        raise DomainError(f"k must be >= {minimum}, got {k!r}")
    return k


def check_int_k(k, minimum=2):
    if isinstance(k, bool) or int(k) != k:
        raise DomainError(f"k must be an integer here, got {k!r}")
    k = int(k)
    if k < minimum:
        raise DomainError(f"k must be >= {minimum}, got {k!r}")
    return k


def check_vector(w, name="w", nonzero=True):
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise DimensionMismatch(f"{name} must be one-dimensional, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise DomainError(f"{name} has non-finite entries")
    if nonzero and not np.any(w):
        raise ZeroVector(f"{name} is the zero vector")
    return w


def check_pair(w, v):
    w = check_vector(w, "w")
    v = check_vector(v, "v")
    if w.shape != v.shape:
        raise DimensionMismatch(f"shape mismatch {w.shape} vs {v.shape}")
    return w, v


def check_matrix(W, square=True):
    W = np.asarray(W, dtype=float)
    if W.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {W.shape}")
    if square and W.shape[0] != W.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {W.shape}")
    if not np.all(np.isfinite(W)):
        raise DomainError("matrix has non-finite entries")
    return W


def check_rows_nonzero(W):
    norms = np.linalg.norm(W, axis=1)
    if np.any(norms == 0.0):
        raise ZeroVector(f"row {int(np.argmin(norms))} is zero")
    return norms
