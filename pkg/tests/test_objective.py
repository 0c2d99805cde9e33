"""Tests for the dense and chart-reduced objective and gradient."""

import math

import numpy as np
import pytest

from relucrit.charts import DELTA_SK, DELTA_SK1, Chart, embed
from relucrit.errors import SizeLimit, UnsupportedChart
from relucrit.objective import (
    critical_residual_lambda1,
    gradient_full,
    gradient_reduced,
    objective_full,
    objective_reduced,
    reduced_geometry,
    structured_terms,
)

CHARTS = (DELTA_SK, DELTA_SK1, Chart.from_p(2))


def _random_xi(rng, chart):
    xi = rng.uniform(-1, 1, chart.m)
    xi[0] += 1.5  # keep the diagonal dominant so rows stay non-parallel
    return xi


class TestFullObjective:
    """Dense objective and gradient."""

    def test_zero_at_target(self):
        """F(I) = 0 and Phi(I) = 0 for every lam."""
        for lam in (0.0, 0.4, 1.0):
            assert objective_full(np.eye(5), lam) == pytest.approx(0.0, abs=1e-14)
            np.testing.assert_allclose(gradient_full(np.eye(5), lam), 0.0, atol=1e-15)

    def test_nonnegative(self, rng):
        """F is a squared error, hence >= 0."""
        for _ in range(20):
            assert objective_full(rng.standard_normal((4, 4)), rng.uniform()) >= -1e-14

    def test_linear_case(self, rng):
        """At lam = 0, F = 1/4 |(W - I)^T 1|^2."""
        W = rng.standard_normal((4, 4))
        expected = 0.25 * np.sum((W - np.eye(4)).sum(axis=0) ** 2)
        assert objective_full(W, 0.0) == pytest.approx(expected, rel=1e-12)

    def test_gradient_fd(self, rng):
        """Phi agrees with central differences of F."""
        h = 1e-6
        W = rng.standard_normal((4, 4))
        G = gradient_full(W, 0.8)
        fd = np.zeros_like(W)
        for i in range(4):
            for j in range(4):
                E = np.zeros_like(W)
                E[i, j] = h
                fd[i, j] = (objective_full(W + E, 0.8) - objective_full(W - E, 0.8)) / (2 * h)
        assert np.max(np.abs(G - fd)) <= 1e-6 * max(1.0, np.max(np.abs(G)))

    def test_size_cap(self):
        """Dense evaluation refuses k > 512."""
        with pytest.raises(SizeLimit):
            objective_full(np.eye(513))


class TestReduced:
    """Chart-reduced evaluation agrees with the dense path."""

    @pytest.mark.parametrize("chart", CHARTS, ids=lambda c: c.family)
    def test_matches_full(self, chart, rng):
        """Objective and gradient entries agree to 1e-12 for k in 4..12."""
        for k in (4, 7, 12):
            xi = _random_xi(rng, chart)
            lam = rng.uniform()
            W = embed(chart, xi, k)
            assert objective_reduced(chart, xi, k, lam) == pytest.approx(objective_full(W, lam), abs=1e-12, rel=1e-12)
            G = gradient_full(W, lam)
            reduced = gradient_reduced(chart, xi, k, lam)
            assert set(np.round(reduced, 10)) <= set(np.round(G.ravel(), 10))

    def test_real_k(self):
        """Reduced evaluation is defined for non-integer k."""
        F = objective_reduced(DELTA_SK1, np.array([1.0, 0.1, 0.05, -0.2, 0.9]), 6.5)
        assert math.isfinite(F) and F >= 0

    def test_geometry_norms(self):
        """tau is the row norm of the first block."""
        xi = np.array([0.8, 0.1])
        g = reduced_geometry(DELTA_SK, xi, 5)
        assert g.tau == pytest.approx(math.sqrt(0.64 + 4 * 0.01))


class TestStructured:
    """Decomposition of F into E, F and G terms."""

    def test_reassembles(self, k6_points):
        """The structured terms reproduce objective_reduced at the type II point."""
        chart, _, xi1 = k6_points["ii"]
        terms = structured_terms(chart, xi1, 6)
        assert terms.objective(6) == pytest.approx(objective_reduced(chart, xi1, 6), abs=1e-13)

    def test_p1_only(self):
        """Other charts are rejected."""
        with pytest.raises(UnsupportedChart):
            structured_terms(DELTA_SK, np.array([1.0, 0.0]), 5)


class TestMinimalEquations:
    """Minimal lam = 1 critical-point equations."""

    @pytest.mark.parametrize("fam", ["a", "i", "ii"])
    def test_vanish_at_critical_points(self, fam, k6_points):
        """The minimal equations vanish at solved critical points."""
        chart, _, xi1 = k6_points[fam]
        assert np.max(np.abs(critical_residual_lambda1(chart, xi1, 6))) <= 1e-10

    def test_nonzero_elsewhere(self, k6_points):
        """They do not vanish at the consistency point."""
        chart, xi0, _ = k6_points["ii"]
        assert np.max(np.abs(critical_residual_lambda1(chart, xi0, 6))) > 1e-6
