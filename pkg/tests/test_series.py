"""Tests for the large-k series, decay of critical values and closed-form special points."""

import math

import numpy as np
import pytest

from relucrit.charts import embed, in_omega_a
from relucrit.errors import UnknownFamily
from relucrit.families import consistency_at, critical_point
from relucrit.objective import gradient_full, objective_reduced
from relucrit.seeds import family_chart
from relucrit.series import (
    DECAY_LIMITS,
    asymptotic_angle_check,
    closed_form_gamma_points,
    compare_approximations,
    decay_scan,
    psi_k,
    reversed_row_point,
    series_eval,
    series_model,
    z_curve,
)

PI = math.pi


@pytest.fixture(scope="module")
def large_k_points():
    """Type A, I, II critical points at k = 1e2, 1e3, 1e4."""
    return {(f, k): critical_point(f, k) for f in ("a", "i", "ii") for k in (100, 1000, 10_000)}


class TestCoefficients:
    """Closed-form coefficient values."""

    def test_type_ii_decimals(self):
        """c5 = -3.013, d3 = -1.699, e5 = -1.032."""
        m = series_model("ii")
        assert m.coefficient("xi1", 5) == pytest.approx(-3.013, abs=1e-3)
        assert m.coefficient("xi5", 3) == pytest.approx(-1.699, abs=1e-3)
        assert m.coefficient("xi2", 5) == pytest.approx(-1.032, abs=1e-3)

    def test_decimal_only_flags(self):
        """Type I coefficients known only as decimals are flagged."""
        assert ("xi1", 5) in series_model("i").decimal_only
        assert not series_model("ii").decimal_only

    def test_unknown_family(self):
        """Type M has no series."""
        with pytest.raises(UnknownFamily):
            series_model("m")


class TestSeriesEval:
    """Truncated series values at k = 1e4."""

    def test_type_ii(self):
        """xi3 = 2.00000e-4, xi4 = 1.28356e-4, xi5 = -1 + 5.3400e-4."""
        v = series_eval("ii", 1e4, "truncated-3")
        assert v[2] == pytest.approx(2.0e-4, rel=1e-6)
        assert v[3] == pytest.approx(1.28356e-4, rel=1e-5)
        assert v[4] + 1 == pytest.approx(5.3400e-4, rel=1e-4)

    def test_type_a_plus(self):
        """xi1 = -1 + 1.9998546e-4 with four terms."""
        assert series_eval("a", 1e4, "truncated-4")[0] + 1 == pytest.approx(1.9998546e-4, rel=1e-7)

    def test_type_i(self):
        """xi1 = -0.999799988625 to the printed 12 decimals."""
        assert series_eval("i", 1e4)[0] == pytest.approx(-0.999799988625, abs=2e-12)

    def test_bad_variant(self):
        """Unknown variants are rejected."""
        with pytest.raises(ValueError):
            series_eval("a", 100, "truncated-9")


class TestEmpiricalCoefficients:
    """Coefficients extracted from consistency solutions agree with the series."""

    def test_type_i_richardson(self):
        """Three-point Richardson fit over k = 1e3, 1e4, 1e5 matches the n = 2, 3 coefficients."""
        m = series_model("i")
        ks = (1e3, 1e4, 1e5)
        pts = [consistency_at("i", k)[1] for k in ks]
        V = np.vander([1 / math.sqrt(k) for k in ks], 3, increasing=True)
        for i, coord in enumerate(m.coordinates):
            y = [(p[i] - m.constant_terms[coord]) * k for p, k in zip(pts, ks)]
            c2, c3, _ = np.linalg.solve(V, y)
            for got, want in ((c2, m.coefficient(coord, 2)), (c3, m.coefficient(coord, 3))):
                assert abs(got - want) <= max(0.01 * abs(want), 3e-3)


class TestComparison:
    """compare_approximations at k = 1e4."""

    def test_type_ii(self):
        """|c^s_1 - c_1| is tiny; |c^a_3 - c_3| = 4.19e-8 within a factor 3."""
        rows = compare_approximations("ii", 10_000)
        assert rows[0].abs_errors["s"] < 1e-10
        assert 4.19e-8 / 3 <= rows[2].abs_errors["a"] <= 3 * 4.19e-8

    def test_type_a_has_plus(self):
        """Type A rows carry the four-term approximation, which beats three terms."""
        rows = compare_approximations("a", 10_000)
        assert rows[0].approx_series_plus is not None
        assert rows[0].abs_errors["a+"] < rows[0].abs_errors["a"]
        assert 6.5e-10 / 3 <= rows[0].abs_errors["a+"] <= 3 * 6.5e-10


class TestDecay:
    """Decay of critical values."""

    def test_normalization(self):
        """normalized is k F for II and M and F for A and I."""
        (k, F, n), = decay_scan("ii", [50])
        assert n == pytest.approx(k * F)
        (k, F, n), = decay_scan("a", [50])
        assert n == F

    def test_type_ii_monotone(self, large_k_points):
        """k F(II) approaches 1/2 - 2/pi^2 monotonically over k = 1e2, 1e3, 1e4."""
        limit = DECAY_LIMITS["ii"]
        chart = family_chart("ii")
        gaps = [abs(k * objective_reduced(chart, large_k_points["ii", k].xi1, k) - limit) for k in (100, 1000, 10_000)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 0.01

    def test_limits(self):
        """1/2 - 2/pi^2 = 0.297358 and 1/2 - 1/pi = 0.181690."""
        assert DECAY_LIMITS["ii"] == pytest.approx(0.297358, abs=1e-6)
        assert DECAY_LIMITS["a"] == pytest.approx(0.181690, abs=1e-6)


class TestLargeKStructure:
    """Norms and rows of solved points for growing k."""

    def test_type_ii_rows_converge(self, large_k_points):
        """|w^i - v^i| and |w^k + v^k| decrease over k = 1e2, 1e3 (dense check)."""
        prev = (math.inf, math.inf)
        for k in (100, 1000):
            W = embed(family_chart("ii"), large_k_points["ii", k].xi1, k)
            e = np.eye(k)
            cur = (np.linalg.norm(W[0] - e[0]), np.linalg.norm(W[-1] + e[-1]))
            assert cur[0] < prev[0] and cur[1] < prev[1]
            prev = cur

    @pytest.mark.parametrize("fam", ["a", "i", "ii"])
    def test_frobenius_norm(self, fam, large_k_points):
        """|W| / sqrt(k) - 1 = o(1/k): the row norms are 1 + O(1/k^2) from the series."""
        k = 1000
        W = embed(family_chart(fam), large_k_points[fam, k].xi1, k)
        assert abs((np.linalg.norm(W) / math.sqrt(k) - 1) * k) < 1e-3


class TestGammaPoints:
    """Critical points x 1_{k,k} and the curve z_k(lam)."""

    def test_k2(self):
        """z_2 = 0.534155, y_2 = -0.034155."""
        y, z = closed_form_gamma_points(2)
        assert z == pytest.approx(0.534155, abs=1e-6)
        assert y == pytest.approx(-0.034155, abs=1e-6)

    @pytest.mark.parametrize("k", range(2, 9))
    def test_zeros_of_psi(self, k):
        """y_k and z_k are zeros of Psi^k."""
        y, z = closed_form_gamma_points(k)
        assert abs(psi_k(z, k)) <= 1e-14 and abs(psi_k(y, k)) <= 1e-14

    @pytest.mark.parametrize("k", range(3, 9))
    def test_full_gradient(self, k):
        """The dense gradient at z_k 1 is at most 1e-10."""
        _, z = closed_form_gamma_points(k)
        assert np.max(np.abs(gradient_full(np.full((k, k), z)))) <= 1e-10

    def test_scaling(self):
        """z_k sqrt(k) -> 1/pi (k = 1e4 within 2%)."""
        _, z = closed_form_gamma_points(10_000)
        assert z * 100 == pytest.approx(1 / PI, rel=0.02)

    def test_z_curve(self):
        """z_k(0) = 1/k on both branches; printed k = 1 gives 1; consistent branch matches z_k."""
        v = z_curve(7, 0.0)
        assert v.printed == v.consistent == pytest.approx(1 / 7)
        assert z_curve(1, 0.6).printed == 1.0
        assert z_curve(4, 1.0).consistent == pytest.approx(closed_form_gamma_points(4)[1])


class TestReversedRow:
    """(-y 1; x 1; ...; x 1)."""

    def test_k2(self):
        """x_2 = 3/4 + 1/pi = 1.0683099 and y_2 = 1/pi - 1/4 = 0.0683099."""
        p = reversed_row_point(2)
        assert p.x == pytest.approx(0.75 + 1 / PI, abs=1e-15)
        assert p.y == pytest.approx(1 / PI - 0.25, abs=1e-15)
        assert p.x == pytest.approx(1.068311, abs=1.5e-6)
        assert p.y == pytest.approx(0.068310, abs=1e-6)

    @pytest.mark.parametrize("k", range(2, 7))
    def test_certificate(self, k):
        """Scalar criticality residual is at most 1e-10, confirmed by the dense gradient."""
        p = reversed_row_point(k)
        assert p.certificate <= 1e-10
        assert np.max(np.abs(gradient_full(p.W))) <= 1e-10

    def test_not_admissible(self):
        """Parallel rows put the point outside Omega_a."""
        assert not in_omega_a(reversed_row_point(4).W)


class TestAngleCheck:
    """Large-k expansions of the type II geometry."""

    def test_leading_ratios(self):
        """Leading-order deviations over the next order stay below 10 at k = 1e4."""
        rows = asymptotic_angle_check(1e4, order="leading")
        assert len(rows) == 9
        assert max(r.ratio for r in rows) <= 10

    def test_full_ratios_bounded(self):
        """Full-order ratios stay bounded and stable across k = 1e3, 1e4, 1e5."""
        ratios = [[r.ratio for r in asymptotic_angle_check(k)] for k in (1e3, 1e4, 1e5)]
        assert max(map(max, ratios)) <= 50

    def test_theta_scaling(self):
        """Theta_ij - pi/2 scales like 1/k^2 within 30%."""
        dev = {k: next(r for r in asymptotic_angle_check(k) if r.name == "Theta_ij").measured - PI / 2 for k in (1e3, 1e4)}
        assert dev[1e4] / dev[1e3] == pytest.approx(1e-2, rel=0.3)

    def test_bad_order(self):
        """Unknown orders are rejected."""
        with pytest.raises(ValueError):
            asymptotic_angle_check(100, order="third")
