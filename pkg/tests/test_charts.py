"""Tests for fixed-point charts, the group action and the isotypic splitting."""

import numpy as np
import pytest

from relucrit.charts import (
    DELTA_SK,
    DELTA_SK1,
    Chart,
    column_sums,
    compose,
    embed,
    extract,
    group_act,
    in_omega_a,
    isotropy_contains,
    isotypic_project,
)
from relucrit.errors import DimensionMismatch, NotInFixedSpace, UnsupportedChart

BLOCK2 = Chart.from_p(2)


class TestChart:
    """Chart descriptors."""

    def test_dimensions(self):
        """m = 2, 5, 6 for p = 0, 1, >= 2."""
        assert (DELTA_SK.m, DELTA_SK1.m, BLOCK2.m, Chart.from_p(3).m) == (2, 5, 6, 6)

    def test_bad_family(self):
        """Unknown families and wrong p are rejected."""
        with pytest.raises(UnsupportedChart):
            Chart("Nope", 0)
        with pytest.raises(UnsupportedChart):
            Chart("DeltaSk1", 0)


class TestEmbedExtract:
    """embed and extract."""

    def test_identity(self):
        """(1, 0) and (1, 0, 0, 0, 1) embed to the identity."""
        np.testing.assert_array_equal(embed(DELTA_SK, [1, 0], 4), np.eye(4))
        np.testing.assert_array_equal(embed(DELTA_SK1, [1, 0, 0, 0, 1], 6), np.eye(6))
        np.testing.assert_array_equal(extract(DELTA_SK, np.eye(4)), [1, 0])

    def test_small_p1_layout(self):
        """k = 3, p = 1 puts xi3 in the last column and xi4 in the last row."""
        a, b, e, f, g = 1.0, 2.0, 3.0, 4.0, 5.0
        W = embed(DELTA_SK1, [a, b, e, f, g], 3)
        np.testing.assert_array_equal(W, [[a, b, e], [b, a, e], [f, f, g]])

    def test_block_layout(self):
        """p = 2 uses two A blocks and constant off-diagonal blocks."""
        W = embed(BLOCK2, [1, 2, 3, 4, 5, 6], 5)
        assert W[0, 0] == 1 and W[0, 1] == 2 and W[1, 4] == 3 and W[3, 2] == 4
        assert W[3, 3] == 5 and W[3, 4] == 6 and W[4, 4] == 5

    def test_round_trip(self, rng):
        """extract(embed(xi)) = xi for random xi on all charts."""
        for chart in (DELTA_SK, DELTA_SK1, BLOCK2):
            for k in (4, 7):
                xi = rng.standard_normal(chart.m)
                np.testing.assert_allclose(extract(chart, embed(chart, xi, k)), xi, atol=1e-15)

    def test_not_fixed(self):
        """Breaking the entry pattern raises NotInFixedSpace."""
        W = embed(DELTA_SK1, [1, 0.2, 0.3, 0.4, 0.5], 5)
        W[0, 2] += 1e-3
        with pytest.raises(NotInFixedSpace):
            extract(DELTA_SK1, W)

    def test_k_too_small(self):
        """k < p + 2 is a DimensionMismatch."""
        with pytest.raises(DimensionMismatch):
            embed(BLOCK2, np.zeros(6), 3)

    def test_wrong_length(self):
        """Coordinate vectors must have length m."""
        with pytest.raises(DimensionMismatch):
            embed(DELTA_SK1, [1, 2], 5)


class TestColumnSums:
    """Closed-form column sums."""

    @pytest.mark.parametrize("chart,k", [(DELTA_SK, 5), (DELTA_SK1, 6), (BLOCK2, 7)])
    def test_match_matrix(self, chart, k, rng):
        """The distinct closed-form sums equal the matrix column sums."""
        xi = rng.standard_normal(chart.m)
        W = embed(chart, xi, k)
        sums = column_sums(chart, xi, k)
        assert set(np.round(W.sum(axis=0), 12)) == set(np.round(sums, 12))

    def test_block_formula(self):
        """p = 2: xi1 + (k-3) xi2 + 2 xi4 and (k-2) xi3 + xi5 + xi6."""
        xi = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        np.testing.assert_allclose(column_sums(BLOCK2, xi, 7), [1 + 4 * 2 + 2 * 4, 5 * 3 + 5 + 6])


class TestGroupAction:
    """The S_k x S_k action."""

    def test_identity_action(self, rng):
        """(id, id) fixes every matrix."""
        W = rng.standard_normal((4, 4))
        np.testing.assert_array_equal(group_act(np.arange(4), np.arange(4), W), W)

    def test_swap(self):
        """A row transposition on I_2 gives the swap matrix."""
        np.testing.assert_array_equal(group_act([1, 0], [0, 1], np.eye(2)), [[0, 1], [1, 0]])

    def test_diagonal_fixes_delta_sk(self, rng):
        """(rho, rho) fixes embed(DeltaSk, xi)."""
        W = embed(DELTA_SK, [0.3, -0.7], 5)
        rho = rng.permutation(5)
        np.testing.assert_array_equal(group_act(rho, rho, W), W)

    def test_is_an_action(self, rng):
        """act(g1 g2) = act(g1) act(g2)."""
        for _ in range(100):
            k = 5
            W = rng.standard_normal((k, k))
            r1, r2, e1, e2 = (rng.permutation(k) for _ in range(4))
            lhs = group_act(compose(r1, r2), compose(e1, e2), W)
            rhs = group_act(r1, e1, group_act(r2, e2, W))
            np.testing.assert_array_equal(lhs, rhs)

    def test_bad_permutation(self):
        """Non-permutations are rejected."""
        with pytest.raises(DimensionMismatch):
            group_act([0, 0], [0, 1], np.eye(2))


class TestIsotropy:
    """isotropy_contains."""

    def test_identity_all_charts(self):
        """The identity has every chart isotropy."""
        for chart in (DELTA_SK, DELTA_SK1, BLOCK2):
            assert isotropy_contains(np.eye(6), chart)

    def test_embedded(self, rng):
        """Embedded matrices carry their chart isotropy."""
        for chart in (DELTA_SK, DELTA_SK1, BLOCK2):
            assert isotropy_contains(embed(chart, rng.standard_normal(chart.m), 6), chart)

    def test_random_dense(self, rng):
        """A random dense matrix has none."""
        assert not isotropy_contains(rng.standard_normal((5, 5)), DELTA_SK1)


class TestIsotypic:
    """Isotypic decomposition I + C1 + R1 + A."""

    def test_ones(self):
        """The all-ones matrix is purely trivial."""
        parts = isotypic_project(np.ones((4, 4)))
        np.testing.assert_allclose(parts.part_I, np.ones((4, 4)))
        for p in (parts.part_C1, parts.part_R1, parts.part_A):
            np.testing.assert_allclose(p, 0, atol=1e-15)

    def test_identity(self):
        """I_3 splits into (1/3) 1 plus I_3 - (1/3) 1."""
        parts = isotypic_project(np.eye(3))
        np.testing.assert_allclose(parts.part_I, np.full((3, 3), 1 / 3))
        np.testing.assert_allclose(parts.part_R1, 0, atol=1e-15)
        np.testing.assert_allclose(parts.part_C1, 0, atol=1e-15)
        np.testing.assert_allclose(parts.part_A, np.eye(3) - 1 / 3, atol=1e-15)

    def test_properties(self, rng):
        """Reconstruction, orthogonality, identical R1 rows, zero A row/column sums."""
        for k in (2, 5, 9):
            W = rng.standard_normal((k, k))
            nrm = np.linalg.norm(W)
            parts = isotypic_project(W).as_tuple()
            assert np.max(np.abs(sum(parts) - W)) <= 1e-13 * nrm
            for i in range(4):
                for j in range(i + 1, 4):
                    assert abs(np.sum(parts[i] * parts[j])) <= 1e-12 * nrm ** 2
            R1, A = parts[2], parts[3]
            assert np.max(np.abs(R1 - R1[0])) == 0.0 and abs(R1[0].sum()) <= 1e-12
            assert np.max(np.abs(A.sum(axis=0))) <= 1e-12 and np.max(np.abs(A.sum(axis=1))) <= 1e-12

    def test_dimensions(self):
        """Projected bases span dimensions 1, k-1, k-1, (k-1)^2."""
        for k in (3, 4, 6):
            basis = np.eye(k * k).reshape(-1, k, k)
            projected = [isotypic_project(B).as_tuple() for B in basis]
            ranks = [np.linalg.matrix_rank(np.array([p[i].ravel() for p in projected])) for i in range(4)]
            assert ranks == [1, k - 1, k - 1, (k - 1) ** 2]


class TestOmegaA:
    """Admissibility."""

    def test_identity_not_admissible(self):
        """Rows of I_k are parallel to target rows."""
        assert not in_omega_a(np.eye(4))

    def test_equal_rows(self, rng):
        """Two equal rows are parallel."""
        W = rng.standard_normal((4, 4))
        W[1] = W[0]
        assert not in_omega_a(W)

    def test_type_ii_point(self, k6_points):
        """The solved type II point is admissible."""
        chart, _, xi1 = k6_points["ii"]
        assert in_omega_a(embed(chart, xi1, 6))
