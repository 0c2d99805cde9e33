"""Tests for the scikit-learn style CriticalPointSolver."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from relucrit import CriticalPointSolver


class TestParams:
    """Parameter handling."""

    def test_get_params_and_clone(self):
        """get_params round-trips and clone keeps parameters."""
        est = CriticalPointSolver(family="i", k=8, method="path", lam_inc=0.1)
        params = est.get_params()
        assert params["family"] == "i" and params["k"] == 8 and params["lam_inc"] == 0.1
        assert clone(est).get_params() == params

    @pytest.mark.parametrize(
        "kwargs",
        [{"family": "x"}, {"method": "euler"}, {"lam_inc": 0.0}, {"lam_inc": 0.7}, {"k": 2}, {"family": "m", "k": 4}],
    )
    def test_invalid(self, kwargs):
        """Invalid settings raise ValueError at fit time."""
        with pytest.raises(ValueError):
            CriticalPointSolver(**kwargs).fit()

    def test_not_fitted(self):
        """predict before fit raises NotFittedError."""
        with pytest.raises(NotFittedError):
            CriticalPointSolver().predict([0.5])


class TestFit:
    """Fitting and prediction."""

    def test_jump(self, k6_points):
        """The jump fit reproduces the fixture point."""
        est = CriticalPointSolver(family="ii", k=6).fit()
        np.testing.assert_allclose(est.xi_, k6_points["ii"][2], atol=1e-12)
        assert est.residual_ <= 1e-12 and est.consistency_residual_ <= 1e-12
        assert est.objective_ > 0
        assert [s.lam for s in est.path_] == [0.0, 1.0]

    def test_path_equals_jump(self):
        """Path and jump fits agree within 1e-10."""
        a = CriticalPointSolver(family="a", k=10).fit()
        b = CriticalPointSolver(family="a", k=10, method="path", lam_inc=0.05).fit()
        assert len(b.path_) == 21
        np.testing.assert_allclose(a.xi_, b.xi_, atol=1e-10)

    def test_predict(self):
        """predict returns xi0 at 0, the fitted point at 1, and path samples in between."""
        est = CriticalPointSolver(family="i", k=6, method="path", lam_inc=0.1).fit()
        out = est.predict([0.0, 0.5, 1.0])
        assert out.shape == (3, 5)
        np.testing.assert_array_equal(out[0], est.xi0_)
        np.testing.assert_allclose(out[1], est.path_[5].xi, atol=1e-12)
        np.testing.assert_allclose(out[2], est.xi_, atol=1e-12)
        assert np.max(np.abs(est.gradient(1.0))) <= 1e-12

    def test_type_m(self):
        """Type M fits on the block chart."""
        est = CriticalPointSolver(family="m", k=8).fit()
        assert est.chart_.p == 2 and est.xi_.shape == (6,)
        assert est.residual_ <= 1e-12
