"""Tests for the property-suite runner."""

import pytest

from relucrit.seeds import load_seeds, parse_seeds
from relucrit.verify import SUITES, check_seeds, resolve_suite, run_verify


class TestRunVerify:
    """run_verify and suite selection."""

    def test_all_pass(self):
        """Every suite passes with the built-in seeds."""
        results = run_verify()
        assert {r.suite for r in results} == set(SUITES)
        assert all(r.passed for r in results), [r for r in results if not r.passed]

    def test_aliases(self):
        """Module names resolve to suites."""
        assert resolve_suite("symmetry_charts") == "symmetry"
        with pytest.raises(ValueError):
            resolve_suite("nothing")

    def test_only(self):
        """--only restricts the run."""
        assert {r.suite for r in run_verify(["continuation"])} == {"continuation"}


class TestSeeds:
    """Seed parsing and the seed check."""

    def test_default_families(self):
        """Built-in seeds cover a, i, ii, m."""
        assert {r.family for r in load_seeds()} == {"a", "i", "ii", "m"}

    def test_malformed(self):
        """Wrong lengths and missing keys raise ValueError."""
        with pytest.raises(ValueError):
            parse_seeds("family=a\nk=6\nxi=1\n")
        with pytest.raises(ValueError):
            parse_seeds("family=a\nk=6\n")

    def test_wrong_seed_fails_check(self):
        """A seed far from any solution makes the seed check fail rather than crash."""
        recs = parse_seeds("family=ii\nk=6\nxi=1e6,1e6,1e6,1e6,1e6\n")
        ok, detail = check_seeds(recs)
        assert not ok and "ii" in detail
