"""Shared fixtures: solved consistency points and critical points at k = 6."""

import numpy as np
import pytest

from relucrit.continuation import direct_jump
from relucrit.families import consistency_at


@pytest.fixture(scope="session")
def k6_points():
    """{family: (chart, xi0, xi1)} for types A, I, II at k = 6."""
    out = {}
    for fam in ("a", "i", "ii"):
        chart, xi0 = consistency_at(fam, 6)
        out[fam] = (chart, xi0, direct_jump(chart, xi0, 6))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion that ran."""
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        passed, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if passed else 'FAIL'} {detail}")
