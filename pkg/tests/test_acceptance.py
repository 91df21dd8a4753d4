"""Acceptance criteria 1-13, one test each.

Every criterion prints a single PASS/FAIL line (also repeated in the
terminal summary). Criterion 13, the n=12 sweep over 200 values of p, is
the slowest item and is marked ``slow``; it still runs by default.
"""

import pytest

from coverplace.verify import CHECKS, run_check

RESULTS = []


def _param(check):
    marks = [pytest.mark.slow] if check.full_only else []
    return pytest.param(check, id=f"criterion{check.criterion:02d}", marks=marks)


@pytest.mark.parametrize("check", [_param(c) for c in CHECKS])
def test_criterion(check, capsys):
    result = run_check(check, seed=0)
    RESULTS.append(result)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
