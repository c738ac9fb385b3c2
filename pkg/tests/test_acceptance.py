"""Acceptance gate: every criterion at its stated genera and tolerance."""

import pytest

from hvol.verify import CHECKS, run_check


@pytest.mark.parametrize("check", CHECKS, ids=[c.name for c in CHECKS])
def test_criterion(check):
    result = run_check(check)
    print(result.line())
    for failure in result.failures():
        print("   ", failure)
    assert result.passed, result.line()


def test_summary(capsys):
    results = [run_check(c) for c in CHECKS]
    with capsys.disabled():
        print()
        for r in results:
            print(r.line())
    assert all(r.passed for r in results)
