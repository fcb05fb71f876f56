"""One test per acceptance criterion; each prints a PASS/FAIL line with its timing."""

import pytest

from dehnfloer import acceptance

pytestmark = pytest.mark.acceptance


@pytest.mark.parametrize("check", acceptance.CRITERIA, ids=lambda f: f.__name__)
def test_criterion(check, capsys):
    result = check()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
    assert result.elapsed < result.budget, f"took {result.elapsed:.2f}s, budget {result.budget:g}s"
