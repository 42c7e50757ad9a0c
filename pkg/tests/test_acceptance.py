"""One test per acceptance criterion; each prints a PASS/FAIL line (see with -s)."""

import pytest

from quadrank.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, len(CRITERIA) + 1)])
def test_criterion(criterion, capsys):
    result = criterion()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail
