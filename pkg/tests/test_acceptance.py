"""Acceptance suite: the eleven desk-scale criteria, run at full scale.

Each test prints its own pass/fail line so the suite doubles as a report
(`pytest -s tests/test_acceptance.py`).  All identities are exact.
"""

import pytest

from permutree_lab import verify


def _run(criterion):
    result = criterion(level="full")
    mark = "PASS" if result["ok"] else "FAIL"
    print(f"[{mark}] criterion {result['id']}: {result['name']} ({result['detail']})")
    assert result["ok"], result


@pytest.mark.parametrize(
    "criterion",
    verify.ALL_CRITERIA,
    ids=[f"criterion_{i}" for i in range(1, len(verify.ALL_CRITERIA) + 1)],
)
def test_acceptance(criterion):
    _run(criterion)
