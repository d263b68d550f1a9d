"""The ten acceptance criteria, one test each.

Each result line is printed as the test runs and repeated in the terminal
summary, so ``pytest -v`` output shows a pass/fail line per criterion.
"""

import pytest

from padicfact import acceptance

RESULTS: dict[int, acceptance.CriterionResult] = {}


@pytest.mark.parametrize("number", sorted(acceptance.RUNNERS))
def test_criterion(number):
    result = acceptance.RUNNERS[number]()
    RESULTS[number] = result
    print(result.line())
    assert result.passed, result.to_json()
