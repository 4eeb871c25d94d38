"""Acceptance gate: every criterion must pass within its stated budget.

The whole suite runs once (module-scoped) and each parametrized test
asserts one criterion, so `pytest -v` shows a pass/fail line per
criterion; the suite's own one-line-per-criterion log is printed too.
"""

import pytest

from relgl.acceptance import CRITERIA, run_acceptance_suite


@pytest.fixture(scope="module")
def suite():
    return run_acceptance_suite(workers=2, seed=0,
                                emit=lambda line: print(line, flush=True))


@pytest.fixture(scope="module")
def by_criterion(suite):
    return {r["criterion"]: r for r in suite["results"]}


@pytest.mark.parametrize(
    "num,name,budget",
    [(num, name, budget) for num, name, _, budget in CRITERIA],
    ids=[f"criterion-{num:02d}" for num, *_ in CRITERIA])
def test_criterion(by_criterion, num, name, budget):
    r = by_criterion[num]
    assert r["verdict"] == "pass", (name, r["details"])
    if budget is not None:
        assert r["elapsed_s"] <= budget, \
            f"{name}: {r['elapsed_s']}s over the {budget}s budget"


def test_suite_summary(suite):
    assert suite["all_pass"]
    assert suite["exit_code"] == 0
    assert len(suite["results"]) == len(CRITERIA)
