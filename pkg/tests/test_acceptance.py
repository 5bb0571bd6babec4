"""One test per acceptance criterion; PASS/FAIL lines are printed in the summary."""
import pytest

from codingmaps.acceptance import CRITERIA, run_criterion

from conftest import ACCEPTANCE_RESULTS


@pytest.mark.parametrize("n", sorted(CRITERIA), ids=lambda n: f"criterion_{n}")
def test_criterion(n):
    res = run_criterion(n)
    ACCEPTANCE_RESULTS[n] = res
    print("\n".join(res.report()))
    failed = [f"{c.name}: {c.detail}" for c in res.checks if not c.passed]
    assert res.checks, "criterion ran no checks"
    assert not failed, "\n".join(failed)
