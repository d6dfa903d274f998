"""Acceptance gate: one pass/fail line per validation criterion.

Each criterion cross-checks a bound calculator against the exact
oracle and/or a seeded simulation; the test passes only when the
resulting verdict is "holds" and every checked precondition passed.
"""

import pytest

from driftlab import acceptance
from driftlab.report import HOLDS

_SEED = 0


@pytest.mark.parametrize("criterion", list(acceptance.CRITERIA))
def test_criterion(criterion):
    row = acceptance.CRITERIA[criterion](seed=_SEED)
    assert row.verdict == HOLDS, (
        f"criterion {criterion}: verdict {row.verdict!r} "
        f"(bound {row.bound!r}, oracle {row.oracle!r}, "
        f"sim_mean {row.sim_mean!r}, preconditions {row.preconditions!r})"
    )
