import os
import tempfile

os.environ.setdefault(
    "TROPICALKEX_LOG_DIR", os.path.join(tempfile.gettempdir(), "tropicalkex-test-logs")
)

import pytest  # noqa: E402

from algebra.tropical_core import INF, TropicalMatrix  # noqa: E402
from harness.instance_config import InstanceConfig  # noqa: E402


@pytest.fixture()
def false_period_pair():
    """
    M = 0, H = [[-1, 2], [INF, 0]].

    D_1 = D_2 = D_3 = [[-1, 0], [-1, 0]] and D_n = [[-1, -1], [-1, -1]] from n = 4,
    so the first repeat (d=0, rho=1) passes a window of 2 but is not the real period
    (d=3, rho=1).
    """
    return TropicalMatrix.zeros(2), TropicalMatrix([[-1, 2], [INF, 0]])


@pytest.fixture()
def degenerate_pair():
    """M_n = H for every n >= 2, so the differences vanish after D_1."""
    return TropicalMatrix([[5, 5], [5, 5]]), TropicalMatrix([[1, 2], [3, 1]])


@pytest.fixture()
def desk_config():
    """Small instances that attack in well under a second each."""
    return InstanceConfig(
        order=4, entry_min=-100, entry_max=100, exp_min=1, exp_max=10**6, seed=7, trials=3
    )
