import numpy as np
import pytest

import joinpoint as jp

# One seed for every expensive session-level simulation so results are
# reproducible run to run.
SESSION_SEED = 20260818

TABLE_DELTAS = (0.01, 0.05, 0.10)


@pytest.fixture(scope="session")
def example_series():
    return jp.load_example_series()


@pytest.fixture(scope="session")
def table_nulls():
    """Full-size limit-process nulls for the three tabulated trimmings."""
    return {
        delta: jp.simulate_limit_null(delta=delta, grid_size=1000,
                                      replicates=100000, seed=SESSION_SEED)
        for delta in TABLE_DELTAS
    }


@pytest.fixture(scope="session")
def null_005(table_nulls):
    return table_nulls[0.05]


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
