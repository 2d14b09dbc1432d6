import numpy as np
import pytest

import rumba
from rumba.intlinalg import IntMatrix


@pytest.fixture(scope="session")
def ds98():
    return rumba.ds98_instance()


@pytest.fixture(scope="session")
def ak4():
    return rumba.ak_model(4)


@pytest.fixture(scope="session")
def indep3():
    """3x3 independence model with unit margins; fiber = 6 permutation matrices."""
    return rumba.independence_model(3, 3, np.eye(3, dtype=np.int64))


@pytest.fixture(scope="session")
def indep2():
    """2x2 independence model with unit margins; fiber = 2 tables."""
    return rumba.independence_model(2, 2, np.eye(2, dtype=np.int64))


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def int_matrix(rows) -> IntMatrix:
    return IntMatrix(np.array(rows, dtype=np.int64))
